#include "whitney/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace whitney::verify {

double uniform(Rng& rng, double lo, double hi) {
  // explicit mapping keeps streams identical across standard libraries
  double u = (rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

Simplex random_simplex(Rng& rng, int n, const MetricSignature& g,
                       double min_det,
                       const std::vector<MetricSignature>& also) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Eigen::VectorXd> vertices(n + 1);
    for (auto& v : vertices) {
      v.resize(n);
      for (int c = 0; c < n; ++c) v[c] = uniform(rng, -1.0, 1.0);
    }
    try {
      Simplex s = Simplex::embedded(vertices, g);
      if (std::abs(s.gram_det()) < min_det) continue;
      bool ok = true;
      for (const auto& other : also) {
        Simplex t = Simplex::embedded(vertices, other);
        if (std::abs(t.gram_det()) < min_det) {
          ok = false;
          break;
        }
      }
      if (ok) return s;
    } catch (const DegenerateSimplexError&) {
      continue;
    }
  }
  throw std::runtime_error("random_simplex: rejection sampling failed");
}

SubsimplexRef random_subsimplex(Rng& rng, int n, int j) {
  std::vector<int> all(n + 1);
  for (int i = 0; i <= n; ++i) all[i] = i;
  // Fisher-Yates prefix shuffle
  for (int i = 0; i <= j; ++i) {
    int k = i + static_cast<int>(rng() % (all.size() - i));
    std::swap(all[i], all[k]);
  }
  all.resize(j + 1);
  return SubsimplexRef(std::move(all));
}

KTensor random_ktensor(Rng& rng, int dim, int grade, Variance variance) {
  KTensor t(dim, grade, variance);
  for (int i = 0; i < t.size(); ++i) t[i] = uniform(rng, -1.0, 1.0);
  return t;
}

KTensor random_blade(Rng& rng, int dim, int grade) {
  KTensor b = KTensor::scalar(dim, Variance::vector, 1.0);
  for (int i = 0; i < grade; ++i) {
    KTensor v = random_ktensor(rng, dim, 1, Variance::vector);
    b = wedge(b, v);
  }
  return b;
}

Eigen::VectorXd random_interior_point(Rng& rng, const Simplex& s,
                                      double min_lambda) {
  const int n = s.dim();
  std::vector<double> lambda(n + 1);
  while (true) {
    double total = 0.0;
    for (double& l : lambda) {
      l = -std::log(std::max(uniform(rng, 0.0, 1.0), 1e-300));
      total += l;
    }
    double smallest = 1.0;
    for (double& l : lambda) {
      l /= total;
      smallest = std::min(smallest, l);
    }
    if (smallest >= min_lambda) break;
  }
  return s.point_from_barycentric(lambda);
}

std::vector<MetricSignature> signatures_for(SignatureSet set, int dim) {
  std::vector<MetricSignature> out;
  if (set != SignatureSet::lorentzian) {
    out.push_back(MetricSignature::euclidean(dim));
  }
  if (set != SignatureSet::euclidean && dim >= 2) {
    out.push_back(MetricSignature::lorentzian(dim));
  }
  return out;
}

namespace {

Rng trial_rng(std::uint64_t seed, long trial) {
  return Rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1));
}

// Runs per_trial(t) for t in [0, trials) on up to cfg.threads workers and
// returns the maximum result.  Trials are independently seeded, so the
// outcome is thread-count independent.
template <class F>
double parallel_max(int trials, int threads, F&& per_trial) {
  threads = std::clamp(threads, 1, std::max(1, trials));
  if (threads == 1) {
    double m = 0.0;
    for (int t = 0; t < trials; ++t) m = std::max(m, per_trial(t));
    return m;
  }
  std::atomic<int> next{0};
  std::vector<double> maxima(threads, 0.0);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      int t;
      while ((t = next.fetch_add(1)) < trials) {
        maxima[w] = std::max(maxima[w], per_trial(t));
      }
    });
  }
  for (auto& th : pool) th.join();
  return *std::max_element(maxima.begin(), maxima.end());
}

std::vector<MetricSignature> both_signatures(int dim) {
  return signatures_for(SignatureSet::both, dim);
}

}  // namespace

SuiteResult run_tri_representation(const SuiteConfig& cfg) {
  SuiteResult result{"tri-representation", 0.0, 1e-9, 0};
  for (int n : cfg.dims) {
    for (const auto& g : signatures_for(cfg.signatures, n)) {
      double worst = parallel_max(cfg.trials, cfg.threads, [&](int t) {
        Rng rng = trial_rng(cfg.seed ^ (n * 131 + g.det_sign() + 7), t);
        Simplex s = random_simplex(rng, n, g);
        double m = 0.0;
        for (int j = 0; j <= n; ++j) {
          WhitneyDescriptor w{&s, random_subsimplex(rng, n, j)};
          for (int p = 0; p < cfg.points; ++p) {
            Eigen::VectorXd x = random_interior_point(rng, s);
            KTensor bary = eval_barycentric(w, x);
            KTensor cov = eval_covector(w, x);
            m = std::max(m, (bary - cov).max_abs());
            KTensor U = random_blade(rng, n, j);
            double via_vec = eval_vector(w, x, U);
            m = std::max(m, std::abs(via_vec - apply(cov, U)));
          }
        }
        return m;
      });
      result.max_residual = std::max(result.max_residual, worst);
      result.cases += static_cast<long>(cfg.trials) * (n + 1) * cfg.points * 2;
    }
  }
  return result;
}

SuiteResult run_metric_independence(const SuiteConfig& cfg) {
  SuiteResult result{"metric-independence", 0.0, 1e-10, 0};
  for (int n : cfg.dims) {
    if (n < 2) continue;
    auto sigs = both_signatures(n);
    double worst = parallel_max(cfg.trials, cfg.threads, [&](int t) {
      Rng rng = trial_rng(cfg.seed ^ (n * 977), t);
      Simplex a = random_simplex(rng, n, sigs[0], 1e-3, {sigs[1]});
      std::vector<Eigen::VectorXd> vertices;
      for (int i = 0; i <= n; ++i) vertices.push_back(a.vertex(i));
      Simplex b = Simplex::embedded(vertices, sigs[1]);
      double m = 0.0;
      for (int j = 0; j <= n; ++j) {
        SubsimplexRef rho = random_subsimplex(rng, n, j);
        for (int p = 0; p < cfg.points; ++p) {
          Eigen::VectorXd x = random_interior_point(rng, a);
          KTensor wa = eval_covector({&a, rho}, x);
          KTensor wb = eval_covector({&b, rho}, x);
          m = std::max(m, (wa - wb).max_abs());
        }
      }
      return m;
    });
    result.max_residual = std::max(result.max_residual, worst);
    result.cases += static_cast<long>(cfg.trials) * (n + 1) * cfg.points;
  }
  return result;
}

SuiteResult run_normalization(const SuiteConfig& cfg) {
  SuiteResult result{"normalization", 0.0, 1e-10, 0};
  std::atomic<long> cases{0};
  for (int n : cfg.dims) {
    for (const auto& g : signatures_for(cfg.signatures, n)) {
      double worst = parallel_max(cfg.trials, cfg.threads, [&](int t) {
        Rng rng = trial_rng(cfg.seed ^ (n * 293 + g.det_sign()), t);
        Simplex s = random_simplex(rng, n, g);
        double m = 0.0;
        for (int j = 0; j <= n; ++j) {
          // every j-face, in increasing vertex order
          std::vector<SubsimplexRef> faces;
          std::vector<int> idx(j + 1);
          for (int i = 0; i <= j; ++i) idx[i] = i;
          while (true) {
            faces.emplace_back(idx);
            int pos = j;
            while (pos >= 0 && idx[pos] == n - j + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i <= j; ++i) idx[i] = idx[i - 1] + 1;
          }
          for (const auto& rho : faces) {
            FormField f = covector_field({&s, rho});
            for (const auto& face : faces) {
              double integral = integrate_over_subsimplex(f, s, face);
              double expected =
                  (face.indices == rho.indices) ? 1.0 : 0.0;
              m = std::max(m, std::abs(integral - expected));
              cases.fetch_add(1, std::memory_order_relaxed);
            }
          }
        }
        return m;
      });
      result.max_residual = std::max(result.max_residual, worst);
    }
  }
  result.cases = cases.load();
  return result;
}

SuiteResult run_hodge_identity(const SuiteConfig& cfg) {
  SuiteResult result{"hodge-identity", 0.0, 1e-12, 0};
  for (int n : cfg.dims) {
    for (const auto& g : signatures_for(cfg.signatures, n)) {
      VolumeElement vol = VolumeElement::standard(g);
      double worst = parallel_max(cfg.trials, cfg.threads, [&](int t) {
        Rng rng = trial_rng(cfg.seed ^ (n * 499 + g.det_sign()), t);
        double m = 0.0;
        for (int k = 0; k <= n; ++k) {
          KTensor u = random_ktensor(rng, n, k, Variance::covector);
          KTensor w = random_ktensor(rng, n, k, Variance::covector);
          KTensor lhs = wedge(u, hodge(w, g));
          KTensor rhs = inner(u, w, g) * vol.form;
          m = std::max(m, (lhs - rhs).max_abs());
        }
        return m;
      });
      result.max_residual = std::max(result.max_residual, worst);
      result.cases += static_cast<long>(cfg.trials) * (n + 1);
    }
  }
  return result;
}

SuiteResult run_closedness(const SuiteConfig& cfg) {
  SuiteResult result{"closedness-d-star-w", 0.0, 1e-6, 0};
  const double h = 1e-5;
  for (int n : cfg.dims) {
    for (const auto& g : signatures_for(cfg.signatures, n)) {
      double worst = parallel_max(cfg.trials, cfg.threads, [&](int t) {
        Rng rng = trial_rng(cfg.seed ^ (n * 613 + g.det_sign()), t);
        Simplex s = random_simplex(rng, n, g);
        double m = 0.0;
        for (int j = 1; j <= n; ++j) {
          WhitneyDescriptor w{&s, random_subsimplex(rng, n, j)};
          FormField dual = hodge_dual_field(w);
          for (int p = 0; p < cfg.points; ++p) {
            Eigen::VectorXd x = random_interior_point(rng, s);
            m = std::max(m, exterior_derivative_fd(dual, x, h).max_abs());
          }
        }
        return m;
      });
      result.max_residual = std::max(result.max_residual, worst);
      result.cases += static_cast<long>(cfg.trials) * n * cfg.points;
    }
  }
  return result;
}

SuiteResult run_coclosedness(const SuiteConfig& cfg) {
  SuiteResult result{"coclosedness-delta-w", 0.0, 1e-6, 0};
  const double h = 1e-5;
  for (int n : cfg.dims) {
    for (const auto& g : signatures_for(cfg.signatures, n)) {
      double worst = parallel_max(cfg.trials, cfg.threads, [&](int t) {
        Rng rng = trial_rng(cfg.seed ^ (n * 769 + g.det_sign()), t);
        Simplex s = random_simplex(rng, n, g);
        double m = 0.0;
        for (int j = 1; j <= n; ++j) {
          WhitneyDescriptor w{&s, random_subsimplex(rng, n, j)};
          FormField f = covector_field(w);
          for (int p = 0; p < cfg.points; ++p) {
            Eigen::VectorXd x = random_interior_point(rng, s);
            m = std::max(m, codifferential_fd(f, s.signature(), x, h).max_abs());
          }
        }
        return m;
      });
      result.max_residual = std::max(result.max_residual, worst);
      result.cases += static_cast<long>(cfg.trials) * n * cfg.points;
    }
  }
  return result;
}

SuiteResult run_decomposition(const SuiteConfig& cfg) {
  SuiteResult result{"decomposition", 0.0, 1e-9, 0};
  std::atomic<long> cases{0};
  for (int n : cfg.dims) {
    if (n < 2) continue;
    for (const auto& g : signatures_for(cfg.signatures, n)) {
      double worst = parallel_max(cfg.trials, cfg.threads, [&](int t) {
        Rng rng = trial_rng(cfg.seed ^ (n * 911 + g.det_sign()), t);
        Simplex s = random_simplex(rng, n, g);
        double m = 0.0;
        for (int l = 1; l <= n - 1; ++l) {
          for (int p = 0; p < cfg.points; ++p) {
            // the identity divides by lambda_l, so stay a fixed distance
            // from the boundary where its conditioning degrades as
            // 1/lambda
            Eigen::VectorXd x = random_interior_point(rng, s, 0.02);
            auto residual = decomposition_residual(s, l, x);
            if (!residual) continue;  // skipped point
            m = std::max(m, *residual);
            cases.fetch_add(1, std::memory_order_relaxed);
          }
        }
        return m;
      });
      result.max_residual = std::max(result.max_residual, worst);
    }
  }
  result.cases = cases.load();
  return result;
}

std::vector<SuiteResult> run_all(const SuiteConfig& cfg) {
  return {
      run_tri_representation(cfg), run_normalization(cfg),
      run_closedness(cfg),         run_coclosedness(cfg),
      run_decomposition(cfg),      run_hodge_identity(cfg),
      run_metric_independence(cfg),
  };
}

}  // namespace whitney::verify
