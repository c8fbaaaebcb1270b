#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "whitney/verify.hpp"
#include "whitney/whitney_forms.hpp"

using namespace whitney;
using whitney::testing::all_signatures;
using whitney::testing::max_diff;
using whitney::testing::vec2;
using whitney::testing::vec3;

namespace {

Simplex unit_triangle(const MetricSignature& g = MetricSignature::euclidean(2)) {
  return Simplex::embedded({vec2(0, 0), vec2(1, 0), vec2(0, 1)}, g);
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("barycentric representation on the unit triangle") {
  Simplex tri = unit_triangle();
  WhitneyDescriptor w{&tri, {0, 1}};

  KTensor at = eval_barycentric(w, vec2(0.25, 0.25));
  CHECK(at[0] == doctest::Approx(0.75));   // (1-y) dx
  CHECK(at[1] == doctest::Approx(0.25));   // x dy

  CHECK(eval_barycentric(w, tri.vertex(2)).max_abs() < 1e-14);

  WhitneyDescriptor w0{&tri, {1}};
  KTensor scalar = eval_barycentric(w0, vec2(0.25, 0.25));
  CHECK(scalar.grade() == 0);
  CHECK(scalar[0] == doctest::Approx(0.25));
}

TEST_CASE("covector representation equals barycentric representation") {
  // the convention-pinning check, over every diagonal signature in n=1..4
  verify::Rng rng(101);
  for (int n = 1; n <= 4; ++n) {
    for (const auto& g : all_signatures(n)) {
      for (int trial = 0; trial < 6; ++trial) {
        Simplex s = verify::random_simplex(rng, n, g);
        for (int j = 0; j <= n; ++j) {
          WhitneyDescriptor w{&s, verify::random_subsimplex(rng, n, j)};
          for (int p = 0; p < 5; ++p) {
            Eigen::VectorXd x = verify::random_interior_point(rng, s);
            CHECK(max_diff(eval_barycentric(w, x), eval_covector(w, x)) <
                  1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("covector representation is metric independent") {
  Simplex euclid = unit_triangle();
  Simplex lorentz = unit_triangle(MetricSignature::lorentzian(2));
  WhitneyDescriptor we{&euclid, {0, 1}};
  WhitneyDescriptor wl{&lorentz, {0, 1}};
  verify::Rng rng(103);
  for (int p = 0; p < 20; ++p) {
    Eigen::VectorXd x = verify::random_interior_point(rng, euclid);
    CHECK(max_diff(eval_covector(we, x), eval_covector(wl, x)) < 1e-12);
  }
}

TEST_CASE("whitney 2-form in euclidean 3-space is radial") {
  Simplex tet = Simplex::embedded(
      {vec3(0, 0, 0), vec3(1, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1)},
      MetricSignature::euclidean(3));
  WhitneyDescriptor w{&tet, {2, 1, 3}};
  Eigen::VectorXd x = vec3(1.0 / 3, 1.0 / 3, 1.0 / 3);
  KTensor proxy = sharp(hodge(eval_covector(w, x), tet.signature()),
                        tet.signature());
  // (v0 - x) / (3 vol) with vol = 1/6
  CHECK(proxy[0] == doctest::Approx(-2.0 / 3));
  CHECK(proxy[1] == doctest::Approx(-2.0 / 3));
  CHECK(proxy[2] == doctest::Approx(-2.0 / 3));
}

TEST_CASE("vector-proxy evaluation") {
  Simplex tri = unit_triangle();
  WhitneyDescriptor w{&tri, {0, 1}};

  Eigen::VectorXd edge = tri.vertex(1) - tri.vertex(0);
  KTensor U = KTensor::vector_from_components(
      std::span<const double>(edge.data(), edge.size()));
  CHECK(eval_vector(w, tri.vertex(0), U) == doctest::Approx(1.0));

  // multivector touching the complement vanishes
  Eigen::VectorXd to_tau = tri.vertex(2) - tri.vertex(0);
  KTensor Ut = KTensor::vector_from_components(
      std::span<const double>(to_tau.data(), to_tau.size()));
  CHECK(eval_vector(w, tri.vertex(0), Ut) == doctest::Approx(0.0));

  verify::Rng rng(107);
  for (int n = 2; n <= 4; ++n) {
    for (const auto& g : {MetricSignature::euclidean(n),
                          MetricSignature::lorentzian(n)}) {
      Simplex s = verify::random_simplex(rng, n, g);
      for (int j = 0; j <= n; ++j) {
        WhitneyDescriptor wd{&s, verify::random_subsimplex(rng, n, j)};
        for (int p = 0; p < 10; ++p) {
          Eigen::VectorXd x = verify::random_interior_point(rng, s);
          KTensor U = verify::random_blade(rng, n, j);
          CHECK(eval_vector(wd, x, U) ==
                doctest::Approx(apply(eval_covector(wd, x), U))
                    .epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("hodge dual whitney form against the closed form") {
  verify::Rng rng(109);
  for (int n = 2; n <= 4; ++n) {
    for (const auto& g : {MetricSignature::euclidean(n),
                          MetricSignature::lorentzian(n)}) {
      for (int trial = 0; trial < 100; ++trial) {
        Simplex s = verify::random_simplex(rng, n, g);
        int j = static_cast<int>(rng() % (n + 1));
        WhitneyDescriptor w{&s, verify::random_subsimplex(rng, n, j)};
        Eigen::VectorXd x = verify::random_interior_point(rng, s);

        KTensor dual = hodge_dual_whitney(w, x);

        // closed form: (star star) sgn/(star_vol) j!/n! wedge of flats
        KTensor tau_wedge = KTensor::scalar(n, Variance::covector, 1.0);
        for (int k : complement(w.rho, n)) {
          Eigen::VectorXd d = s.vertex(k) - x;
          tau_wedge = wedge(tau_wedge,
                            flat(KTensor::vector_from_components(
                                     std::span<const double>(d.data(), d.size())),
                                 g));
        }
        double star_star =
            g.det_sign() * (((j * (n - j)) % 2) ? -1.0 : 1.0);
        double c = star_star * perm_sign(w.rho, n) * factorial(j) /
                   factorial(n) / s.star_vol();
        CHECK(max_diff(dual, c * tau_wedge) < 1e-10);
      }
    }
  }
}

TEST_CASE("hodge dual whitney form in the plane") {
  Simplex tri = unit_triangle();
  WhitneyDescriptor w{&tri, {0, 1}};
  verify::Rng rng(113);
  for (int p = 0; p < 10; ++p) {
    Eigen::VectorXd x = verify::random_interior_point(rng, tri);
    // star-star factor on 1-forms in euclidean n=2 is -1
    Eigen::VectorXd d = tri.vertex(2) - x;
    KTensor expected =
        -1.0 / (2.0 * tri.star_vol()) *
        flat(KTensor::vector_from_components(
                 std::span<const double>(d.data(), d.size())),
             tri.signature());
    CHECK(max_diff(hodge_dual_whitney(w, x), expected) < 1e-12);
  }
}

TEST_CASE("hodge dual of the top-grade form is constant") {
  verify::Rng rng(127);
  for (int n = 2; n <= 4; ++n) {
    MetricSignature g = MetricSignature::lorentzian(n);
    Simplex s = verify::random_simplex(rng, n, g);
    SubsimplexRef rho;
    for (int i = 0; i <= n; ++i) rho.indices.push_back(i);
    WhitneyDescriptor w{&s, rho};
    Eigen::VectorXd x = verify::random_interior_point(rng, s);
    KTensor dual = hodge_dual_whitney(w, x);
    CHECK(dual.grade() == 0);
    CHECK(dual[0] == doctest::Approx(g.det_sign() * perm_sign(rho, n) /
                                     s.star_vol()));
  }
}

TEST_CASE("wedge expansion route matches the direct product") {
  verify::Rng rng(131);
  for (int n = 2; n <= 4; ++n) {
    for (const auto& g : {MetricSignature::euclidean(n),
                          MetricSignature::lorentzian(n)}) {
      for (int trial = 0; trial < 50; ++trial) {
        Simplex s = verify::random_simplex(rng, n, g);
        int j = static_cast<int>(rng() % (n + 1));
        WhitneyDescriptor w{&s, verify::random_subsimplex(rng, n, j)};
        for (int p = 0; p < 10; ++p) {
          Eigen::VectorXd x = verify::random_interior_point(rng, s);
          CHECK(max_diff(wedge_expansion_eval(w, x), eval_covector(w, x)) <
                1e-10);
        }
        // at the origin only the constant complement-volume term survives
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
        CHECK(max_diff(wedge_expansion_eval(w, zero), eval_covector(w, zero)) <
              1e-10);
      }
    }
  }
}

TEST_CASE("complement order is compensated by the permutation sign") {
  verify::Rng rng(137);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    MetricSignature g = (trial % 2) ? MetricSignature::lorentzian(n)
                                    : MetricSignature::euclidean(n);
    Simplex s = verify::random_simplex(rng, n, g);
    int j = static_cast<int>(rng() % n);
    SubsimplexRef rho = verify::random_subsimplex(rng, n, j);
    Eigen::VectorXd x = verify::random_interior_point(rng, s);

    std::vector<int> tau = complement(rho, n);
    for (int shuffle = 0; shuffle < 4; ++shuffle) {
      std::vector<int> tau_perm = tau;
      for (size_t i = 1; i < tau_perm.size(); ++i) {
        std::swap(tau_perm[i], tau_perm[rng() % (i + 1)]);
      }
      std::vector<int> seq = rho.indices;
      seq.insert(seq.end(), tau_perm.begin(), tau_perm.end());
      KTensor tw = KTensor::scalar(n, Variance::covector, 1.0);
      for (int k : tau_perm) {
        Eigen::VectorXd d = s.vertex(k) - x;
        tw = wedge(tw, flat(KTensor::vector_from_components(
                                std::span<const double>(d.data(), d.size())),
                            g));
      }
      KTensor alt = permutation_parity(seq) * factorial(j) / factorial(n) /
                    s.star_vol() * hodge_left(tw, g);
      CHECK(max_diff(alt, eval_covector({&s, rho}, x)) < 1e-10);
    }
  }
}

TEST_CASE("whitney form vanishes on the complement span") {
  verify::Rng rng(139);
  for (int n = 2; n <= 4; ++n) {
    MetricSignature g = MetricSignature::euclidean(n);
    Simplex s = verify::random_simplex(rng, n, g);
    for (int j = 0; j < n; ++j) {
      WhitneyDescriptor w{&s, verify::random_subsimplex(rng, n, j)};
      std::vector<int> tau = complement(w.rho, n);
      for (int p = 0; p < 10; ++p) {
        // random affine combination of tau's vertices (weights may be
        // negative)
        std::vector<double> weights(tau.size());
        double total = 0;
        for (double& wt : weights) {
          wt = verify::uniform(rng, -1.0, 2.0);
          total += wt;
        }
        if (std::abs(total) < 0.1) continue;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (size_t i = 0; i < tau.size(); ++i) {
          x += weights[i] / total * s.vertex(tau[i]);
        }
        CHECK(eval_covector(w, x).max_abs() < 1e-10);
        CHECK(eval_barycentric(w, x).max_abs() < 1e-10);
      }
    }
  }
}

TEST_CASE("partition of unity and antisymmetry") {
  verify::Rng rng(149);
  for (int n = 2; n <= 4; ++n) {
    MetricSignature g = MetricSignature::lorentzian(n);
    Simplex s = verify::random_simplex(rng, n, g);
    for (int p = 0; p < 10; ++p) {
      Eigen::VectorXd x = verify::random_interior_point(rng, s);
      double sum = 0;
      for (int k = 0; k <= n; ++k) {
        sum += eval_covector({&s, SubsimplexRef{k}}, x)[0];
      }
      CHECK(sum == doctest::Approx(1.0));
    }

    // swapping two vertices of rho negates every representation
    int j = 1 + static_cast<int>(rng() % n);
    SubsimplexRef rho = verify::random_subsimplex(rng, n, j);
    SubsimplexRef swapped = rho;
    std::swap(swapped.indices[0], swapped.indices[1]);
    Eigen::VectorXd x = verify::random_interior_point(rng, s);
    CHECK(max_diff(eval_covector({&s, rho}, x),
                   -eval_covector({&s, swapped}, x)) < 1e-11);
    CHECK(max_diff(eval_barycentric({&s, rho}, x),
                   -eval_barycentric({&s, swapped}, x)) < 1e-11);
    KTensor U = verify::random_blade(rng, n, j);
    CHECK(eval_vector({&s, rho}, x, U) ==
          doctest::Approx(-eval_vector({&s, swapped}, x, U)).epsilon(1e-9));
  }
}

TEST_CASE("normalization integrals") {
  verify::Rng rng(151);
  for (int n = 2; n <= 3; ++n) {
    for (const auto& g : {MetricSignature::euclidean(n),
                          MetricSignature::lorentzian(n)}) {
      Simplex s = verify::random_simplex(rng, n, g);
      for (int j = 0; j <= n; ++j) {
        SubsimplexRef rho = verify::random_subsimplex(rng, n, j);
        FormField f = covector_field({&s, rho});
        CHECK(integrate_over_subsimplex(f, s, rho) == doctest::Approx(1.0));

        SubsimplexRef other = verify::random_subsimplex(rng, n, j);
        std::vector<int> a = rho.indices, b = other.indices;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
          CHECK(std::abs(integrate_over_subsimplex(f, s, other)) < 1e-10);
        }
      }
    }
  }

  // zero field integrates to zero; grade mismatch is rejected
  Simplex tri = unit_triangle();
  FormField zero{1, [](const Eigen::VectorXd&) {
                   return KTensor(2, 1, Variance::covector);
                 }};
  CHECK(integrate_over_subsimplex(zero, tri, SubsimplexRef{0, 1}) == 0.0);
  CHECK_THROWS_AS(integrate_over_subsimplex(zero, tri, SubsimplexRef{0}),
                  std::invalid_argument);
}

TEST_CASE("finite difference exterior derivative") {
  // d(x dy) = dx ^ dy
  FormField xdy{1, [](const Eigen::VectorXd& p) {
                  KTensor w(2, 1, Variance::covector);
                  w[1] = p[0];
                  return w;
                }};
  KTensor d = exterior_derivative_fd(xdy, vec2(0.3, -0.2), 1e-5);
  CHECK(d.coeff({0, 1}) == doctest::Approx(1.0).epsilon(1e-8));

  FormField constant{1, [](const Eigen::VectorXd&) {
                       KTensor w(2, 1, Variance::covector);
                       w[0] = 2.0;
                       w[1] = -1.0;
                       return w;
                     }};
  CHECK(exterior_derivative_fd(constant, vec2(0.1, 0.9), 1e-5).max_abs() <
        1e-10);
  CHECK_THROWS_AS(exterior_derivative_fd(constant, vec2(0, 0), 0.0),
                  std::invalid_argument);
}

TEST_CASE("finite difference codifferential") {
  MetricSignature euclid = MetricSignature::euclidean(2);
  // delta(x dx) = -1 under the (-1)^{nk+n+1} star-d-star convention
  FormField xdx{1, [](const Eigen::VectorXd& p) {
                  KTensor w(2, 1, Variance::covector);
                  w[0] = p[0];
                  return w;
                }};
  KTensor d = codifferential_fd(xdx, euclid, vec2(0.4, 0.1), 1e-5);
  CHECK(d.grade() == 0);
  CHECK(d[0] == doctest::Approx(-1.0).epsilon(1e-7));

  FormField constant{1, [](const Eigen::VectorXd&) {
                       KTensor w(2, 1, Variance::covector);
                       w[0] = 3.0;
                       return w;
                     }};
  CHECK(codifferential_fd(constant, euclid, vec2(0, 0), 1e-5).max_abs() <
        1e-10);

  FormField scalar{0, [](const Eigen::VectorXd&) {
                     return KTensor::scalar(2, Variance::covector, 1.0);
                   }};
  CHECK_THROWS_AS(codifferential_fd(scalar, euclid, vec2(0, 0), 1e-5),
                  std::invalid_argument);
}

TEST_CASE("whitney duals are closed, whitney forms are coclosed") {
  verify::SuiteConfig cfg;
  cfg.trials = 8;
  cfg.points = 5;
  auto closed = verify::run_closedness(cfg);
  CHECK(closed.pass());
  auto coclosed = verify::run_coclosedness(cfg);
  CHECK(coclosed.pass());
}

TEST_CASE("wedge decomposition of higher-degree forms") {
  verify::Rng rng(157);

  Simplex tet = verify::random_simplex(rng, 3, MetricSignature::euclidean(3));
  for (int p = 0; p < 20; ++p) {
    Eigen::VectorXd x = verify::random_interior_point(rng, tet, 0.02);
    auto r = decomposition_residual(tet, 1, x);
    REQUIRE(r.has_value());
    CHECK(*r < 1e-9);
  }

  Simplex four = verify::random_simplex(rng, 4, MetricSignature::lorentzian(4));
  for (int p = 0; p < 20; ++p) {
    Eigen::VectorXd x = verify::random_interior_point(rng, four, 0.02);
    auto r = decomposition_residual(four, 2, x);
    REQUIRE(r.has_value());
    CHECK(*r < 1e-9);
  }

  // a point with vanishing lambda_l is skipped
  std::vector<double> lambda{0.5, 0.0, 0.25, 0.25};
  Eigen::VectorXd x = tet.point_from_barycentric(lambda);
  CHECK(!decomposition_residual(tet, 1, x).has_value());
  CHECK_THROWS_AS(decomposition_residual(tet, 0, x), std::invalid_argument);
}

TEST_CASE("whitney evaluation requires an embedded simplex") {
  Eigen::MatrixXd lengths(3, 3);
  lengths << 0, 1, 1, 1, 0, 2, 1, 2, 0;
  Simplex abstract = Simplex::from_edge_lengths(lengths);
  WhitneyDescriptor w{&abstract, {0, 1}};
  CHECK_THROWS_AS(eval_covector(w, vec2(0.2, 0.2)), std::logic_error);
  CHECK_THROWS_AS(eval_barycentric(w, vec2(0.2, 0.2)), std::logic_error);
}

TEST_CASE("tri-representation suite runs clean") {
  verify::SuiteConfig cfg;
  cfg.trials = 10;
  cfg.points = 5;
  auto result = verify::run_tri_representation(cfg);
  CHECK(result.pass());
  CHECK(result.cases > 0);

  // a global sign corruption must be caught by the same comparison
  verify::Rng rng(163);
  Simplex s = verify::random_simplex(rng, 2, MetricSignature::euclidean(2));
  WhitneyDescriptor w{&s, {0, 1}};
  Eigen::VectorXd x = verify::random_interior_point(rng, s);
  double corrupted = max_diff(eval_barycentric(w, x), -eval_covector(w, x));
  CHECK(corrupted > 1e-9);
}
