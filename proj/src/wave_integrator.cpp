#include "whitney/wave_integrator.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>

namespace whitney {

double exact_solution(double x, double t, double circumference) {
  return std::sin(2.0 * std::numbers::pi * (x - t) / circumference);
}

ElementMatrix element_matrix(const SpacetimeMesh& mesh, int tri) {
  Simplex s = triangle_simplex(mesh, tri);
  ElementMatrix em;
  em.triangle = tri;
  em.S = s.dlambda_inner_table() * std::abs(s.star_vol());
  return em;
}

WaveOperator::WaveOperator(const SpacetimeMesh& mesh, GeometrySource source)
    : mesh_(&mesh) {
  matrices_.reserve(mesh.triangles.size());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (source == GeometrySource::edge_lengths) {
      matrices_.push_back(element_matrix(mesh, t));
    } else {
      Simplex s = triangle_simplex_embedded(mesh, t);
      matrices_.push_back(
          {t, s.dlambda_inner_table() * std::abs(s.star_vol())});
    }
  }
  incidence_.assign(mesh.num_nodes(), {});
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    for (int c = 0; c < 3; ++c) {
      incidence_[mesh.triangles[t][c]].emplace_back(t, c);
    }
  }
}

double WaveOperator::action(const DiscreteField& f) const {
  if (static_cast<int>(f.values.size()) != mesh_->num_nodes()) {
    throw std::invalid_argument("action: field size != node count");
  }
  double total = 0.0;
  for (const auto& em : matrices_) {
    const auto& t = mesh_->triangles[em.triangle];
    Eigen::Vector3d local(f.values[t[0]], f.values[t[1]], f.values[t[2]]);
    total += local.dot(em.S * local);
  }
  return total;
}

double WaveOperator::residual(const DiscreteField& f, int node) const {
  if (static_cast<int>(f.values.size()) != mesh_->num_nodes()) {
    throw std::invalid_argument("residual: field size != node count");
  }
  int k = mesh_->slice_of(node);
  if (k == 0 || k == mesh_->num_slices - 1) {
    throw std::invalid_argument(
        "residual: undefined on the temporal boundary slices");
  }
  double r = 0.0;
  for (auto [tri, loc] : incidence_[node]) {
    const auto& t = mesh_->triangles[tri];
    const auto& S = matrices_[tri].S;
    for (int c = 0; c < 3; ++c) {
      r += 2.0 * S(loc, c) * f.values[t[c]];
    }
  }
  return r;
}

namespace {

// Minimum-norm solve that tolerates singular but consistent systems (the
// light-cone lattice has a zero-energy spatial Nyquist mode).
Eigen::VectorXd solve_consistent(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& b, int slice) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  Eigen::VectorXd u = cod.solve(b);
  if (cod.rank() < A.rows()) {
    double resid = (A * u - b).lpNorm<Eigen::Infinity>();
    double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
    if (resid > 1e-8 * scale) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
      const auto& s = svd.singularValues();
      double smin = s[s.size() - 1];
      double cond = smin > 0 ? s[0] / smin
                             : std::numeric_limits<double>::infinity();
      throw SolverError("slice system " + std::to_string(slice) +
                            " is singular and inconsistent (cond ~ " +
                            std::to_string(cond) + ")",
                        slice, cond);
    }
  }
  return u;
}

}  // namespace

DiscreteField WaveOperator::march(std::span<const double> slice0,
                                  std::span<const double> slice1) const {
  const int N = mesh_->nodes_per_slice;
  const int M = mesh_->num_slices;
  if (static_cast<int>(slice0.size()) != N ||
      static_cast<int>(slice1.size()) != N) {
    throw std::invalid_argument("march: initial slices must have N values");
  }

  DiscreteField f;
  f.values.assign(mesh_->num_nodes(), 0.0);
  for (int i = 0; i < N; ++i) {
    f.values[mesh_->node_id(0, i)] = slice0[i];
    f.values[mesh_->node_id(1, i)] = slice1[i];
  }

  for (int k = 1; k <= M - 2; ++k) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    for (int i = 0; i < N; ++i) {
      int node = mesh_->node_id(k, i);
      for (auto [tri, loc] : incidence_[node]) {
        const auto& t = mesh_->triangles[tri];
        const auto& S = matrices_[tri].S;
        for (int c = 0; c < 3; ++c) {
          double coeff = 2.0 * S(loc, c);
          if (mesh_->slice_of(t[c]) == k + 1) {
            A(i, mesh_->pos_of(t[c])) += coeff;
          } else {
            rhs(i) -= coeff * f.values[t[c]];
          }
        }
      }
    }
    Eigen::VectorXd u = solve_consistent(A, rhs, k + 1);
    for (int i = 0; i < N; ++i) f.values[mesh_->node_id(k + 1, i)] = u[i];
  }
  return f;
}

DiscreteField WaveOperator::solve_global(std::span<const double> slice0,
                                         std::span<const double> slice1) const {
  const int N = mesh_->nodes_per_slice;
  const int M = mesh_->num_slices;
  if (static_cast<int>(slice0.size()) != N ||
      static_cast<int>(slice1.size()) != N) {
    throw std::invalid_argument(
        "solve_global: initial slices must have N values");
  }
  const int unknowns = N * (M - 2);  // slices 2..M-1

  DiscreteField f;
  f.values.assign(mesh_->num_nodes(), 0.0);
  for (int i = 0; i < N; ++i) {
    f.values[mesh_->node_id(0, i)] = slice0[i];
    f.values[mesh_->node_id(1, i)] = slice1[i];
  }

  auto column = [&](int node) {
    return (mesh_->slice_of(node) - 2) * N + mesh_->pos_of(node);
  };

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(unknowns, unknowns);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  for (int k = 1; k <= M - 2; ++k) {
    for (int i = 0; i < N; ++i) {
      int row = (k - 1) * N + i;
      int node = mesh_->node_id(k, i);
      for (auto [tri, loc] : incidence_[node]) {
        const auto& t = mesh_->triangles[tri];
        const auto& S = matrices_[tri].S;
        for (int c = 0; c < 3; ++c) {
          double coeff = 2.0 * S(loc, c);
          if (mesh_->slice_of(t[c]) >= 2) {
            A(row, column(t[c])) += coeff;
          } else {
            rhs(row) -= coeff * f.values[t[c]];
          }
        }
      }
    }
  }
  Eigen::VectorXd u = solve_consistent(A, rhs, -1);
  for (int k = 2; k < M; ++k) {
    for (int i = 0; i < N; ++i) {
      f.values[mesh_->node_id(k, i)] = u[(k - 2) * N + i];
    }
  }
  return f;
}

Diagnostics diagnostics(const DiscreteField& f, const SpacetimeMesh& mesh) {
  if (static_cast<int>(f.values.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("diagnostics: field size != node count");
  }
  const int N = mesh.nodes_per_slice;
  const double L = mesh.circumference();
  const double kappa = 2.0 * std::numbers::pi / L;

  Diagnostics d;
  for (int k = 0; k < mesh.num_slices; ++k) {
    double sq_sum = 0.0;
    std::complex<double> mode1(0.0, 0.0);
    for (int i = 0; i < N; ++i) {
      int node = mesh.node_id(k, i);
      double x = mesh.node_x(node);
      double value = f.values[node];
      double err = value - exact_solution(x, mesh.node_t(node), L);
      sq_sum += err * err;
      mode1 += value * std::polar(1.0, -kappa * x);
    }
    d.l2_error.push_back(std::sqrt(sq_sum / N));
    d.mode1_amp.push_back(2.0 * std::abs(mode1) / N);
    d.mode1_phase.push_back(std::arg(mode1));
  }
  return d;
}

void export_diagnostics_csv(const Diagnostics& d, const SpacetimeMesh& mesh,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("export_diagnostics_csv: cannot open " + path);
  }
  auto fmt = [](double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
  };
  out << "slice,t,l2_error,mode1_amp,mode1_phase\n";
  for (size_t k = 0; k < d.l2_error.size(); ++k) {
    out << k << ',' << fmt(k * mesh.dt) << ',' << fmt(d.l2_error[k]) << ','
        << fmt(d.mode1_amp[k]) << ',' << fmt(d.mode1_phase[k]) << '\n';
  }
}

DispersionSummary summarize_dispersion(const Diagnostics& d,
                                       const SpacetimeMesh& mesh) {
  DispersionSummary summary;
  if (d.mode1_amp.empty() || d.mode1_amp[0] == 0.0) return summary;

  const double kappa = 2.0 * std::numbers::pi / mesh.circumference();
  const double step = kappa * mesh.dt;  // exact phase advance per slice
  double accumulated = 0.0;
  for (size_t k = 0; k < d.mode1_amp.size(); ++k) {
    summary.amplitude_drift =
        std::max(summary.amplitude_drift,
                 std::abs(d.mode1_amp[k] / d.mode1_amp[0] - 1.0));
    if (k > 0) {
      double delta = d.mode1_phase[k] - d.mode1_phase[k - 1] + step;
      delta = std::remainder(delta, 2.0 * std::numbers::pi);
      accumulated += delta;
      summary.phase_error = std::max(summary.phase_error,
                                     std::abs(accumulated));
    }
  }
  return summary;
}

std::pair<std::vector<double>, std::vector<double>> exact_initial_slices(
    const SpacetimeMesh& mesh) {
  const int N = mesh.nodes_per_slice;
  const double L = mesh.circumference();
  std::vector<double> s0(N), s1(N);
  for (int i = 0; i < N; ++i) {
    s0[i] = exact_solution(mesh.node_x(mesh.node_id(0, i)), 0.0, L);
    s1[i] = exact_solution(mesh.node_x(mesh.node_id(1, i)), mesh.dt, L);
  }
  return {s0, s1};
}

}  // namespace whitney
