// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.  Exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "whitney/spacetime_mesh.hpp"
#include "whitney/verify.hpp"
#include "whitney/wave_integrator.hpp"
#include "whitney/whitney_forms.hpp"

using namespace whitney;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string residual_detail(const verify::SuiteResult& r, double secs = -1.0) {
  char buf[160];
  if (secs >= 0.0) {
    std::snprintf(buf, sizeof(buf), "max residual %.3e < %.1e, %ld cases, %.1fs",
                  r.max_residual, r.tolerance, r.cases, secs);
  } else {
    std::snprintf(buf, sizeof(buf), "max residual %.3e < %.1e, %ld cases",
                  r.max_residual, r.tolerance, r.cases);
  }
  return buf;
}

DiscreteField run_wave(const SpacetimeMesh& mesh, GeometrySource source =
                                                      GeometrySource::edge_lengths) {
  WaveOperator op(mesh, source);
  auto [s0, s1] = exact_initial_slices(mesh);
  return op.march(s0, s1);
}

double max_nodal_error(const DiscreteField& f, const SpacetimeMesh& mesh) {
  double m = 0.0;
  const double L = mesh.circumference();
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    m = std::max(m, std::abs(f.values[node] - exact_solution(
                                                  mesh.node_x(node),
                                                  mesh.node_t(node), L)));
  }
  return m;
}

SpacetimeMesh regular_two_periods(int nodes) {
  MeshSpec spec;
  spec.nodes_per_slice = nodes;
  spec.dx = 1.0;
  spec.dt = 0.8;
  spec.num_slices =
      static_cast<int>(std::lround(2.0 * nodes * spec.dx / spec.dt)) + 1;
  return build_cylinder_mesh(spec);
}

void criterion_1_tri_representation() {
  auto t0 = std::chrono::steady_clock::now();
  verify::SuiteConfig cfg;  // n = 2..4, both signatures, 100 trials, seed 42
  auto r = verify::run_tri_representation(cfg);
  double secs = seconds_since(t0);
  report(1, "tri-representation equivalence", r.pass() && secs < 30.0,
         residual_detail(r, secs));
}

void criterion_2_paper_signs() {
  std::vector<int> a{2, 1, 3, 0};
  std::vector<int> b{1, 0, 4, 2, 3};
  std::vector<int> c{3, 1, 4, 2, 0};
  bool signs_ok = permutation_parity(a) == 1 && permutation_parity(b) == -1 &&
                  permutation_parity(c) == -1;

  // printed coefficients, reproduced numerically on a random 4-simplex:
  //   2-form over [v1,v0,v4]: -star((v2-x)^b ^ (v3-x)^b) / (12 star_vol)
  //   1-form over [v3,v1]:    -star((v4-x)^b ^ (v2-x)^b ^ (v0-x)^b)
  //                            / (24 star_vol)
  verify::Rng rng(2024);
  MetricSignature minkowski({1, -1, -1, -1});
  Simplex s = verify::random_simplex(rng, 4, minkowski);
  auto tau_flats = [&](std::initializer_list<int> order,
                       const Eigen::VectorXd& x) {
    KTensor w = KTensor::scalar(4, Variance::covector, 1.0);
    for (int k : order) {
      Eigen::VectorXd d = s.vertex(k) - x;
      w = wedge(w, flat(KTensor::vector_from_components(
                            std::span<const double>(d.data(), d.size())),
                        minkowski));
    }
    return w;
  };
  double worst = 0.0;
  for (int p = 0; p < 10; ++p) {
    Eigen::VectorXd x = verify::random_interior_point(rng, s);
    KTensor two_form = -1.0 / (12.0 * s.star_vol()) *
                       hodge_left(tau_flats({2, 3}, x), minkowski);
    worst = std::max(
        worst, (two_form - eval_covector({&s, {1, 0, 4}}, x)).max_abs());
    KTensor one_form = -1.0 / (24.0 * s.star_vol()) *
                       hodge_left(tau_flats({4, 2, 0}, x), minkowski);
    worst = std::max(worst,
                     (one_form - eval_covector({&s, {3, 1}}, x)).max_abs());
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "parities +1/-1/-1, printed -1/12 and -1/24 forms, residual "
                "%.3e",
                worst);
  report(2, "paper permutation signs", signs_ok && worst < 1e-10, buf);
}

void criterion_3_normalization() {
  verify::SuiteConfig cfg;
  cfg.trials = 50;
  auto r = verify::run_normalization(cfg);
  report(3, "normalization and biorthogonality", r.pass(), residual_detail(r));
}

void criterion_4_closedness() {
  verify::SuiteConfig cfg;
  cfg.trials = 50;
  auto closed = verify::run_closedness(cfg);
  auto coclosed = verify::run_coclosedness(cfg);
  report(4, "closedness d(star w) = 0 and coclosedness delta w = 0",
         closed.pass() && coclosed.pass(),
         residual_detail(closed) + "; " + residual_detail(coclosed));
}

void criterion_5_metric_independence() {
  verify::SuiteConfig cfg;
  auto r = verify::run_metric_independence(cfg);
  report(5, "metric independence of the covector representation", r.pass(),
         residual_detail(r));
}

void criterion_6_lightcone_exactness() {
  auto t0 = std::chrono::steady_clock::now();
  MeshSpec spec;
  spec.style = MeshStyle::lightcone;
  spec.nodes_per_slice = 40;
  spec.dx = spec.dt = 1.0;
  // two periods of the circumference 2 N dx at dt = dx
  spec.num_slices = 2 * 2 * spec.nodes_per_slice + 1;
  SpacetimeMesh mesh = build_lightcone_mesh(spec);
  DiscreteField f = run_wave(mesh);
  double err = max_nodal_error(f, mesh);
  double secs = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max nodal error %.3e < 1e-10, %.1fs", err,
                secs);
  report(6, "wave exactness on the light-cone mesh", err < 1e-10 && secs < 5.0,
         buf);
}

void criterion_7_convergence() {
  SpacetimeMesh coarse = regular_two_periods(30);
  SpacetimeMesh fine = regular_two_periods(80);
  double err_coarse = diagnostics(run_wave(coarse), coarse).l2_error.back();
  double err_fine = diagnostics(run_wave(fine), fine).l2_error.back();
  char buf[96];
  std::snprintf(buf, sizeof(buf), "error(80) %.3e < 0.5 x error(30) %.3e",
                err_fine, err_coarse);
  report(7, "wave convergence with resolution", err_fine < 0.5 * err_coarse,
         buf);
}

void criterion_8_dispersion_without_dissipation() {
  SpacetimeMesh mesh = regular_two_periods(30);
  Diagnostics d = diagnostics(run_wave(mesh), mesh);
  DispersionSummary s = summarize_dispersion(d, mesh);
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "amplitude drift %.3e < 0.02, phase error %.3e >= 5x drift",
                s.amplitude_drift, s.phase_error);
  report(8, "no dissipation, visible dispersion",
         s.amplitude_drift < 0.02 &&
             s.phase_error >= 5.0 * s.amplitude_drift,
         buf);
}

void criterion_9_coordinate_free() {
  SpacetimeMesh mesh = regular_two_periods(24);
  WaveOperator abstract_op(mesh, GeometrySource::edge_lengths);
  WaveOperator embedded_op(mesh, GeometrySource::embedded);
  double matrix_diff = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    matrix_diff = std::max(
        matrix_diff, (abstract_op.element(static_cast<int>(t)) -
                      embedded_op.element(static_cast<int>(t)))
                         .cwiseAbs()
                         .maxCoeff());
  }
  auto [s0, s1] = exact_initial_slices(mesh);
  DiscreteField fa = abstract_op.march(s0, s1);
  DiscreteField fe = embedded_op.march(s0, s1);
  double field_diff = 0.0;
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    field_diff =
        std::max(field_diff, std::abs(fa.values[node] - fe.values[node]));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "element matrices diff %.3e, solution diff %.3e < 1e-9",
                matrix_diff, field_diff);
  report(9, "coordinate-free pipeline equivalence",
         matrix_diff < 1e-9 && field_diff < 1e-9, buf);
}

void criterion_10_variational_gradient() {
  SpacetimeMesh mesh = regular_two_periods(12);
  WaveOperator op(mesh);
  verify::Rng rng(777);
  DiscreteField f;
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    f.values.push_back(verify::uniform(rng, -0.5, 0.5));
  }
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + static_cast<int>(rng() % (mesh.num_slices - 2));
    int i = static_cast<int>(rng() % mesh.nodes_per_slice);
    int node = mesh.node_id(k, i);
    DiscreteField fp = f, fm = f;
    fp.values[node] += h;
    fm.values[node] -= h;
    double fd = (op.action(fp) - op.action(fm)) / (2.0 * h);
    double r = op.residual(f, node);
    worst = std::max(worst, std::abs(fd - r) / std::max(1.0, std::abs(r)));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max relative gradient error %.3e < 1e-6",
                worst);
  report(10, "variational gradient check", worst < 1e-6, buf);
}

}  // namespace

int main() {
  criterion_1_tri_representation();
  criterion_2_paper_signs();
  criterion_3_normalization();
  criterion_4_closedness();
  criterion_5_metric_independence();
  criterion_6_lightcone_exactness();
  criterion_7_convergence();
  criterion_8_dispersion_without_dissipation();
  criterion_9_coordinate_free();
  criterion_10_variational_gradient();

  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
