#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "whitney/whitney_forms.hpp"

// Randomized property suites over the Whitney-form representations.  Each
// suite draws non-degenerate random simplices, evaluates an identity that
// must hold exactly in real arithmetic, and reports the worst floating
// point residual.  Trials are independently seeded, so results do not
// depend on the number of worker threads.

namespace whitney::verify {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Vertices i.i.d. uniform in [-1,1]^n, rejected while |det G| < min_det
/// (under every signature in `also_nondegenerate_under`, if given).
Simplex random_simplex(Rng& rng, int n, const MetricSignature& g,
                       double min_det = 1e-3,
                       const std::vector<MetricSignature>&
                           also_nondegenerate_under = {});

/// Ordered subsimplex: a uniformly random (j+1)-subset of {0..n} in
/// uniformly random order.
SubsimplexRef random_subsimplex(Rng& rng, int n, int j);

KTensor random_ktensor(Rng& rng, int dim, int grade, Variance variance);

/// Wedge of `grade` random vectors (a decomposable random multivector).
KTensor random_blade(Rng& rng, int dim, int grade);

/// Random point strictly inside the simplex (Dirichlet barycentric
/// weights); `min_lambda` > 0 keeps every barycentric weight at least
/// that far from the boundary.
Eigen::VectorXd random_interior_point(Rng& rng, const Simplex& s,
                                      double min_lambda = 0.0);

enum class SignatureSet { euclidean, lorentzian, both };

std::vector<MetricSignature> signatures_for(SignatureSet set, int dim);

struct SuiteConfig {
  std::vector<int> dims = {2, 3, 4};
  SignatureSet signatures = SignatureSet::both;
  int trials = 100;
  int points = 20;
  std::uint64_t seed = 42;
  int threads = 1;
};

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  long cases = 0;
  bool pass() const { return max_residual < tolerance; }
};

/// Barycentric vs covector vs vector-proxy agreement across all j.
SuiteResult run_tri_representation(const SuiteConfig& cfg);
/// Covector outputs at fixed coordinates agree across signatures.
SuiteResult run_metric_independence(const SuiteConfig& cfg);
/// Integral of w_rho over rho is 1, over every other j-face 0.
SuiteResult run_normalization(const SuiteConfig& cfg);
/// u ^ hodge(w) - inner(u, w) Vol vanishes for random pairs.
SuiteResult run_hodge_identity(const SuiteConfig& cfg);
/// d of the Hodge-dual Whitney form vanishes (finite differences).
SuiteResult run_closedness(const SuiteConfig& cfg);
/// Codifferential of the Whitney form vanishes (finite differences).
SuiteResult run_coclosedness(const SuiteConfig& cfg);
/// Wedge decomposition of w_{[v0..v_{l+1}]} against lower-degree forms.
SuiteResult run_decomposition(const SuiteConfig& cfg);

std::vector<SuiteResult> run_all(const SuiteConfig& cfg);

}  // namespace whitney::verify
