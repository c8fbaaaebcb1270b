#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "whitney/simplex.hpp"

// Whitney j-forms on an embedded simplex, evaluated through three
// equivalent representations:
//
//   eval_barycentric  j! sum_i (-1)^i l_i dl_0 ^ ... (omit i) ... ^ dl_j
//   eval_covector     sgn(rho,tau)/(star_vol) * j!/n! *
//                       hodge_left of the wedge of (v_k - x)^flat over the
//                       complement tau, in increasing index order
//   eval_vector       sgn(rho,tau) * j!/n! *
//                       <Vol, U ^ V_tau> / <Vol, Vol>
//
// The complement factor sits on the left of the star (hodge_left) and U on
// the left of V_tau; this is the one convention under which all three
// routes agree with the barycentric definition for every n, j and
// signature (the residual freedom is a contraction-insertion side, and it
// is pinned here by that equivalence).

namespace whitney {

/// One basis Whitney form: a simplex together with the ordered subsimplex
/// rho that carries it.
struct WhitneyDescriptor {
  const Simplex* simplex = nullptr;
  SubsimplexRef rho;

  int form_grade() const { return rho.dimension(); }
};

/// A differential form realized as a pointwise evaluator.
struct FormField {
  int grade = 0;
  std::function<KTensor(const Eigen::VectorXd&)> eval;
};

/// Barycentric (coordinate) representation, Whitney's definition.
KTensor eval_barycentric(const WhitneyDescriptor& w, const Eigen::VectorXd& x);

/// Covector representation via the Hodge dual of the complement simplex.
KTensor eval_covector(const WhitneyDescriptor& w, const Eigen::VectorXd& x);

/// Vector-proxy evaluation of the form on a j-multivector U.
double eval_vector(const WhitneyDescriptor& w, const Eigen::VectorXd& x,
                   const KTensor& U);

/// Hodge dual of the Whitney form (complement-left star), equal to the
/// closed form
///   det_sign * (-1)^{j(n-j)} * sgn(rho,tau)/(star_vol) * j!/n! *
///     wedge of (v_m - x)^flat over tau.
KTensor hodge_dual_whitney(const WhitneyDescriptor& w, const Eigen::VectorXd& x);

/// Covector representation evaluated through the expanded two-term wedge
/// formula (constant complement term minus the x^flat sum); must agree
/// with eval_covector pointwise.
KTensor wedge_expansion_eval(const WhitneyDescriptor& w,
                             const Eigen::VectorXd& x);

/// Integral of a grade-j field over a j-face of the simplex, pulled back
/// onto the face parametrization; exact for affine integrands (degree-2
/// simplex rule).
double integrate_over_subsimplex(const FormField& field, const Simplex& s,
                                 const SubsimplexRef& face);

/// Central-difference exterior derivative, O(h^2).
KTensor exterior_derivative_fd(const FormField& field, const Eigen::VectorXd& x,
                               double h);

/// Central-difference codifferential (-1)^{nk+n+1} star d star; k >= 1.
KTensor codifferential_fd(const FormField& field, const MetricSignature& g,
                          const Eigen::VectorXd& x, double h);

/// Residual of the wedge decomposition
///   (l+1) (w_{[v0..vl]} ^ w_{[vl,vl+1]}) / w_{[vl]} = w_{[v0..v_{l+1}]}
/// at x, in the infinity norm.  Returns nullopt (skipped point) if the
/// barycentric denominator vanishes.
std::optional<double> decomposition_residual(const Simplex& s, int l,
                                             const Eigen::VectorXd& x);

/// Field view of the covector representation.
FormField covector_field(const WhitneyDescriptor& w);
/// Field view of the Hodge dual of the Whitney form.
FormField hodge_dual_field(const WhitneyDescriptor& w);

}  // namespace whitney
