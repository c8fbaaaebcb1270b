#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "whitney/exterior_algebra.hpp"

// Oriented n-simplices carrying metric data either from embedded vertex
// coordinates (plus a diagonal metric) or from signed squared edge lengths
// alone.  Both modes expose the Gram matrix of the edge vectors
// {v_i - v_0}, the scalar star-volume, and the inner-product table of the
// barycentric differentials; the embedded mode additionally provides
// barycentric coordinates, the differentials themselves and the volume
// form.  Squared lengths are signed: negative values mark timelike edges
// under a Lorentzian signature.

namespace whitney {

class DegenerateSimplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered list of local vertex indices identifying a subsimplex.
struct SubsimplexRef {
  std::vector<int> indices;

  SubsimplexRef() = default;
  SubsimplexRef(std::initializer_list<int> idx) : indices(idx) {}
  explicit SubsimplexRef(std::vector<int> idx) : indices(std::move(idx)) {}

  int dimension() const { return static_cast<int>(indices.size()) - 1; }
};

/// Parity of a sequence of distinct integers as a permutation (sign of the
/// sorting permutation).  Throws on duplicates.
int permutation_parity(std::span<const int> seq);

/// Complement of rho in {0..n} in increasing index order.
std::vector<int> complement(const SubsimplexRef& rho, int n);

/// Sign of the permutation (rho, complement-in-increasing-order) relative
/// to the identity ordering 0..n.
int perm_sign(const SubsimplexRef& rho, int n);

class Simplex {
 public:
  /// n+1 points in R^n with a diagonal metric.
  static Simplex embedded(std::vector<Eigen::VectorXd> vertices,
                          MetricSignature signature);

  /// Abstract simplex of dimension n from the full symmetric table of
  /// signed squared edge lengths ((n+1) x (n+1), zero diagonal).
  static Simplex from_edge_lengths(const Eigen::MatrixXd& sq_lengths);

  int dim() const { return n_; }
  int num_vertices() const { return n_ + 1; }
  bool is_embedded() const { return embedded_; }

  const MetricSignature& signature() const;
  const Eigen::VectorXd& vertex(int i) const;

  /// Gram matrix G_ij = <v_i - v_0, v_j - v_0>, i,j = 1..n.
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::MatrixXd& gram_inverse() const { return gram_inv_; }
  double gram_det() const { return gram_det_; }

  /// Scalar star-volume: det of the edge matrix over n! in embedded mode
  /// (signed by vertex order), sqrt(|det G|)/n! with the stored order
  /// declared positive in abstract mode.
  double star_vol() const { return star_vol_; }

  /// The covector volume form (1/n!) (v_1-v_0)^flat ^ ... ^ (v_n-v_0)^flat.
  /// Embedded mode only.
  KTensor volume_form() const;

  /// Barycentric coordinates of x; embedded mode only.
  std::vector<double> barycentric(const Eigen::VectorXd& x) const;

  /// Affine point with the given barycentric weights; embedded mode only.
  Eigen::VectorXd point_from_barycentric(std::span<const double> lambda) const;

  /// Differential of the a-th barycentric coordinate; embedded mode only.
  const KTensor& d_lambda(int a) const;

  /// <d lambda_a, d lambda_b>; available in both modes.  Abstract mode
  /// derives the table from the Gram inverse, embedded mode from the
  /// differentials and the metric.
  double dlambda_inner(int a, int b) const { return dlambda_inner_(a, b); }
  const Eigen::MatrixXd& dlambda_inner_table() const { return dlambda_inner_; }

  /// Squared length of the edge (i, j) (from the metric in embedded mode).
  double edge_sq_length(int i, int j) const;

 private:
  Simplex() = default;
  void finish_from_gram();

  int n_ = 0;
  bool embedded_ = false;
  std::optional<MetricSignature> signature_;
  std::vector<Eigen::VectorXd> vertices_;
  Eigen::MatrixXd sq_lengths_;

  Eigen::MatrixXd gram_, gram_inv_;
  double gram_det_ = 0.0;
  double star_vol_ = 0.0;
  Eigen::MatrixXd dlambda_inner_;
  std::vector<KTensor> dlambdas_;
  Eigen::MatrixXd bary_solver_;  // inverse of [[1...1],[v_0 ... v_n]]
};

}  // namespace whitney
