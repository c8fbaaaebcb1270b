#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

// Exterior algebra over R^n (n <= 6) with a diagonal +-1 metric: wedge
// products, musical isomorphisms, contraction, the extended inner product
// and the Hodge star.  Grade-k tensors are stored densely over the
// lexicographically sorted k-subsets of {0..n-1}.
//
// Sign conventions used throughout the library:
//   * contract() is the left antiderivation,
//       i_l(a ^ b) = (i_l a) ^ b + (-1)^grade(a) a ^ (i_l b).
//   * hodge() is defined by  u ^ (hodge w) = inner(u, w) * Vol  for all u,
//     with Vol = e^0 ^ ... ^ e^{n-1}.
//   * hodge_left() places the dual factor on the other side,
//       (hodge_left w) ^ u = inner(u, w) * Vol,
//     i.e. hodge_left w = (-1)^{k(n-k)} hodge w on grade-k input.  The
//     simplex-complement formulas in whitney_forms.hpp require this
//     variant; see the comments there.

namespace whitney {

inline constexpr int kMaxDim = 6;

/// Diagonal pseudo-Riemannian metric: dimension plus one +-1 sign per axis.
class MetricSignature {
 public:
  explicit MetricSignature(std::vector<int> signs);
  MetricSignature(std::initializer_list<int> signs)
      : MetricSignature(std::vector<int>(signs)) {}

  static MetricSignature euclidean(int dim);
  /// (-,+,...,+) with the timelike axis first.
  static MetricSignature lorentzian(int dim);

  int dim() const { return dim_; }
  int sign(int axis) const;
  /// Product of all axis signs; -1 for odd-index metrics.
  int det_sign() const;
  /// Product of the signs over the axes selected by `mask`.
  int blade_sign(std::uint32_t mask) const;

  bool operator==(const MetricSignature&) const = default;

 private:
  int dim_ = 0;
  int signs_[kMaxDim] = {0};
};

enum class Variance { vector, covector };

// Blade bookkeeping: lex-ordered k-subsets of {0..n-1} as bitmasks.
namespace blades {

int choose(int n, int k);
/// All k-subset masks of {0..n-1} in lexicographic order of the sorted
/// index tuples.
std::span<const std::uint32_t> masks(int n, int k);
/// Rank of `mask` within its grade's lex ordering.
int index_of(int n, std::uint32_t mask);
/// Sign of merging two disjoint sorted subsets into one sorted subset;
/// 0 if they overlap.
int merge_sign(std::uint32_t a, std::uint32_t b);
inline std::uint32_t full_mask(int n) { return (1u << n) - 1u; }

}  // namespace blades

/// Grade-k alternating tensor, vector- or covector-valued, with dense
/// coefficients over sorted k-subsets of axes.
class KTensor {
 public:
  KTensor(int dim, int grade, Variance variance);
  KTensor(int dim, int grade, Variance variance, std::vector<double> coeffs);

  static KTensor scalar(int dim, Variance variance, double value);
  /// Basis blade e_{axes[0]} ^ e_{axes[1]} ^ ... (sign follows the given
  /// order; axes must be distinct).
  static KTensor basis(int dim, Variance variance,
                       std::initializer_list<int> axes);
  static KTensor vector_from_components(std::span<const double> c);
  static KTensor covector_from_components(std::span<const double> c);

  int dim() const { return dim_; }
  int grade() const { return grade_; }
  Variance variance() const { return variance_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  double operator[](int lex_index) const { return coeffs_[lex_index]; }
  double& operator[](int lex_index) { return coeffs_[lex_index]; }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Signed coefficient of the blade given by `axes` in any order.
  double coeff(std::initializer_list<int> axes) const;

  double max_abs() const;
  bool same_shape(const KTensor& o) const {
    return dim_ == o.dim_ && grade_ == o.grade_ && variance_ == o.variance_;
  }

  KTensor& operator+=(const KTensor& o);
  KTensor& operator-=(const KTensor& o);
  KTensor& operator*=(double s);

  friend KTensor operator+(KTensor a, const KTensor& b) { return a += b; }
  friend KTensor operator-(KTensor a, const KTensor& b) { return a -= b; }
  friend KTensor operator*(KTensor a, double s) { return a *= s; }
  friend KTensor operator*(double s, KTensor a) { return a *= s; }
  friend KTensor operator-(KTensor a) { return a *= -1.0; }

 private:
  int dim_;
  int grade_;
  Variance variance_;
  std::vector<double> coeffs_;
};

/// The standard volume form e^0 ^ ... ^ e^{n-1} together with its self
/// inner product, which equals det_sign (and is -1 for Lorentzian metrics).
struct VolumeElement {
  KTensor form;
  int self_inner;

  static VolumeElement standard(const MetricSignature& g);
};

/// Exterior product; grades add, variances must match.
KTensor wedge(const KTensor& a, const KTensor& b);

/// Index lowering: each coefficient is multiplied by the product of metric
/// signs over its blade.  Inverse of sharp().
KTensor flat(const KTensor& v, const MetricSignature& g);
/// Index raising; exact inverse of flat() for +-1 diagonal metrics.
KTensor sharp(const KTensor& w, const MetricSignature& g);

/// Contraction of a grade-1 tensor into a grade-k tensor of the opposite
/// variance (left antiderivation).  k >= 1 required.
KTensor contract(const KTensor& one, const KTensor& v);

/// Extended inner product on equal grades and variances: blade-diagonal
/// with the product of metric signs over the shared subset.
double inner(const KTensor& a, const KTensor& b, const MetricSignature& g);

/// Hodge star: the unique grade-(n-k) tensor with u ^ (hodge w) =
/// inner(u, w) * Vol for every grade-k u.
KTensor hodge(const KTensor& w, const MetricSignature& g);
/// Complement-on-the-left star: (hodge_left w) ^ u = inner(u, w) * Vol,
/// equal to (-1)^{k(n-k)} hodge(w).
KTensor hodge_left(const KTensor& w, const MetricSignature& g);

/// Dual pairing of a covector k-form with a vector k-multivector
/// (coefficientwise, no metric involved).
double apply(const KTensor& form, const KTensor& multivector);

}  // namespace whitney
