#include "whitney/exterior_algebra.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

namespace whitney {

// ---------------------------------------------------------------------------
// MetricSignature

MetricSignature::MetricSignature(std::vector<int> signs) {
  if (signs.empty() || signs.size() > static_cast<size_t>(kMaxDim)) {
    throw std::invalid_argument("MetricSignature: dimension must be 1..6");
  }
  dim_ = static_cast<int>(signs.size());
  for (int i = 0; i < dim_; ++i) {
    if (signs[i] != 1 && signs[i] != -1) {
      throw std::invalid_argument("MetricSignature: entries must be +1 or -1");
    }
    signs_[i] = signs[i];
  }
}

MetricSignature MetricSignature::euclidean(int dim) {
  return MetricSignature(std::vector<int>(dim, 1));
}

MetricSignature MetricSignature::lorentzian(int dim) {
  std::vector<int> s(dim, 1);
  if (dim < 1) throw std::invalid_argument("lorentzian: dim must be >= 1");
  s[0] = -1;
  return MetricSignature(std::move(s));
}

int MetricSignature::sign(int axis) const {
  if (axis < 0 || axis >= dim_) {
    throw std::out_of_range("MetricSignature::sign: axis out of range");
  }
  return signs_[axis];
}

int MetricSignature::det_sign() const {
  int p = 1;
  for (int i = 0; i < dim_; ++i) p *= signs_[i];
  return p;
}

int MetricSignature::blade_sign(std::uint32_t mask) const {
  int p = 1;
  for (int i = 0; i < dim_; ++i) {
    if (mask & (1u << i)) p *= signs_[i];
  }
  return p;
}

// ---------------------------------------------------------------------------
// Blade tables

namespace blades {

int choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

namespace {

struct Tables {
  // masks_by[n][k]: lex-ordered k-subset masks of {0..n-1}
  std::array<std::array<std::vector<std::uint32_t>, kMaxDim + 1>, kMaxDim + 1>
      masks_by;
  // rank[n][mask]: rank of `mask` within its grade
  std::array<std::array<int, 1u << kMaxDim>, kMaxDim + 1> rank;

  Tables() {
    for (int n = 0; n <= kMaxDim; ++n) {
      for (int k = 0; k <= n; ++k) {
        auto& out = masks_by[n][k];
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        // iterate sorted k-tuples in lexicographic order
        while (true) {
          std::uint32_t m = 0;
          for (int v : idx) m |= 1u << v;
          rank[n][m] = static_cast<int>(out.size());
          out.push_back(m);
          int pos = k - 1;
          while (pos >= 0 && idx[pos] == n - k + pos) --pos;
          if (pos < 0) break;
          ++idx[pos];
          for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

std::span<const std::uint32_t> masks(int n, int k) {
  if (n < 0 || n > kMaxDim || k < 0 || k > n) {
    throw std::out_of_range("blades::masks: bad (n, k)");
  }
  return tables().masks_by[n][k];
}

int index_of(int n, std::uint32_t mask) { return tables().rank[n][mask]; }

int merge_sign(std::uint32_t a, std::uint32_t b) {
  if (a & b) return 0;
  int swaps = 0;
  std::uint32_t bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    bb &= bb - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

}  // namespace blades

// ---------------------------------------------------------------------------
// KTensor

KTensor::KTensor(int dim, int grade, Variance variance)
    : dim_(dim), grade_(grade), variance_(variance) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("KTensor: dim must be 1..6");
  }
  if (grade < 0 || grade > dim) {
    throw std::invalid_argument("KTensor: grade must be 0..dim");
  }
  coeffs_.assign(blades::choose(dim, grade), 0.0);
}

KTensor::KTensor(int dim, int grade, Variance variance,
                 std::vector<double> coeffs)
    : KTensor(dim, grade, variance) {
  if (coeffs.size() != coeffs_.size()) {
    throw std::invalid_argument("KTensor: coefficient count must be C(n,k)");
  }
  coeffs_ = std::move(coeffs);
}

KTensor KTensor::scalar(int dim, Variance variance, double value) {
  KTensor t(dim, 0, variance);
  t.coeffs_[0] = value;
  return t;
}

KTensor KTensor::basis(int dim, Variance variance,
                       std::initializer_list<int> axes) {
  KTensor t(dim, static_cast<int>(axes.size()), variance);
  std::uint32_t mask = 0;
  int sign = 1;
  for (int a : axes) {
    if (a < 0 || a >= dim) throw std::out_of_range("KTensor::basis: bad axis");
    std::uint32_t bit = 1u << a;
    if (mask & bit) throw std::invalid_argument("KTensor::basis: repeated axis");
    sign *= blades::merge_sign(mask, bit);
    mask |= bit;
  }
  t.coeffs_[blades::index_of(dim, mask)] = sign;
  return t;
}

KTensor KTensor::vector_from_components(std::span<const double> c) {
  KTensor t(static_cast<int>(c.size()), 1, Variance::vector);
  std::copy(c.begin(), c.end(), t.coeffs_.begin());
  return t;
}

KTensor KTensor::covector_from_components(std::span<const double> c) {
  KTensor t(static_cast<int>(c.size()), 1, Variance::covector);
  std::copy(c.begin(), c.end(), t.coeffs_.begin());
  return t;
}

double KTensor::coeff(std::initializer_list<int> axes) const {
  if (static_cast<int>(axes.size()) != grade_) {
    throw std::invalid_argument("KTensor::coeff: wrong number of axes");
  }
  std::uint32_t mask = 0;
  int sign = 1;
  for (int a : axes) {
    std::uint32_t bit = 1u << a;
    if (mask & bit) throw std::invalid_argument("KTensor::coeff: repeated axis");
    sign *= blades::merge_sign(mask, bit);
    mask |= bit;
  }
  return sign * coeffs_[blades::index_of(dim_, mask)];
}

double KTensor::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

KTensor& KTensor::operator+=(const KTensor& o) {
  if (!same_shape(o)) throw std::invalid_argument("KTensor: shape mismatch");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

KTensor& KTensor::operator-=(const KTensor& o) {
  if (!same_shape(o)) throw std::invalid_argument("KTensor: shape mismatch");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

KTensor& KTensor::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

VolumeElement VolumeElement::standard(const MetricSignature& g) {
  KTensor form(g.dim(), g.dim(), Variance::covector);
  form[0] = 1.0;
  return VolumeElement{form, g.det_sign()};
}

// ---------------------------------------------------------------------------
// Operations

KTensor wedge(const KTensor& a, const KTensor& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("wedge: dimension mismatch");
  }
  if (a.variance() != b.variance()) {
    throw std::invalid_argument("wedge: mixed variance");
  }
  int n = a.dim();
  int grade = a.grade() + b.grade();
  if (grade > n) {
    throw std::invalid_argument("wedge: grade overflow (j + k > n)");
  }
  KTensor out(n, grade, a.variance());
  auto am = blades::masks(n, a.grade());
  auto bm = blades::masks(n, b.grade());
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < b.size(); ++j) {
      int s = blades::merge_sign(am[i], bm[j]);
      if (s == 0) continue;
      out[blades::index_of(n, am[i] | bm[j])] += s * a[i] * b[j];
    }
  }
  return out;
}

KTensor flat(const KTensor& v, const MetricSignature& g) {
  if (v.dim() != g.dim()) throw std::invalid_argument("flat: dim mismatch");
  if (v.variance() != Variance::vector) {
    throw std::invalid_argument("flat: expects a vector-valued tensor");
  }
  KTensor out(v.dim(), v.grade(), Variance::covector);
  auto ms = blades::masks(v.dim(), v.grade());
  for (int i = 0; i < v.size(); ++i) out[i] = v[i] * g.blade_sign(ms[i]);
  return out;
}

KTensor sharp(const KTensor& w, const MetricSignature& g) {
  if (w.dim() != g.dim()) throw std::invalid_argument("sharp: dim mismatch");
  if (w.variance() != Variance::covector) {
    throw std::invalid_argument("sharp: expects a covector-valued tensor");
  }
  KTensor out(w.dim(), w.grade(), Variance::vector);
  auto ms = blades::masks(w.dim(), w.grade());
  for (int i = 0; i < w.size(); ++i) out[i] = w[i] * g.blade_sign(ms[i]);
  return out;
}

KTensor contract(const KTensor& one, const KTensor& v) {
  if (one.dim() != v.dim()) throw std::invalid_argument("contract: dim mismatch");
  if (one.grade() != 1) {
    throw std::invalid_argument("contract: first argument must have grade 1");
  }
  if (one.variance() == v.variance()) {
    throw std::invalid_argument("contract: variances must be opposite");
  }
  if (v.grade() < 1) {
    throw std::invalid_argument("contract: cannot contract a grade-0 tensor");
  }
  int n = v.dim();
  KTensor out(n, v.grade() - 1, v.variance());
  auto ms = blades::masks(n, v.grade());
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    std::uint32_t m = ms[i];
    std::uint32_t mm = m;
    while (mm) {
      int j = std::countr_zero(mm);
      mm &= mm - 1;
      // position of axis j within the sorted blade sets the sign
      int below = std::popcount(m & ((1u << j) - 1u));
      double s = (below & 1) ? -1.0 : 1.0;
      out[blades::index_of(n, m ^ (1u << j))] += s * one[j] * v[i];
    }
  }
  return out;
}

double inner(const KTensor& a, const KTensor& b, const MetricSignature& g) {
  if (a.dim() != b.dim() || a.dim() != g.dim()) {
    throw std::invalid_argument("inner: dimension mismatch");
  }
  if (a.grade() != b.grade()) {
    throw std::invalid_argument("inner: grade mismatch");
  }
  if (a.variance() != b.variance()) {
    throw std::invalid_argument("inner: variance mismatch");
  }
  auto ms = blades::masks(a.dim(), a.grade());
  double r = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    r += a[i] * b[i] * g.blade_sign(ms[i]);
  }
  return r;
}

KTensor hodge(const KTensor& w, const MetricSignature& g) {
  if (w.dim() != g.dim()) throw std::invalid_argument("hodge: dim mismatch");
  int n = w.dim();
  int k = w.grade();
  KTensor out(n, n - k, w.variance());
  auto ms = blades::masks(n, k);
  std::uint32_t full = blades::full_mask(n);
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    std::uint32_t m = ms[i];
    std::uint32_t comp = full ^ m;
    // e^I ^ (hodge e^I) = blade_sign(I) Vol fixes the coefficient
    double c = g.blade_sign(m) * blades::merge_sign(m, comp);
    out[blades::index_of(n, comp)] += c * w[i];
  }
  return out;
}

KTensor hodge_left(const KTensor& w, const MetricSignature& g) {
  KTensor out = hodge(w, g);
  int k = w.grade();
  int flips = k * (w.dim() - k);
  if (flips & 1) out *= -1.0;
  return out;
}

double apply(const KTensor& form, const KTensor& multivector) {
  if (form.variance() != Variance::covector ||
      multivector.variance() != Variance::vector) {
    throw std::invalid_argument("apply: expects covector[vector]");
  }
  if (form.dim() != multivector.dim() || form.grade() != multivector.grade()) {
    throw std::invalid_argument("apply: shape mismatch");
  }
  double r = 0.0;
  for (int i = 0; i < form.size(); ++i) r += form[i] * multivector[i];
  return r;
}

}  // namespace whitney
