#include "whitney/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace whitney {

int permutation_parity(std::span<const int> seq) {
  int inversions = 0;
  for (size_t i = 0; i < seq.size(); ++i) {
    for (size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) {
        throw std::invalid_argument("permutation_parity: duplicate entry");
      }
      if (seq[i] > seq[j]) ++inversions;
    }
  }
  return (inversions & 1) ? -1 : 1;
}

std::vector<int> complement(const SubsimplexRef& rho, int n) {
  std::vector<bool> used(n + 1, false);
  for (int i : rho.indices) {
    if (i < 0 || i > n) {
      throw std::out_of_range("complement: index out of range");
    }
    if (used[i]) throw std::invalid_argument("complement: duplicate index");
    used[i] = true;
  }
  std::vector<int> tau;
  for (int i = 0; i <= n; ++i) {
    if (!used[i]) tau.push_back(i);
  }
  return tau;
}

int perm_sign(const SubsimplexRef& rho, int n) {
  std::vector<int> seq = rho.indices;
  for (int i : complement(rho, n)) seq.push_back(i);
  return permutation_parity(seq);
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Simplex Simplex::embedded(std::vector<Eigen::VectorXd> vertices,
                          MetricSignature signature) {
  const int n = signature.dim();
  if (static_cast<int>(vertices.size()) != n + 1) {
    throw std::invalid_argument("Simplex::embedded: need n+1 vertices");
  }
  for (const auto& v : vertices) {
    if (v.size() != n) {
      throw std::invalid_argument("Simplex::embedded: vertex dim mismatch");
    }
  }

  Simplex s;
  s.n_ = n;
  s.embedded_ = true;
  s.signature_ = signature;
  s.vertices_ = std::move(vertices);

  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag[i] = signature.sign(i);

  Eigen::MatrixXd edges(n, n);
  for (int i = 1; i <= n; ++i) {
    edges.col(i - 1) = s.vertices_[i] - s.vertices_[0];
  }
  s.gram_ = edges.transpose() * diag.asDiagonal() * edges;
  s.finish_from_gram();

  s.star_vol_ = edges.determinant() / factorial(n);

  // d lambda_a for a >= 1 are the rows of the inverse edge matrix;
  // d lambda_0 closes the partition of unity.
  Eigen::MatrixXd edges_inv = edges.inverse();
  s.dlambdas_.reserve(n + 1);
  KTensor dl0(n, 1, Variance::covector);
  for (int a = 1; a <= n; ++a) {
    KTensor dla(n, 1, Variance::covector);
    for (int c = 0; c < n; ++c) dla[c] = edges_inv(a - 1, c);
    dl0 -= dla;
    s.dlambdas_.push_back(dla);
  }
  s.dlambdas_.insert(s.dlambdas_.begin(), dl0);

  s.dlambda_inner_.resize(n + 1, n + 1);
  for (int a = 0; a <= n; ++a) {
    for (int b = a; b <= n; ++b) {
      double v = inner(s.dlambdas_[a], s.dlambdas_[b], signature);
      s.dlambda_inner_(a, b) = v;
      s.dlambda_inner_(b, a) = v;
    }
  }

  Eigen::MatrixXd affine(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    affine(0, i) = 1.0;
    affine.block(1, i, n, 1) = s.vertices_[i];
  }
  s.bary_solver_ = affine.inverse();
  return s;
}

Simplex Simplex::from_edge_lengths(const Eigen::MatrixXd& sq_lengths) {
  if (sq_lengths.rows() != sq_lengths.cols() || sq_lengths.rows() < 2) {
    throw std::invalid_argument("Simplex::from_edge_lengths: square table");
  }
  const int n = static_cast<int>(sq_lengths.rows()) - 1;
  if (n > kMaxDim) {
    throw std::invalid_argument("Simplex::from_edge_lengths: dim > 6");
  }
  for (int i = 0; i <= n; ++i) {
    if (sq_lengths(i, i) != 0.0) {
      throw std::invalid_argument(
          "Simplex::from_edge_lengths: nonzero diagonal");
    }
    for (int j = 0; j <= n; ++j) {
      if (sq_lengths(i, j) != sq_lengths(j, i)) {
        throw std::invalid_argument(
            "Simplex::from_edge_lengths: table not symmetric");
      }
    }
  }

  Simplex s;
  s.n_ = n;
  s.embedded_ = false;
  s.sq_lengths_ = sq_lengths;

  // polarization: G_ij = (l2_{0i} + l2_{0j} - l2_{ij}) / 2
  s.gram_.resize(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      s.gram_(i - 1, j - 1) =
          0.5 * (sq_lengths(0, i) + sq_lengths(0, j) - sq_lengths(i, j));
    }
  }
  s.finish_from_gram();

  // orientation of the stored vertex order is declared positive
  s.star_vol_ = std::sqrt(std::abs(s.gram_det_)) / factorial(n);
  return s;
}

void Simplex::finish_from_gram() {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram_);
  gram_det_ = lu.determinant();
  double scale = gram_.cwiseAbs().maxCoeff();
  double tol = 1e-12 * std::pow(scale, n_);
  if (scale == 0.0 || std::abs(gram_det_) < tol || !lu.isInvertible()) {
    throw DegenerateSimplexError("degenerate simplex: |det G| below tolerance");
  }
  gram_inv_ = lu.inverse();

  if (!embedded_) {
    // <dl_a, dl_b> = (G^{-1})_ab for a,b >= 1; row/col 0 close the
    // partition of unity (sum of all differentials vanishes).
    dlambda_inner_.resize(n_ + 1, n_ + 1);
    for (int a = 1; a <= n_; ++a) {
      for (int b = 1; b <= n_; ++b) {
        dlambda_inner_(a, b) = gram_inv_(a - 1, b - 1);
      }
    }
    for (int b = 1; b <= n_; ++b) {
      double sum = 0.0;
      for (int a = 1; a <= n_; ++a) sum += gram_inv_(a - 1, b - 1);
      dlambda_inner_(0, b) = -sum;
      dlambda_inner_(b, 0) = -sum;
    }
    double total = 0.0;
    for (int a = 1; a <= n_; ++a) {
      for (int b = 1; b <= n_; ++b) total += gram_inv_(a - 1, b - 1);
    }
    dlambda_inner_(0, 0) = total;
  }
}

const MetricSignature& Simplex::signature() const {
  if (!signature_) {
    throw std::logic_error("Simplex: no metric signature in abstract mode");
  }
  return *signature_;
}

const Eigen::VectorXd& Simplex::vertex(int i) const {
  if (!embedded_) {
    throw std::logic_error("Simplex: vertices unavailable in abstract mode");
  }
  return vertices_.at(i);
}

KTensor Simplex::volume_form() const {
  if (!embedded_) {
    throw std::logic_error("Simplex::volume_form: embedded mode only");
  }
  KTensor form = KTensor::scalar(n_, Variance::covector, 1.0 / factorial(n_));
  for (int i = 1; i <= n_; ++i) {
    Eigen::VectorXd e = vertices_[i] - vertices_[0];
    KTensor ef = flat(KTensor::vector_from_components(
                          std::span<const double>(e.data(), e.size())),
                      *signature_);
    form = wedge(form, ef);
  }
  return form;
}

std::vector<double> Simplex::barycentric(const Eigen::VectorXd& x) const {
  if (!embedded_) {
    throw std::logic_error("Simplex::barycentric: embedded mode only");
  }
  if (x.size() != n_) {
    throw std::invalid_argument("Simplex::barycentric: point dim mismatch");
  }
  Eigen::VectorXd rhs(n_ + 1);
  rhs[0] = 1.0;
  rhs.tail(n_) = x;
  Eigen::VectorXd lambda = bary_solver_ * rhs;
  return std::vector<double>(lambda.data(), lambda.data() + n_ + 1);
}

Eigen::VectorXd Simplex::point_from_barycentric(
    std::span<const double> lambda) const {
  if (!embedded_) {
    throw std::logic_error("Simplex::point_from_barycentric: embedded only");
  }
  if (static_cast<int>(lambda.size()) != n_ + 1) {
    throw std::invalid_argument("point_from_barycentric: need n+1 weights");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i <= n_; ++i) x += lambda[i] * vertices_[i];
  return x;
}

const KTensor& Simplex::d_lambda(int a) const {
  if (!embedded_) {
    throw std::logic_error("Simplex::d_lambda: embedded mode only");
  }
  return dlambdas_.at(a);
}

double Simplex::edge_sq_length(int i, int j) const {
  if (i == j) return 0.0;
  if (embedded_) {
    Eigen::VectorXd d = vertices_.at(i) - vertices_.at(j);
    double v = 0.0;
    for (int c = 0; c < n_; ++c) v += signature_->sign(c) * d[c] * d[c];
    return v;
  }
  return sq_lengths_(i, j);
}

}  // namespace whitney
