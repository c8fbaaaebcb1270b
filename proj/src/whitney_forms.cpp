#include "whitney/whitney_forms.hpp"

#include <cmath>

namespace whitney {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_descriptor(const WhitneyDescriptor& w) {
  if (w.simplex == nullptr) {
    throw std::invalid_argument("WhitneyDescriptor: null simplex");
  }
  if (!w.simplex->is_embedded()) {
    throw std::logic_error("Whitney evaluation requires an embedded simplex");
  }
  if (w.rho.indices.empty()) {
    throw std::invalid_argument("WhitneyDescriptor: empty subsimplex");
  }
}

KTensor flat_of(const Eigen::VectorXd& v, const MetricSignature& g) {
  return flat(KTensor::vector_from_components(
                  std::span<const double>(v.data(), v.size())),
              g);
}

}  // namespace

KTensor eval_barycentric(const WhitneyDescriptor& w, const Eigen::VectorXd& x) {
  check_descriptor(w);
  const Simplex& s = *w.simplex;
  const int n = s.dim();
  const int j = w.form_grade();
  const auto lambda = s.barycentric(x);

  KTensor result(n, j, Variance::covector);
  for (int omit = 0; omit <= j; ++omit) {
    KTensor term = KTensor::scalar(n, Variance::covector, 1.0);
    for (int i = 0; i <= j; ++i) {
      if (i == omit) continue;
      term = wedge(term, s.d_lambda(w.rho.indices[i]));
    }
    double c = lambda[w.rho.indices[omit]];
    if (omit & 1) c = -c;
    result += c * term;
  }
  result *= factorial(j);
  return result;
}

KTensor eval_covector(const WhitneyDescriptor& w, const Eigen::VectorXd& x) {
  check_descriptor(w);
  const Simplex& s = *w.simplex;
  const MetricSignature& g = s.signature();
  const int n = s.dim();
  const int j = w.form_grade();

  KTensor tau_wedge = KTensor::scalar(n, Variance::covector, 1.0);
  for (int k : complement(w.rho, n)) {
    tau_wedge = wedge(tau_wedge, flat_of(s.vertex(k) - x, g));
  }
  double c = perm_sign(w.rho, n) * factorial(j) / factorial(n) / s.star_vol();
  return c * hodge_left(tau_wedge, g);
}

double eval_vector(const WhitneyDescriptor& w, const Eigen::VectorXd& x,
                   const KTensor& U) {
  check_descriptor(w);
  const Simplex& s = *w.simplex;
  const MetricSignature& g = s.signature();
  const int n = s.dim();
  const int j = w.form_grade();
  if (U.grade() != j || U.variance() != Variance::vector) {
    throw std::invalid_argument("eval_vector: U must be a grade-j multivector");
  }

  KTensor vol(n, n, Variance::vector);
  vol[0] = s.star_vol();  // (1/n!) wedge of the edge vectors

  KTensor v_tau = KTensor::scalar(n, Variance::vector, 1.0);
  for (int k : complement(w.rho, n)) {
    Eigen::VectorXd d = s.vertex(k) - x;
    v_tau = wedge(v_tau, KTensor::vector_from_components(
                             std::span<const double>(d.data(), d.size())));
  }

  double num = inner(vol, wedge(U, v_tau), g);
  double den = inner(vol, vol, g);
  return perm_sign(w.rho, n) * factorial(j) / factorial(n) * num / den;
}

KTensor hodge_dual_whitney(const WhitneyDescriptor& w, const Eigen::VectorXd& x) {
  check_descriptor(w);
  return hodge_left(eval_covector(w, x), w.simplex->signature());
}

KTensor wedge_expansion_eval(const WhitneyDescriptor& w,
                             const Eigen::VectorXd& x) {
  check_descriptor(w);
  const Simplex& s = *w.simplex;
  const MetricSignature& g = s.signature();
  const int n = s.dim();
  const int j = w.form_grade();
  const auto tau = complement(w.rho, n);
  const int m = static_cast<int>(tau.size());

  // constant term: wedge of the vertex flats over tau
  KTensor constant = KTensor::scalar(n, Variance::covector, 1.0);
  for (int k : tau) constant = wedge(constant, flat_of(s.vertex(k), g));

  // linear term: x^flat against each omit-one subsimplex volume, signed by
  // the transpositions needed to bring x^flat to the front
  KTensor linear(n, m > 0 ? m - 1 : 0, Variance::covector);
  for (int omit = 0; omit < m; ++omit) {
    KTensor part = KTensor::scalar(n, Variance::covector, 1.0);
    for (int i = 0; i < m; ++i) {
      if (i == omit) continue;
      part = wedge(part, flat_of(s.vertex(tau[i]), g));
    }
    if (omit & 1) part *= -1.0;
    linear += part;
  }

  KTensor expanded = constant;
  if (m > 0) expanded -= wedge(flat_of(x, g), linear);

  double c = perm_sign(w.rho, n) * factorial(j) / factorial(n) / s.star_vol();
  return c * hodge_left(expanded, g);
}

double integrate_over_subsimplex(const FormField& field, const Simplex& s,
                                 const SubsimplexRef& face) {
  if (!s.is_embedded()) {
    throw std::logic_error("integrate_over_subsimplex: embedded mode only");
  }
  const int j = face.dimension();
  if (field.grade != j) {
    throw std::invalid_argument(
        "integrate_over_subsimplex: field grade must match face dimension");
  }
  if (j == 0) {
    KTensor v = field.eval(s.vertex(face.indices[0]));
    return v[0];
  }

  const Eigen::VectorXd& base = s.vertex(face.indices[0]);
  std::vector<Eigen::VectorXd> edges;
  edges.reserve(j);
  for (int a = 1; a <= j; ++a) {
    edges.push_back(s.vertex(face.indices[a]) - base);
  }

  // degree-2 rule on the standard j-simplex: j+1 symmetric interior points
  // with equal weights
  const double b = (1.0 - 1.0 / std::sqrt(j + 2.0)) / (j + 1.0);
  const double a = 1.0 - j * b;
  const double simplex_vol = 1.0 / factorial(j);
  const double weight = simplex_vol / (j + 1.0);

  auto ms = blades::masks(s.dim(), j);
  double integral = 0.0;
  for (int q = 0; q <= j; ++q) {
    // quadrature point q: barycentric weight a on face vertex q, b elsewhere
    Eigen::VectorXd point = base;
    for (int c = 1; c <= j; ++c) {
      point += (c == q ? a : b) * edges[c - 1];
    }

    KTensor value = field.eval(point);
    if (value.grade() != j || value.variance() != Variance::covector) {
      throw std::invalid_argument(
          "integrate_over_subsimplex: field must produce covector j-forms");
    }
    // evaluate the j-form on the face edge vectors
    double density = 0.0;
    Eigen::MatrixXd minor(j, j);
    for (int bi = 0; bi < value.size(); ++bi) {
      if (value[bi] == 0.0) continue;
      std::uint32_t mask = ms[bi];
      int r = 0;
      for (int axis = 0; axis < s.dim(); ++axis) {
        if (!(mask & (1u << axis))) continue;
        for (int c = 0; c < j; ++c) minor(r, c) = edges[c][axis];
        ++r;
      }
      density += value[bi] * minor.determinant();
    }
    integral += weight * density;
  }
  return integral;
}

KTensor exterior_derivative_fd(const FormField& field, const Eigen::VectorXd& x,
                               double h) {
  if (h <= 0.0) throw std::invalid_argument("exterior_derivative_fd: h > 0");
  const int n = static_cast<int>(x.size());
  KTensor result(n, field.grade + 1, Variance::covector);
  for (int axis = 0; axis < n; ++axis) {
    Eigen::VectorXd xp = x, xm = x;
    xp[axis] += h;
    xm[axis] -= h;
    KTensor partial = (field.eval(xp) - field.eval(xm)) * (0.5 / h);
    result += wedge(KTensor::basis(n, Variance::covector, {axis}), partial);
  }
  return result;
}

KTensor codifferential_fd(const FormField& field, const MetricSignature& g,
                          const Eigen::VectorXd& x, double h) {
  const int n = g.dim();
  const int k = field.grade;
  if (k < 1) {
    throw std::invalid_argument("codifferential_fd: grade must be >= 1");
  }
  FormField starred{n - k,
                    [&field, &g](const Eigen::VectorXd& p) {
                      return hodge(field.eval(p), g);
                    }};
  KTensor d_starred = exterior_derivative_fd(starred, x, h);
  KTensor result = hodge(d_starred, g);
  int sign = ((n * k + n + 1) & 1) ? -1 : 1;
  return sign * result;
}

std::optional<double> decomposition_residual(const Simplex& s, int l,
                                             const Eigen::VectorXd& x) {
  if (l < 1 || l + 1 > s.dim()) {
    throw std::invalid_argument("decomposition_residual: need 1 <= l <= n-1");
  }
  const double denom = s.barycentric(x)[l];
  if (std::abs(denom) < 1e-12) return std::nullopt;  // skipped point

  SubsimplexRef head, edge, full;
  for (int i = 0; i <= l; ++i) head.indices.push_back(i);
  edge.indices = {l, l + 1};
  for (int i = 0; i <= l + 1; ++i) full.indices.push_back(i);

  KTensor lhs = wedge(eval_covector({&s, head}, x), eval_covector({&s, edge}, x));
  lhs *= (l + 1.0) / denom;
  KTensor rhs = eval_covector({&s, full}, x);
  return (lhs - rhs).max_abs();
}

FormField covector_field(const WhitneyDescriptor& w) {
  return FormField{w.form_grade(), [w](const Eigen::VectorXd& x) {
                     return eval_covector(w, x);
                   }};
}

FormField hodge_dual_field(const WhitneyDescriptor& w) {
  return FormField{w.simplex->dim() - w.form_grade(),
                   [w](const Eigen::VectorXd& x) {
                     return hodge_dual_whitney(w, x);
                   }};
}

}  // namespace whitney
