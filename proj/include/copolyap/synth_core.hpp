#pragma once

/**
 * @file synth_core.hpp
 * @brief Problem data, coefficient templates and the decrease polynomials.
 *
 * For V(x) = h(x) / ||x||^{2r} and a multiplier eta, the decrease condition
 * -<grad V, f + eta> >= 0 has numerator
 *
 *   s(x) = -||x||^2 <grad h(x), f(x) + eta> + 2 r h(x) <x, f(x) + eta>.
 *
 * s0 is this with eta = 0 (interior). On the face x_i = 0 the multiplier is
 * taken as eta = -f_i(x) e_i, which zeroes the i-th velocity component, and
 * the result is restricted to the face.
 */

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "copolyap/cone.hpp"
#include "copolyap/linear_form.hpp"
#include "copolyap/poly.hpp"
#include "copolyap/report.hpp"

namespace copolyap {

using VectorField = std::vector<Poly>;
using CoefficientTemplate = Polynomial<LinearForm>;

class InvalidProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MalformedCertificateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x' = f(x) + eta on the orthant, f homogeneous of degree field_degree.
class ProblemSpec {
 public:
  /// Validates homogeneity; all nonzero components must share one degree
  /// >= 1. An identically zero field is given nominal degree 1.
  static ProblemSpec make(VectorField field) {
    if (field.empty()) throw InvalidProblemError("field: at least one component required");
    const int n = field.front().nvars();
    std::optional<int> degree;
    for (std::size_t i = 0; i < field.size(); ++i) {
      const Poly& fi = field[i];
      if (fi.nvars() != n || static_cast<std::size_t>(n) != field.size()) {
        throw InvalidProblemError("field[" + std::to_string(i) + "]: expected " + std::to_string(field.size()) +
                                  " variables");
      }
      if (fi.is_zero()) continue;
      const auto hom = check_homogeneous(fi);
      if (!hom) throw InvalidProblemError("field[" + std::to_string(i) + "]: component is not homogeneous");
      if (*hom.degree < 1) throw InvalidProblemError("field[" + std::to_string(i) + "]: degree must be at least 1");
      if (degree && *degree != *hom.degree) {
        throw InvalidProblemError("field[" + std::to_string(i) + "]: components have different degrees");
      }
      degree = *hom.degree;
    }
    const int d = degree.value_or(1);
    VectorField normalized;
    for (const Poly& fi : field) {
      Poly g(n, d);
      for (const auto& [m, c] : fi.terms()) g.add_term(m, c);
      normalized.push_back(std::move(g));
    }
    return ProblemSpec(n, std::move(normalized), d);
  }

  /// f(x) = A x.
  static ProblemSpec linear(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw InvalidProblemError("linear field needs a square matrix");
    VectorField f;
    for (int i = 0; i < n; ++i) {
      Poly fi(n, 1);
      for (int j = 0; j < n; ++j) {
        if (a(i, j) != 0.0) fi += Poly::variable(n, j) * a(i, j);
      }
      f.push_back(std::move(fi));
    }
    return make(std::move(f));
  }

  int dim() const { return n_; }
  const OrthantCone& cone() const { return cone_; }
  const VectorField& field() const { return field_; }
  int field_degree() const { return field_degree_; }

  Vector eval_field(const Vector& x) const {
    Vector out(n_);
    for (int i = 0; i < n_; ++i) out[i] = field_[i](x);
    return out;
  }

 private:
  ProblemSpec(int n, VectorField field, int degree)
      : n_(n), cone_(n), field_(std::move(field)), field_degree_(degree) {}

  int n_;
  OrthantCone cone_;
  VectorField field_;
  int field_degree_;
};

/// One LP variable per monomial of the given degree, in grlex order.
inline CoefficientTemplate make_template(int n, int degree) {
  if (degree < 1) throw std::invalid_argument("make_template: degree must be at least 1");
  const auto monos = monomials_of_degree(n, degree);
  CoefficientTemplate t(n, degree);
  for (std::size_t k = 0; k < monos.size(); ++k) t.add_term(monos[k], LinearForm::variable(monos.size(), k));
  return t;
}

inline Poly norm_squared(int n) { return norm_squared_power(n, 1); }

/// -||x||^2 <grad h, f> + 2 r h <x, f>.
template <class Coef>
Polynomial<Coef> decrease_numerator(const Polynomial<Coef>& h, const VectorField& f, int r) {
  const int n = h.nvars();
  if (static_cast<int>(f.size()) != n) throw DimensionError("decrease_numerator: field dimension mismatch");
  const int fdeg = f.empty() ? 1 : f.front().degree();
  const auto grad = gradient(h);
  Polynomial<Coef> grad_dot_f(n, std::max(h.degree() - 1, 0) + fdeg);
  Poly x_dot_f(n, fdeg + 1);
  for (int j = 0; j < n; ++j) {
    grad_dot_f += grad[j] * f[j];
    x_dot_f += Poly::variable(n, j) * f[j];
  }
  Polynomial<Coef> s = grad_dot_f * norm_squared(n);
  s *= -1.0;
  if (r != 0) s += (h * x_dot_f) * (2.0 * r);
  return s;
}

template <class Coef>
Polynomial<Coef> build_s0(const Polynomial<Coef>& h, const VectorField& f, int r) {
  return decrease_numerator(h, f, r);
}

/// Decrease numerator on the face x_i = 0 (0-based) with eta = -f_i e_i.
template <class Coef>
Polynomial<Coef> build_s_face(const Polynomial<Coef>& h, const VectorField& f, int r, int i) {
  if (i < 0 || i >= h.nvars()) throw DimensionError("build_s_face: face index out of range");
  VectorField g = f;
  g[i] = Poly(h.nvars(), f[i].degree());
  return restrict_to_face(decrease_numerator(h, g, r), i);
}

// ---------------------------------------------------------------------------
// Certificates

enum class Method { Disc, Polya, External };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Disc: return "disc";
    case Method::Polya: return "polya";
    case Method::External: return "external";
  }
  return "external";
}

enum class FaceMode { Conservative, SignSplit };

inline const char* to_string(FaceMode m) { return m == FaceMode::SignSplit ? "sign_split" : "conservative"; }

struct DiscParams {
  int level = 0;
  double nominal_delta = 1.0;
  double diameter = 0.0;
  FaceMode mode = FaceMode::Conservative;
};

struct PolyaParams {
  int polya_degree = 0;
};

/// V(x) = h(x) / ||x||^{2r} together with how it was obtained.
struct Certificate {
  Poly h;
  int r = 0;
  Method method = Method::External;
  std::variant<std::monostate, DiscParams, PolyaParams> params;
  double margin = 0.0;
  /// Options the run used, recorded for provenance.
  std::map<std::string, double> options;
  std::optional<VerificationReport> report;
};

/// Degree bookkeeping: h homogeneous in n variables, r >= 0, deg h >= 2r + 1.
inline void validate_certificate(const Certificate& cert, int n) {
  if (cert.h.nvars() != n) throw MalformedCertificateError("h: variable count does not match the problem");
  if (cert.r < 0) throw MalformedCertificateError("r: must be nonnegative");
  const auto hom = check_homogeneous(cert.h);
  if (!hom) throw MalformedCertificateError("h: polynomial is not homogeneous");
  if (cert.h.is_zero()) throw MalformedCertificateError("h: zero polynomial");
  if (*hom.degree < 2 * cert.r + 1) throw MalformedCertificateError("h: degree must be at least 2r+1");
}

/// Evaluable V = h / ||x||^{2r}, homogeneous of degree deg h - 2r.
class LyapunovFunction {
 public:
  explicit LyapunovFunction(const Certificate& cert) : h_(cert.h), r_(cert.r), grad_(copolyap::gradient(cert.h)) {
    validate_certificate(cert, cert.h.nvars());
  }

  int degree() const { return h_.degree() - 2 * r_; }

  double operator()(const Vector& x) const {
    const double nsq = x.squaredNorm();
    if (nsq == 0.0) return 0.0;
    return h_(x) / std::pow(nsq, r_);
  }

  /// grad V = grad h / ||x||^{2r} - 2 r h x / ||x||^{2r+2}.
  Vector gradient(const Vector& x) const {
    const int n = static_cast<int>(x.size());
    Vector g(n);
    const double nsq = x.squaredNorm();
    if (nsq == 0.0) return Vector::Zero(n);
    const double denom = std::pow(nsq, r_);
    for (int j = 0; j < n; ++j) g[j] = grad_[j](x) / denom;
    if (r_ != 0) g -= (2.0 * r_ * h_(x) / (denom * nsq)) * x;
    return g;
  }

 private:
  Poly h_;
  int r_;
  std::vector<Poly> grad_;
};

inline LyapunovFunction assemble_V(const Certificate& cert) { return LyapunovFunction(cert); }

}  // namespace copolyap
