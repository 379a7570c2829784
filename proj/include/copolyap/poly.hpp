#pragma once

/**
 * @file poly.hpp
 * @brief Sparse multivariate polynomials and symmetric tensors.
 *
 * Polynomial<Coef> is generic over its coefficient ring so the same algebra
 * serves fixed polynomials (Coef = double) and synthesis templates whose
 * coefficients are affine forms in LP unknowns (Coef = LinearForm).
 *
 * Terms are kept in graded-lexicographic order, largest monomial first:
 * x1^2 > x1 x2 > x2^2 > x1 > x2 > 1.
 */

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "copolyap/linear_form.hpp"

namespace copolyap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Monomial {
  std::vector<int> exponents;

  Monomial() = default;
  explicit Monomial(std::vector<int> e) : exponents(std::move(e)) {}
  static Monomial one(int nvars) { return Monomial(std::vector<int>(nvars, 0)); }

  int nvars() const { return static_cast<int>(exponents.size()); }
  int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }
  int operator[](std::size_t j) const { return exponents[j]; }

  bool operator==(const Monomial&) const = default;

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.nvars() != b.nvars()) throw DimensionError("monomial product: variable count mismatch");
    Monomial m = a;
    for (std::size_t j = 0; j < m.exponents.size(); ++j) m.exponents[j] += b.exponents[j];
    return m;
  }
};

/// Graded lex, descending: higher total degree first, then the first
/// differing exponent decides (larger first).
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da > db;
    return a.exponents > b.exponents;
  }
};

/// All monomials of total degree `degree` in `nvars` variables, in grlex
/// descending order. C(nvars + degree - 1, degree) of them.
inline std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  std::vector<Monomial> out;
  if (nvars <= 0 || degree < 0) return out;
  std::vector<int> e(nvars, 0);
  // Lex-descending enumeration of compositions of `degree` into nvars parts.
  auto rec = [&](auto&& self, int j, int remaining) -> void {
    if (j == nvars - 1) {
      e[j] = remaining;
      out.emplace_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[j] = k;
      self(self, j + 1, remaining - k);
    }
  };
  rec(rec, 0, degree);
  return out;
}

inline double multinomial(const std::vector<int>& counts) {
  double result = 1.0;
  int total = 0;
  for (int c : counts) {
    for (int k = 1; k <= c; ++k) {
      ++total;
      result *= static_cast<double>(total) / k;
    }
  }
  return result;
}

template <class Coef>
class Polynomial {
 public:
  using Terms = std::map<Monomial, Coef, GrlexGreater>;

  Polynomial() = default;
  /// Zero polynomial with a nominal degree (kept through the algebra so a
  /// vanishing template still reports the degree it was built at).
  explicit Polynomial(int nvars, int degree = 0) : nvars_(nvars), degree_(degree) {
    if (nvars < 1) throw DimensionError("polynomial needs at least one variable");
  }

  static Polynomial constant(int nvars, const Coef& c) {
    Polynomial p(nvars, 0);
    p.add_term(Monomial::one(nvars), c);
    return p;
  }
  static Polynomial variable(int nvars, int j) {
    Polynomial p(nvars, 1);
    Monomial m = Monomial::one(nvars);
    m.exponents.at(j) = 1;
    p.add_term(std::move(m), Coef(1.0));
    return p;
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Coef coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coef{} : it->second;
  }

  /// Accumulates c into the coefficient of m; exact zeros are dropped.
  void add_term(Monomial m, const Coef& c) {
    if (m.nvars() != nvars_) throw DimensionError("monomial has wrong variable count");
    degree_ = std::max(degree_, m.degree());
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) it->second += c;
    if (is_zero_coefficient(it->second)) terms_.erase(it);
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    degree_ = std::max(degree_, o.degree_);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c * -1.0);
    degree_ = std::max(degree_, o.degree_);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  /// Evaluates sum_i a_i prod_j x_j^{i_j}.
  Coef operator()(const Vector& x) const {
    if (x.size() != nvars_) throw DimensionError("eval: point dimension does not match nvars");
    Coef acc{};
    for (const auto& [m, c] : terms_) {
      double mono = 1.0;
      for (int j = 0; j < nvars_; ++j) {
        for (int k = 0; k < m.exponents[j]; ++k) mono *= x[j];
      }
      acc += c * mono;
    }
    return acc;
  }

 private:
  void check_same_vars(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw DimensionError("polynomial arithmetic: variable count mismatch");
  }

  int nvars_ = 1;
  int degree_ = 0;
  Terms terms_;
};

using Poly = Polynomial<double>;

template <class Coef>
Coef eval(const Polynomial<Coef>& p, const Vector& x) {
  return p(x);
}

/// Product with a fixed-coefficient polynomial; the nominal degrees add.
template <class Coef>
Polynomial<Coef> operator*(const Polynomial<Coef>& a, const Poly& b) {
  if (a.nvars() != b.nvars()) throw DimensionError("polynomial product: variable count mismatch");
  Polynomial<Coef> out(a.nvars(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

template <class Coef>
std::vector<Polynomial<Coef>> gradient(const Polynomial<Coef>& p) {
  const int n = p.nvars();
  std::vector<Polynomial<Coef>> g;
  g.reserve(n);
  for (int j = 0; j < n; ++j) {
    Polynomial<Coef> d(n, std::max(p.degree() - 1, 0));
    for (const auto& [m, c] : p.terms()) {
      const int e = m.exponents[j];
      if (e == 0) continue;
      Monomial dm = m;
      dm.exponents[j] = e - 1;
      d.add_term(std::move(dm), c * static_cast<double>(e));
    }
    g.push_back(std::move(d));
  }
  return g;
}

/// P(y) = p(y_1^2, ..., y_n^2).
template <class Coef>
Polynomial<Coef> substitute_squares(const Polynomial<Coef>& p) {
  Polynomial<Coef> out(p.nvars(), 2 * p.degree());
  for (const auto& [m, c] : p.terms()) {
    Monomial sq = m;
    for (int& e : sq.exponents) e *= 2;
    out.add_term(std::move(sq), c);
  }
  return out;
}

/// (sum_{j not excluded} y_j^2)^d as a fixed polynomial.
inline Poly norm_squared_power(int nvars, int d, std::optional<int> excluded = std::nullopt) {
  if (excluded && (*excluded < 0 || *excluded >= nvars)) throw DimensionError("excluded variable out of range");
  Poly base(nvars, 2);
  for (int j = 0; j < nvars; ++j) {
    if (excluded && *excluded == j) continue;
    Monomial m = Monomial::one(nvars);
    m.exponents[j] = 2;
    base.add_term(std::move(m), 1.0);
  }
  Poly result = Poly::constant(nvars, 1.0);
  for (int k = 0; k < d; ++k) result = result * base;
  return result;
}

/// ||y||^{2d} p(y). With `excluded`, the norm runs over the remaining
/// variables only (used for polynomials living on a coordinate face).
template <class Coef>
Polynomial<Coef> multiply_norm_power(const Polynomial<Coef>& p, int d, std::optional<int> excluded = std::nullopt) {
  if (d < 0) throw std::invalid_argument("multiply_norm_power: negative power");
  if (d == 0) return p;
  return p * norm_squared_power(p.nvars(), d, excluded);
}

/// Substitutes x_i = 0 (i is 0-based).
template <class Coef>
Polynomial<Coef> restrict_to_face(const Polynomial<Coef>& p, int i) {
  if (i < 0 || i >= p.nvars()) throw DimensionError("restrict_to_face: index out of range");
  Polynomial<Coef> out(p.nvars(), p.degree());
  for (const auto& [m, c] : p.terms()) {
    if (m.exponents[i] == 0) out.add_term(m, c);
  }
  return out;
}

struct HomogeneityCheck {
  std::optional<int> degree;
  /// Two monomials of different total degree when the check fails.
  std::optional<std::pair<Monomial, Monomial>> offending;

  explicit operator bool() const { return degree.has_value(); }
};

/// The zero polynomial is reported homogeneous of its nominal degree.
template <class Coef>
HomogeneityCheck check_homogeneous(const Polynomial<Coef>& p) {
  if (p.is_zero()) return {p.degree(), std::nullopt};
  const Monomial& first = p.terms().begin()->first;
  const int d = first.degree();
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() != d) return {std::nullopt, std::make_pair(first, m)};
  }
  return {d, std::nullopt};
}

/// Coefficient-wise instantiation of a template at LP values z.
inline Poly instantiate(const Polynomial<LinearForm>& t, const Vector& z) {
  Poly out(t.nvars(), t.degree());
  const std::span<const double> zs(z.data(), static_cast<std::size_t>(z.size()));
  for (const auto& [m, c] : t.terms()) out.add_term(m, c.evaluate(zs));
  return out;
}

inline Poly instantiate(const Polynomial<LinearForm>& t, const std::vector<double>& z) {
  return instantiate(t, Eigen::Map<const Vector>(z.data(), static_cast<Eigen::Index>(z.size())));
}

/// Human-readable form, e.g. "1*x1^2 + -1*x1*x2"; used in diagnostics.
inline std::ostream& operator<<(std::ostream& os, const Poly& p) {
  if (p.is_zero()) return os << "0";
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    os << (first ? "" : " + ") << c;
    for (int j = 0; j < p.nvars(); ++j) {
      if (m[j] == 0) continue;
      os << "*x" << (j + 1);
      if (m[j] > 1) os << '^' << m[j];
    }
    first = false;
  }
  return os;
}

inline double max_abs_coefficient(const Poly& p) {
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) s = std::max(s, std::abs(c));
  return s;
}

inline bool approx_equal(const Poly& a, const Poly& b, double rel_tol = 1e-9) {
  if (a.nvars() != b.nvars()) return false;
  const double scale = 1.0 + std::max(max_abs_coefficient(a), max_abs_coefficient(b));
  const Poly diff = a - b;
  return max_abs_coefficient(diff) <= rel_tol * scale;
}

// ---------------------------------------------------------------------------
// Symmetric tensors

/// Order-d symmetric multilinear form on R^n stored by sorted index tuple
/// (0-based). Lookup of any permutation returns the canonical entry.
class SymmetricTensor {
 public:
  SymmetricTensor(int order, int dim) : order_(order), dim_(dim) {}

  int order() const { return order_; }
  int dim() const { return dim_; }
  const std::map<std::vector<int>, double>& entries() const { return entries_; }

  double entry(std::vector<int> index) const {
    if (static_cast<int>(index.size()) != order_) throw DimensionError("tensor entry: wrong arity");
    std::sort(index.begin(), index.end());
    auto it = entries_.find(index);
    return it == entries_.end() ? 0.0 : it->second;
  }

  void set(std::vector<int> index, double value) {
    if (static_cast<int>(index.size()) != order_) throw DimensionError("tensor entry: wrong arity");
    for (int i : index) {
      if (i < 0 || i >= dim_) throw DimensionError("tensor entry: index out of range");
    }
    std::sort(index.begin(), index.end());
    if (value == 0.0) {
      entries_.erase(index);
    } else {
      entries_[std::move(index)] = value;
    }
  }

 private:
  int order_;
  int dim_;
  std::map<std::vector<int>, double> entries_;
};

/// Splits each coefficient a_alpha evenly over the d!/alpha! orderings of
/// its index multiset, so that G[x, ..., x] = p(x).
inline SymmetricTensor to_symmetric_tensor(const Poly& p) {
  const auto hom = check_homogeneous(p);
  if (!hom) throw std::invalid_argument("to_symmetric_tensor: polynomial is not homogeneous");
  const int d = *hom.degree;
  if (d < 1) throw std::invalid_argument("to_symmetric_tensor: degree must be at least 1");
  SymmetricTensor g(d, p.nvars());
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> idx;
    for (int j = 0; j < p.nvars(); ++j) idx.insert(idx.end(), m.exponents[j], j);
    g.set(std::move(idx), c / multinomial(m.exponents));
  }
  return g;
}

/// G[a_1, ..., a_d] = sum over all index tuples of entry * prod_k a_k[i_k].
inline double tensor_apply(const SymmetricTensor& g, const std::vector<Vector>& args) {
  const int d = g.order();
  if (static_cast<int>(args.size()) != d) throw DimensionError("tensor_apply: wrong number of arguments");
  for (const Vector& a : args) {
    if (a.size() != g.dim()) throw DimensionError("tensor_apply: argument dimension mismatch");
  }
  double total = 0.0;
  std::vector<int> remaining(g.dim());
  // Sum over the distinct orderings of the multiset, slot by slot.
  auto rec = [&](auto&& self, int slot, double prod) -> double {
    if (slot == d) return prod;
    double s = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      if (remaining[i] == 0) continue;
      const double v = args[slot][i];
      if (v == 0.0) continue;
      --remaining[i];
      s += self(self, slot + 1, prod * v);
      ++remaining[i];
    }
    return s;
  };
  for (const auto& [idx, value] : g.entries()) {
    std::fill(remaining.begin(), remaining.end(), 0);
    for (int i : idx) ++remaining[i];
    total += value * rec(rec, 0, 1.0);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Polar values on a simplex

/// Values of the polar (symmetric multilinear) form of p at every multiset
/// of `degree` vertices drawn from `vertices`.
///
/// Writing x = sum_k lambda_k v_k, p(x) = sum_beta (d!/beta!) G[v^beta] lambda^beta,
/// so the tuple values are the lambda-coefficients of the composed polynomial
/// scaled by beta!/d!. Keyed by the multiplicity vector beta (as a Monomial
/// in the vertex weights); multisets with value zero are absent.
template <class Coef>
std::map<Monomial, Coef, GrlexGreater> polar_values(const Polynomial<Coef>& p, const std::vector<Vector>& vertices,
                                                     int degree) {
  const int n = p.nvars();
  const int nv = static_cast<int>(vertices.size());
  if (nv < 1) throw DimensionError("polar_values: no vertices");
  for (const Vector& v : vertices) {
    if (v.size() != n) throw DimensionError("polar_values: vertex dimension mismatch");
  }
  const auto hom = check_homogeneous(p);
  if (!hom || (!p.is_zero() && *hom.degree != degree)) {
    throw std::invalid_argument("polar_values: polynomial is not homogeneous of the requested degree");
  }
  std::map<Monomial, Coef, GrlexGreater> out;
  if (p.is_zero()) return out;

  // powers[j][e] = (sum_k v_k[j] lambda_k)^e
  std::vector<std::vector<Poly>> powers(n);
  for (int j = 0; j < n; ++j) {
    Poly lin(nv, 1);
    for (int k = 0; k < nv; ++k) {
      Monomial m = Monomial::one(nv);
      m.exponents[k] = 1;
      lin.add_term(std::move(m), vertices[k][j]);
    }
    powers[j].push_back(Poly::constant(nv, 1.0));
    for (int e = 1; e <= degree; ++e) powers[j].push_back(powers[j].back() * lin);
  }

  Polynomial<Coef> composed(nv, degree);
  for (const auto& [m, c] : p.terms()) {
    Poly prod = Poly::constant(nv, 1.0);
    for (int j = 0; j < n; ++j) {
      if (m.exponents[j] > 0) prod = prod * powers[j][m.exponents[j]];
    }
    for (const auto& [lm, lc] : prod.terms()) composed.add_term(lm, c * lc);
  }
  for (const auto& [beta, c] : composed.terms()) {
    out.emplace(beta, c * (1.0 / multinomial(beta.exponents)));
  }
  return out;
}

}  // namespace copolyap
