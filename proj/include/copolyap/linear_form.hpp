#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace copolyap {

/// Affine form c0 + sum_k c_k z_k over LP decision variables z.
///
/// Used as the coefficient ring of synthesis templates: every coefficient of
/// a template polynomial is a LinearForm in the unknown coefficients of h.
/// A default-constructed form is zero and has no variables; arithmetic
/// widens the shorter operand.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(double constant) : constant_(constant) {}

  static LinearForm variable(std::size_t num_vars, std::size_t index) {
    if (index >= num_vars) throw std::out_of_range("LinearForm::variable");
    LinearForm f;
    f.coeffs_.assign(num_vars, 0.0);
    f.coeffs_[index] = 1.0;
    return f;
  }

  std::size_t size() const { return coeffs_.size(); }
  double constant() const { return constant_; }
  double coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    return constant_ == 0.0 &&
           std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
  }

  double evaluate(std::span<const double> z) const {
    if (z.size() < coeffs_.size()) throw std::invalid_argument("LinearForm::evaluate: too few values");
    double v = constant_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) v += coeffs_[k] * z[k];
    return v;
  }

  LinearForm& operator+=(const LinearForm& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    constant_ += o.constant_;
    return *this;
  }
  LinearForm& operator-=(const LinearForm& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    constant_ -= o.constant_;
    return *this;
  }
  LinearForm& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    constant_ *= s;
    return *this;
  }

  /// this += s * o, without a temporary.
  void add_scaled(const LinearForm& o, double s) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += s * o.coeffs_[k];
    constant_ += s * o.constant_;
  }

  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator-(LinearForm a) { return a *= -1.0; }
  friend LinearForm operator*(LinearForm a, double s) { return a *= s; }
  friend LinearForm operator*(double s, LinearForm a) { return a *= s; }

 private:
  std::vector<double> coeffs_;
  double constant_ = 0.0;
};

inline bool is_zero_coefficient(double c) { return c == 0.0; }
inline bool is_zero_coefficient(const LinearForm& f) { return f.is_zero(); }

}  // namespace copolyap
