#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qradon/errors.hpp"

namespace qradon {

// Coefficients are arbitrary-precision: the join rule multiplies degree-2
// factors per step and consumers may evaluate at large arguments, so
// fixed-width integers would be a silent-corruption hazard.
using BigInt = boost::multiprecision::cpp_int;

// Univariate polynomial in the variable b with exact integer coefficients,
// stored ascending by degree with no trailing zero (the zero polynomial is
// the empty sequence). Values are immutable after construction.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(long long c) {
    if (c != 0) coeffs_.emplace_back(c);
  }
  explicit Polynomial(BigInt c) {
    if (c != 0) coeffs_.push_back(std::move(c));
  }

  static Polynomial variable() { return from_coeffs({BigInt(0), BigInt(1)}); }

  static Polynomial from_coeffs(std::vector<BigInt> ascending) {
    Polynomial p;
    p.coeffs_ = std::move(ascending);
    while (!p.coeffs_.empty() && p.coeffs_.back() == 0) p.coeffs_.pop_back();
    return p;
  }

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }

  BigInt coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<BigInt> c(std::max(p.coeffs_.size(), q.coeffs_.size()), BigInt(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) c[i] += p.coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) c[i] += q.coeffs_[i];
    return from_coeffs(std::move(c));
  }

  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
    std::vector<BigInt> c(std::max(p.coeffs_.size(), q.coeffs_.size()), BigInt(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) c[i] += p.coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) c[i] -= q.coeffs_[i];
    return from_coeffs(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return Polynomial();
    std::vector<BigInt> c(p.coeffs_.size() + q.coeffs_.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return from_coeffs(std::move(c));
  }

  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

  // Exact Horner evaluation at a nonnegative integer.
  BigInt eval(const BigInt& b) const {
    if (b < 0) throw InputError("polynomial evaluation requires a nonnegative argument");
    BigInt acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * b + *it;
    return acc;
  }

  // Canonical text: descending powers, explicit signs, `b` as the variable,
  // e.g. "2b^6 - 5b^5 + 10b^4 - 10b^3 + 9b^2 - 3b + 3".
  std::string text() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      const bool neg = c < 0;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      BigInt mag = neg ? BigInt(-c) : c;
      if (mag != 1 || i == 0) out += mag.str();
      if (i == 1)
        out += "b";
      else if (i > 1)
        out += "b^" + std::to_string(i);
    }
    return out;
  }

 private:
  std::vector<BigInt> coeffs_;
};

// Order by degree, then by coefficients from the highest power down.
inline int compare_asymptotic(const Polynomial& p, const Polynomial& q) {
  if (p.degree() != q.degree()) return p.degree() < q.degree() ? -1 : 1;
  for (int i = p.degree(); i >= 0; --i) {
    const BigInt a = p.coeff(static_cast<std::size_t>(i));
    const BigInt b = q.coeff(static_cast<std::size_t>(i));
    if (a != b) return a < b ? -1 : 1;
  }
  return 0;
}

}  // namespace qradon
