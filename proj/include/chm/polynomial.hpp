#pragma once

// Dense complex polynomials, palindromic degree halving and root finding
// for the closed-form constructions.

#include <initializer_list>
#include <vector>

#include "chm/numkernel.hpp"

namespace chm {

/// Coefficients in ascending degree; trailing exact zeros are trimmed, so
/// the zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs) : Polynomial(std::vector<cplx>(coeffs)) {}
  static Polynomial from_real(const std::vector<double>& coeffs);
  /// Monic polynomial prod (x - r).
  static Polynomial from_roots(const std::vector<cplx>& roots);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  cplx operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : cplx{}; }
  double max_abs_coeff() const noexcept;

  cplx operator()(cplx x) const;
  Polynomial derivative() const;

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<cplx> coeffs_;
};

inline constexpr int kMaxPolynomialDegree = 64;

/// c_j == c_{n-j} for all j, within tol * max|c|.
bool is_palindromic(const Polynomial& p, double tol = 1e-10);

/// For palindromic p of degree 2k, the degree-k q with p(x) = x^k q(x + 1/x).
/// Throws NotPalindromic / OddDegree.
Polynomial palindromic_reduce(const Polynomial& p);

/// Inverse of palindromic_reduce: x^k q(x + 1/x) for q of degree k.
Polynomial palindromic_expand(const Polynomial& q);

/// Largest coefficientwise distance, treating missing coefficients as zero.
double coefficient_distance(const Polynomial& a, const Polynomial& b);

struct RootSet {
  std::vector<cplx> roots;       // degree-many, sorted by (real, imag)
  std::vector<double> residuals;  // |p(r)| / ((1 + |r|)^deg * max|c|)
  bool within_tol = true;
};

/// Companion-matrix eigenvalues polished by Newton steps. Ill-conditioned
/// roots are still returned; within_tol reports whether every normalised
/// residual is at most tol.
RootSet roots(const Polynomial& p, double tol = 1e-10);

}  // namespace chm
