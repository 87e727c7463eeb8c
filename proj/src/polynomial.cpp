#include "chm/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace chm {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
  for (const cplx& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::NonFinite, "Polynomial: coefficient is not finite");
}

Polynomial Polynomial::from_real(const std::vector<double>& coeffs) {
  return Polynomial(std::vector<cplx>(coeffs.begin(), coeffs.end()));
}

Polynomial Polynomial::from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{cplx{1.0}};
  for (const cplx& r : roots) {
    std::vector<cplx> next(c.size() + 1, cplx{});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx Polynomial::operator()(cplx x) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return {};
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cplx{});
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return Polynomial(std::move(c));
}

bool is_palindromic(const Polynomial& p, double tol) {
  const int n = p.degree();
  const double scale = p.max_abs_coeff();
  for (int j = 0; j <= n; ++j)
    if (std::abs(p[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(n - j)]) > tol * scale) return false;
  return true;
}

Polynomial palindromic_reduce(const Polynomial& p) {
  const int n = p.degree();
  if (n < 0) return {};
  if (n % 2 != 0) throw Error(ErrorKind::OddDegree, "palindromic_reduce: degree " + std::to_string(n) + " is odd");
  if (!is_palindromic(p, 1e-10)) throw Error(ErrorKind::NotPalindromic, "palindromic_reduce: coefficients are not symmetric");
  const auto k = static_cast<std::size_t>(n / 2);

  // p(x) / x^k = c_k + sum_m c_{k+m} (x^m + x^-m), and x^m + x^-m = T_m(y)
  // with T_0 = 2, T_1 = y, T_{m+1} = y T_m - T_{m-1}.
  const Polynomial y{cplx{0.0}, cplx{1.0}};
  Polynomial t_prev{cplx{2.0}};
  Polynomial t_cur = y;
  Polynomial q{p[k]};
  for (std::size_t m = 1; m <= k; ++m) {
    const cplx c = 0.5 * (p[k + m] + p[k - m]);
    q = q + Polynomial{c} * t_cur;
    Polynomial t_next = y * t_cur + Polynomial{cplx{-1.0}} * t_prev;
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return q;
}

Polynomial palindromic_expand(const Polynomial& q) {
  const int k = q.degree();
  if (k < 0) return {};
  std::vector<cplx> c(static_cast<std::size_t>(2 * k + 1), cplx{});
  // x^k (x + 1/x)^j = sum_i C(j, i) x^(k + j - 2i)
  for (int j = 0; j <= k; ++j) {
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
      c[static_cast<std::size_t>(k + j - 2 * i)] += binom * q[static_cast<std::size_t>(j)];
      binom = binom * (j - i) / (i + 1);
    }
  }
  return Polynomial(std::move(c));
}

double coefficient_distance(const Polynomial& a, const Polynomial& b) {
  const std::size_t len = std::max(a.coeffs().size(), b.coeffs().size());
  double worst = 0.0;
  for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

RootSet roots(const Polynomial& p, double tol) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "roots: degree must be at least 1");
  if (n > kMaxPolynomialDegree) throw Error(ErrorKind::InvalidArgument, "roots: degree exceeds 64");

  const cplx lead = p[static_cast<std::size_t>(n)];
  ComplexMatrix companion = ComplexMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
  const Eigen::VectorXcd eig = solver.eigenvalues();

  const Polynomial dp = p.derivative();
  const double scale = p.max_abs_coeff();
  RootSet out;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    cplx r = eig(i);
    double best = std::abs(p(r));
    for (int step = 0; step < 8 && best > 0.0; ++step) {
      const cplx d = dp(r);
      if (d == cplx{}) break;
      const cplx cand = r - p(r) / d;
      const double val = std::abs(p(cand));
      if (!(val < best)) break;
      r = cand;
      best = val;
    }
    out.roots.push_back(r);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (const cplx& r : out.roots) {
    const double res = std::abs(p(r)) / (std::pow(1.0 + std::abs(r), n) * scale);
    out.residuals.push_back(res);
    out.within_tol = out.within_tol && res <= tol;
  }
  return out;
}

}  // namespace chm
