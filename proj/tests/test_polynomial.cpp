#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "chm/named.hpp"
#include "chm/polynomial.hpp"

using namespace chm;

namespace {

Polynomial random_poly(int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> c(degree + 1);
  for (auto& v : c) v = cplx(g(rng), g(rng));
  if (std::abs(c.back()) < 1e-3) c.back() = 1.0;
  return Polynomial(c);
}

Polynomial random_palindromic(int half, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> c(2 * half + 1);
  for (int j = 0; j <= half; ++j) c[j] = c[2 * half - j] = cplx(g(rng), g(rng));
  if (std::abs(c[0]) < 1e-3) c[0] = c[2 * half] = 1.0;
  return Polynomial(c);
}

// The two degree-12 polynomials whose roots carry the order-9 constants.
Polynomial degree12_first() { return Polynomial::from_real({1, -3, 9, -16, -12, 6, 3, 6, -12, -16, 9, -3, 1}); }
Polynomial degree12_second() { return Polynomial::from_real({1, 6, 15, 26, 3, -24, -27, -24, 3, 26, 15, 6, 1}); }

}  // namespace

TEST_CASE("polynomial basics") {
  Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(Polynomial().degree() == -1);
  CHECK(p(cplx(2.0, 0.0)) == cplx(5.0, 0.0));
  CHECK((p * p).degree() == 2);
  CHECK(p.derivative()[0] == cplx(2.0, 0.0));
  CHECK_THROWS_AS(Polynomial({cplx(NAN, 0)}), Error);
}

TEST_CASE("palindromic detection") {
  CHECK(is_palindromic(Polynomial::from_real({1, 2, 3, 2, 1})));
  CHECK_FALSE(is_palindromic(Polynomial::from_real({1, 2, 3})));
  CHECK(is_palindromic(degree12_first()));
  CHECK(is_palindromic(degree12_second()));
}

TEST_CASE("palindromic reduce and expand examples") {
  CHECK(coefficient_distance(palindromic_reduce(Polynomial::from_real({1, 2, 3, 2, 1})), Polynomial::from_real({1, 2, 1})) < 1e-15);
  CHECK(coefficient_distance(palindromic_reduce(Polynomial::from_real({1, 0, 1})), Polynomial::from_real({0, 1})) < 1e-15);
  CHECK(coefficient_distance(palindromic_expand(Polynomial::from_real({1, 2, 1})), Polynomial::from_real({1, 2, 3, 2, 1})) < 1e-15);
  CHECK(coefficient_distance(palindromic_expand(Polynomial::from_real({0, 1})), Polynomial::from_real({1, 0, 1})) < 1e-15);

  try {
    palindromic_reduce(Polynomial::from_real({1, 2, 2, 1}));
    FAIL("expected OddDegree");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OddDegree);
  }
  try {
    palindromic_reduce(Polynomial::from_real({1, 2, 3}));
    FAIL("expected NotPalindromic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPalindromic);
  }
}

TEST_CASE("palindromic round trips") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const Polynomial q = random_poly(1 + t % 8, rng);
    const Polynomial p = palindromic_expand(q);
    CHECK(is_palindromic(p));
    CHECK(coefficient_distance(palindromic_reduce(p), q) <= 1e-10);

    const Polynomial pal = random_palindromic(1 + t % 8, rng);
    CHECK(coefficient_distance(palindromic_expand(palindromic_reduce(pal)), pal) <= 1e-10);
  }
}

TEST_CASE("degree-12 reductions map roots back through x^2 - y x + 1") {
  for (const Polynomial& p : {degree12_first(), degree12_second()}) {
    const Polynomial q = palindromic_reduce(p);
    CHECK(q.degree() == 6);
    CHECK(coefficient_distance(palindromic_expand(q), p) <= 1e-10);
    for (const cplx& y : roots(q).roots) {
      const cplx disc = std::sqrt(y * y - 4.0);
      for (const cplx& x : {(y + disc) / 2.0, (y - disc) / 2.0})
        CHECK(std::abs(p(x)) <= 1e-8 * std::pow(1.0 + std::abs(x), 12) * p.max_abs_coeff());
    }
  }
  const Quadruplet k = y9c_quadruplet();
  for (const cplx& v : {k.a, k.d}) CHECK(std::abs(degree12_first()(v)) < 1e-10);
  for (const cplx& v : {k.b, k.c}) CHECK(std::abs(degree12_second()(v)) < 1e-10);
}

TEST_CASE("root finding") {
  RootSet r = roots(Polynomial::from_real({-1, 0, 1}));
  REQUIRE(r.roots.size() == 2);
  CHECK(std::abs(r.roots[0] - cplx(-1, 0)) < 1e-14);
  CHECK(std::abs(r.roots[1] - cplx(1, 0)) < 1e-14);
  CHECK(r.within_tol);
  CHECK_THROWS_AS(roots(Polynomial::from_real({3})), Error);

  std::mt19937_64 rng(77);
  for (int degree = 1; degree <= 16; ++degree) {
    const Polynomial p = random_poly(degree, rng);
    RootSet rs = roots(p);
    REQUIRE(rs.roots.size() == std::size_t(degree));
    CHECK(rs.within_tol);
    for (std::size_t i = 1; i < rs.roots.size(); ++i)
      CHECK((rs.roots[i - 1].real() < rs.roots[i].real() ||
             (rs.roots[i - 1].real() == rs.roots[i].real() && rs.roots[i - 1].imag() <= rs.roots[i].imag())));
    Polynomial back = Polynomial::from_roots(rs.roots);
    const cplx lead = p.coeffs().back();
    std::vector<cplx> scaled(back.coeffs());
    for (auto& c : scaled) c *= lead;
    CHECK(coefficient_distance(Polynomial(scaled), p) <= 1e-8 * p.max_abs_coeff());

    RootSet again = roots(p);
    CHECK(again.roots == rs.roots);
  }
}

TEST_CASE("palindromic roots pair up with their reciprocals") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Polynomial p = random_palindromic(2 + t % 5, rng);
    const RootSet rs = roots(p);
    for (const cplx& x : rs.roots) {
      double best = 1e300;
      for (const cplx& y : rs.roots) best = std::min(best, std::abs(y - 1.0 / x));
      CHECK(best <= 1e-8);
    }
  }
}

TEST_CASE("octic roots are the roots of the two quartic factors") {
  const Polynomial octic = v8_octic();
  CHECK(coefficient_distance(octic, Polynomial::from_real({-16, 256, -96, -896, -696, -96, 56, 16, 1})) == 0.0);
  const auto factors = v8_quartic_factors();
  CHECK(coefficient_distance(factors[0] * factors[1], octic) <= 1e-9 * octic.max_abs_coeff());

  std::vector<cplx> from_factors;
  for (const auto& f : factors)
    for (const cplx& r : roots(f).roots) from_factors.push_back(r);
  const RootSet rs = roots(octic);
  REQUIRE(rs.roots.size() == 8);
  for (const cplx& r : rs.roots) {
    double best = 1e300;
    for (const cplx& s : from_factors) best = std::min(best, std::abs(r - s));
    CHECK(best <= 1e-9);
  }
}
