#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <set>

#include "chm/families.hpp"
#include "chm/invariants.hpp"
#include "chm/named.hpp"

using namespace chm;

namespace {

// Defect of F_n from the gcd formula: sum_i gcd(i, n) - (2n - 1).
int fourier_defect_formula(int n) {
  int total = 0;
  for (int i = 0; i < n; ++i) total += std::gcd(i, n);
  return total - (2 * n - 1);
}

// Independent rank oracle: the tangent system for F_n assembled here in long
// double from integer exponents, reduced by full-pivot Gaussian elimination.
int fourier_defect_elimination(int n) {
  const long double two_pi = 6.283185307179586476925286766559L;
  const int rows = n * (n - 1), cols = n * n;
  std::vector<std::vector<long double>> a(rows, std::vector<long double>(cols, 0.0L));
  int r = 0;
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l, r += 2)
      for (int k = 0; k < n; ++k) {
        const int e = (((j - l) * k) % n + n) % n;
        const long double c = std::cos(two_pi * e / n), s = std::sin(two_pi * e / n);
        // Re and Im of omega^e (R_jk - R_lk).
        a[r][j * n + k] += c;
        a[r][l * n + k] -= c;
        a[r + 1][j * n + k] += s;
        a[r + 1][l * n + k] -= s;
      }
  int rank = 0;
  std::vector<bool> used_col(cols, false);
  for (int step = 0; step < std::min(rows, cols); ++step) {
    long double best = 0.0L;
    int pr = -1, pc = -1;
    for (int i = rank; i < rows; ++i)
      for (int c = 0; c < cols; ++c)
        if (!used_col[c] && std::fabs(a[i][c]) > best) best = std::fabs(a[i][c]), pr = i, pc = c;
    if (best < 1e-12L) break;
    std::swap(a[rank], a[pr]);
    used_col[pc] = true;
    for (int i = rank + 1; i < rows; ++i) {
      const long double f = a[i][pc] / a[rank][pc];
      if (f == 0.0L) continue;
      for (int c = 0; c < cols; ++c) a[i][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return cols - (2 * n - 1) - rank;
}

// Exact Haagerup set of F_n: (j - l)(k - m) mod n over integers.
std::set<int> fourier_haagerup_exact(int n) {
  std::set<int> out;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) out.insert((((j - l) * (k - m)) % n + n) % n);
  return out;
}

PhaseMatrix y9c() { return construct_named({NamedFamily::Y9C, 0, {}}); }
PhaseMatrix l11() { return construct_named({NamedFamily::LN, 11, {}}); }

}  // namespace

TEST_CASE("defect examples") {
  CHECK(defect(fourier(7)) == 0);
  CHECK(defect(y9c()) == 0);
  CHECK(defect(fourier(8)) == 5);
  CHECK(defect(fourier(9)) == 4);
  try {
    defect(PhaseMatrix(3));
    FAIL("expected NotHadamard");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHadamard);
  }
}

TEST_CASE("Fourier defects agree with the gcd formula and an elimination oracle") {
  for (int n = 2; n <= 12; ++n) {
    INFO("n = " << n);
    const int formula = fourier_defect_formula(n);
    CHECK(fourier_defect_elimination(n) == formula);
    CHECK(static_cast<int>(defect(fourier(n))) == formula);
  }
  for (int p : {2, 3, 5, 7, 11, 13}) CHECK(defect(fourier(p)) == 0);
}

TEST_CASE("defect system shape") {
  RealMatrix s = defect_system(fourier(5));
  CHECK(s.rows() == 20);
  CHECK(s.cols() == 25);
}

TEST_CASE("Haagerup set of small Fourier matrices matches exact arithmetic") {
  for (int n = 2; n <= 7; ++n) {
    INFO("n = " << n);
    const std::set<int> exact = fourier_haagerup_exact(n);
    HaagerupSet h = haagerup_set(fourier(n));
    REQUIRE(h.size() == exact.size());
    std::size_t i = 0;
    for (int e : exact) CHECK(circular_distance(h.phases[i++], double(e) / n) <= 1e-12);
  }
  HaagerupSet f2 = haagerup_set(fourier(2));
  REQUIRE(f2.size() == 2);
  CHECK(std::abs(f2.values()[0] - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(f2.values()[1] - cplx(-1, 0)) < 1e-15);
  CHECK(haagerup_cardinality(fourier(11)) == 11);
  CHECK(haagerup_cardinality(y9c()) == 105);
}

TEST_CASE("Haagerup sets contain 1, are conjugation-closed and respect transpose and conjugate") {
  for (const PhaseMatrix& m : {fourier(6), y9c(), l11(), construct_named({NamedFamily::T8B, 0, {0.1, 0.2, 0.3}})}) {
    HaagerupSet h = haagerup_set(m);
    CHECK(h.contains_one(1e-10));
    CHECK(h.closed_under_conjugation(1e-10));
    for (const cplx& v : h.values()) CHECK(std::abs(std::abs(v) - 1.0) <= 1e-10);
    CHECK(haagerup_set(m.transpose()).size() == h.size());

    HaagerupSet c = haagerup_set(m.conjugate());
    REQUIRE(c.size() == h.size());
    for (double p : h.phases) {
      bool found = false;
      for (double q : c.phases) found = found || circular_distance(q, -p) <= 1e-10;
      CHECK(found);
    }
  }
}

TEST_CASE("Haagerup cardinality of the order-11 block-circulant matrix") {
  HaagerupCount c = haagerup_count(l11());
  CHECK(c.count == 191);
  CHECK(c.stable);
  CHECK(haagerup_cardinality(l11()) == 191);
}

TEST_CASE("invariants survive random equivalences") {
  std::mt19937_64 rng(99);
  for (const PhaseMatrix& m : {fourier(8), y9c(), construct_named({NamedFamily::T8B, 0, {0.4, 0.15, 0.7}})}) {
    const std::size_t d = defect(m), card = haagerup_cardinality(m);
    for (int t = 0; t < 100; ++t) {
      PhaseMatrix e = apply_equivalence(m, EquivalencePair::random(m.order(), rng));
      REQUIRE(defect(e) == d);
      REQUIRE(haagerup_cardinality(e) == card);
    }
  }
}

TEST_CASE("symmetric bound") {
  CHECK(symmetric_haagerup_bound(11) == 3081);
  CHECK(symmetric_haagerup_bound(2) == 3);
  CHECK(symmetric_haagerup_bound(3) == 13);
  CHECK_THROWS_AS(symmetric_haagerup_bound(1), Error);
  for (int n = 2; n <= 13; ++n) {
    const PhaseMatrix f = fourier(n);
    REQUIRE(is_symmetric_dephased(f));
    CHECK(haagerup_cardinality(f) <= symmetric_haagerup_bound(n));
  }
}

TEST_CASE("inequivalence certificates") {
  Certificate c = certify_inequivalent(y9c(), fourier(9));
  CHECK(c.verdict == CertificateVerdict::Inequivalent);
  CHECK(c.reason == CertificateReason::Defect);

  std::mt19937_64 rng(5);
  const PhaseMatrix f7 = fourier(7);
  c = certify_inequivalent(f7, apply_equivalence(f7, EquivalencePair::random(7, rng)));
  CHECK(c.verdict == CertificateVerdict::Unknown);

  c = certify_inequivalent(l11(), fourier(11));
  CHECK(c.verdict == CertificateVerdict::Inequivalent);
  CHECK(c.reason == CertificateReason::Haagerup);

  CHECK_THROWS_AS(certify_inequivalent(PhaseMatrix(3), fourier(3)), Error);
}

TEST_CASE("profile of the order-7 Fourier matrix") {
  InvariantProfile p = profile(fourier(7));
  CHECK(p.defect == 0);
  CHECK(p.haagerup_card == 7);
  CHECK(p.haagerup_stable);
  CHECK(p.butson_order == 7);
  CHECK(p.symmetric);
  CHECK(p.unitarity_residual <= 1e-12);
  CHECK_THROWS_AS(profile(PhaseMatrix(4)), Error);
}
