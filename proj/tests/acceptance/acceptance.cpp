// Acceptance run: one PASS/FAIL line per criterion on stdout, progress and
// measurements on stderr. Exit status is nonzero when any criterion fails.
//
// Usage: acceptance [--only 2,5,9]

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chm/families.hpp"
#include "chm/invariants.hpp"
#include "chm/named.hpp"
#include "chm/parallel.hpp"
#include "chm/polynomial.hpp"
#include "chm/sinkhorn.hpp"

using namespace chm;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  std::vfprintf(stderr, fmt, ap);
  va_end(ap);
  std::fputc('\n', stderr);
  std::fflush(stderr);
}

// Every matrix profiled during the run, for the symmetric-bound check.
struct Profiled {
  std::string label;
  Eigen::Index order;
  InvariantProfile profile;
};
std::vector<Profiled> g_profiled;

InvariantProfile profiled(const std::string& label, const PhaseMatrix& m) {
  InvariantProfile p = profile(m);
  g_profiled.push_back({label, m.order(), p});
  return p;
}

void record_set(const std::string& label, const SolutionSet& s) {
  for (const auto& x : s.solutions) g_profiled.push_back({label, x.matrix.order(), x.profile});
  for (const auto& x : s.butson) g_profiled.push_back({label + " butson", x.matrix.order(), x.profile});
}

std::string describe(const InvariantProfile& p) {
  std::ostringstream os;
  os << "(" << p.defect << "," << p.haagerup_card << (p.haagerup_stable ? "" : "u");
  if (p.butson_order) os << ",q" << *p.butson_order;
  os << ")";
  return os.str();
}

std::string profiles_of(const SolutionSet& s) {
  std::ostringstream os;
  for (const auto& x : s.solutions) os << describe(x.profile) << " ";
  os << "| butson:";
  for (const auto& x : s.butson) os << " " << describe(x.profile);
  return os.str();
}

MultistartConfig starts(std::size_t n) {
  MultistartConfig cfg;
  cfg.starts = n;
  return cfg;
}

PhaseMatrix named(NamedFamily f, std::vector<double> params = {}, Eigen::Index order = 0) {
  return construct_named({f, order, std::move(params)});
}

// ---------------------------------------------------------------------------

Verdict sinkhorn_convergence() {
  const double budget_seconds = 600.0;
  const int seeds = 100;
  const auto t0 = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  std::map<int, int> converged, attempted;
  bool out_of_time = false;
  // Seeds are interleaved across orders so every order gets a share of the
  // budget even if it runs out.
  for (int i = 0; i < seeds && !out_of_time; ++i) {
    for (int n = 6; n <= 16; ++n) {
      if (elapsed() > budget_seconds) {
        out_of_time = true;
        break;
      }
      SinkhornConfig cfg;
      cfg.z_tol = 1e-12 * n;
      cfg.max_iterations = 100000;
      const SinkhornOutcome out = run(random_seed(n, mix_seed(0x5eed, std::uint64_t(n) * 1000 + i)), cfg);
      ++attempted[n];
      if (out.converged && out.final_z / n <= 1e-12) ++converged[n];
    }
    if (i % 10 == 9) note("  sinkhorn: %d seeds per order done, %.0f s", i + 1, elapsed());
  }

  Verdict v;
  std::ostringstream os;
  for (int n = 6; n <= 16; ++n) {
    os << "N=" << n << ":" << converged[n] << "/" << attempted[n] << " ";
    v.require(converged[n] >= 90, "N=" + std::to_string(n) + " converged " + std::to_string(converged[n]) + " of 100");
  }
  const double t = elapsed();
  v.require(!out_of_time && t <= budget_seconds, "time budget exhausted");
  note("  sinkhorn: %s(%.0f s)", os.str().c_str(), t);
  if (v.pass) v.detail = os.str();
  return v;
}

Verdict y9c_reproduction() {
  Verdict v;
  const Quadruplet q = y9c_quadruplet();
  const cplx expect[4] = {{-0.3396, 0.9406}, {-0.9635, 0.2676}, {-0.0365, 0.9993}, {0.8396, 0.5432}};
  const cplx got[4] = {q.a, q.b, q.c, q.d};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(got[i] - expect[i]));
  v.require(worst <= 5e-5, "constants off by " + std::to_string(worst));

  const PhaseMatrix y = named(NamedFamily::Y9C);
  const InvariantProfile p = profiled("Y9C", y);
  v.require(is_hadamard(y, 1e-9).accepted, "not Hadamard");
  v.require(p.defect == 0 && p.haagerup_card == 105, "profile " + describe(p));

  // Direct solve of the five-equation system.
  const NonlinearSystem sys = y9c_constraint_system();
  const std::size_t count = 512;
  std::vector<double> distance(count, 1e300);
  parallel_for(count, 0, [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(0x9c, i));
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    RealVector x(4);
    for (int k = 0; k < 4; ++k) x(k) = u(rng);
    const LeastSquaresResult r = solve_least_squares(sys, x);
    if (!r.converged) return;
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(std::polar(1.0, r.solution(k)) - got[k]));
    distance[i] = d;
  });
  const double best = *std::min_element(distance.begin(), distance.end());
  v.require(best <= 1e-8, "direct solve misses the closed form (best " + std::to_string(best) + ")");
  note("  Y9C: constants within %.2e, profile %s, direct solve within %.2e", worst, describe(p).c_str(), best);
  return v;
}

Verdict fourier_defects() {
  Verdict v;
  for (int p : {2, 3, 5, 7, 11, 13}) {
    const std::size_t d = defect(fourier(p));
    v.require(d == 0, "F" + std::to_string(p) + " defect " + std::to_string(d));
  }
  const std::size_t d8 = defect(fourier(8)), d9 = defect(fourier(9));
  v.require(d8 == 5, "F8 defect " + std::to_string(d8));
  v.require(d9 == 4, "F9 defect " + std::to_string(d9));
  note("  Fourier defects: F8=%zu F9=%zu", d8, d9);
  return v;
}

Verdict haagerup_cardinalities() {
  Verdict v;
  const std::pair<std::string, PhaseMatrix> cases[] = {
      {"F11", fourier(11)},
      {"L11", named(NamedFamily::LN, {}, 11)},
      {"L15", named(NamedFamily::LN, {}, 15)},
      {"Y9C", named(NamedFamily::Y9C)},
      {"Y13", named(NamedFamily::Y13)},
  };
  const std::size_t expect[] = {11, 191, 463, 105, 301};
  std::ostringstream os;
  for (std::size_t i = 0; i < 5; ++i) {
    const HaagerupCount c = haagerup_count(cases[i].second);
    profiled(cases[i].first, cases[i].second);
    os << cases[i].first << "=" << c.count << (c.stable ? "" : "(unstable)") << " ";
    v.require(c.count == expect[i] && c.stable, cases[i].first + " #Lambda " + std::to_string(c.count) +
                                                    (c.stable ? "" : " unstable"));
  }
  note("  #Lambda: %s", os.str().c_str());
  return v;
}

Verdict block_circulant_solver() {
  Verdict v;
  const InvariantProfile f3 = profile(fourier(3)), f7 = profile(fourier(7));

  const SolutionSet k0 = solve_LN(0, starts(256));
  record_set("LN k=0", k0);
  v.require(k0.solutions.empty() && !k0.butson.empty(), "k=0 did not give only Butson solutions");
  for (const auto& s : k0.butson) v.require(s.profile.same_class(f3), "k=0 solution " + describe(s.profile));

  const SolutionSet k1 = solve_LN(1, starts(256));
  record_set("LN k=1", k1);
  v.require(k1.solutions.empty() && !k1.butson.empty(), "k=1 did not give only Butson solutions");
  for (const auto& s : k1.butson) v.require(s.profile.same_class(f7), "k=1 solution " + describe(s.profile));
  note("  LN k=0: %s", profiles_of(k0).c_str());
  note("  LN k=1: %s", profiles_of(k1).c_str());

  for (int k : {2, 3, 4}) {
    const SolutionSet s = solve_LN(k, starts(256));
    record_set("LN k=" + std::to_string(k), s);
    bool ok = false;
    for (const auto& x : s.solutions) ok = ok || (x.profile.defect == 0 && !x.profile.butson_order);
    v.require(ok, "N=" + std::to_string(3 + 4 * k) + " has no defect-0 non-Butson solution");
    note("  LN k=%d (N=%d): converged %zu/%zu, %s", k, 3 + 4 * k, s.converged, s.attempted, profiles_of(s).c_str());
  }

  for (int blocks : {2, 4}) {
    const SolutionSet s = solve_block_circulant(blocks, starts(512));
    v.require(s.attempted >= 512 && s.no_solutions(), "N=" + std::to_string(2 * blocks + 1) + " found solutions");
    note("  block-circulant N=%d: %zu starts, converged %zu, solutions %zu", 2 * blocks + 1, s.attempted, s.converged,
         s.solutions.size() + s.butson.size());
  }
  return v;
}

Verdict circulant_solver() {
  Verdict v;
  const std::map<int, std::vector<std::size_t>> required = {
      {11, {161, 331}}, {12, {58, 78, 189, 230}}, {13, {49, 95, 265, 547}}};
  for (int n = 6; n <= 13; ++n) {
    const SolutionSet s = solve_VN(n, starts(n == 6 ? 2048 : 256));
    record_set("VN N=" + std::to_string(n), s);
    std::multiset<std::size_t> cards;
    bool isolated = false, positive = false;
    for (const auto& x : s.solutions) {
      cards.insert(x.profile.haagerup_card);
      isolated = isolated || (x.profile.defect == 0 && !x.profile.butson_order);
      positive = positive || x.profile.defect > 0;
    }
    v.require(isolated, "N=" + std::to_string(n) + " has no defect-0 non-Butson solution");
    if (n == 8) v.require(positive, "N=8 has no nonzero-defect solution");
    if (auto it = required.find(n); it != required.end())
      for (std::size_t c : it->second)
        v.require(cards.count(c) > 0, "N=" + std::to_string(n) + " misses #Lambda " + std::to_string(c));
    note("  VN N=%d: %zu starts, converged %zu, %s", n, s.attempted, s.converged, profiles_of(s).c_str());
  }
  return v;
}

Verdict named_constructions() {
  Verdict v;
  auto check = [&](const std::string& label, const PhaseMatrix& m, long d = -1, long card = -1) {
    const bool had = is_hadamard(m, 1e-9).accepted;
    v.require(had, label + " not Hadamard at 1e-9");
    if (!had) return;
    const InvariantProfile p = profiled(label, m);
    if (d >= 0 && (p.defect != std::size_t(d) || p.haagerup_card != std::size_t(card) || !p.haagerup_stable))
      v.require(false, label + " profile " + describe(p));
  };

  check("C7D", named(NamedFamily::C7D));
  check("V8", named(NamedFamily::V8), 0, 70);
  check("Y9A", named(NamedFamily::Y9A), 0, 76);
  check("Y9B", named(NamedFamily::Y9B), 0, 89);
  check("Y10A", named(NamedFamily::Y10A), 0, 99);
  check("Y13", named(NamedFamily::Y13));

  std::mt19937_64 rng(0xacce);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> p = {u(rng), u(rng), u(rng)};
    try {
      check("T8B", named(NamedFamily::T8B, p), 3, 74);
    } catch (const Error& e) {
      v.require(false, std::string("T8B: ") + e.what());
    }
  }
  for (int i = 0; i < 10; ++i) check("T8C", named(NamedFamily::T8C, {u(rng), u(rng), u(rng)}), 3, 130);
  for (int i = 0; i < 100; ++i) check("Y10C2", named(NamedFamily::Y10C2, {u(rng), u(rng)}));
  note("  named constructions checked");
  return v;
}

Verdict invariance_suite() {
  Verdict v;
  std::mt19937_64 rng(0x1e9);
  const std::vector<std::pair<std::string, PhaseMatrix>> pool = {
      {"F7", fourier(7)},
      {"F8", fourier(8)},
      {"F9", fourier(9)},
      {"C7D", named(NamedFamily::C7D)},
      {"V8", named(NamedFamily::V8)},
      {"T8B", named(NamedFamily::T8B, {0.11, 0.52, 0.83})},
      {"Y9C", named(NamedFamily::Y9C)},
      {"Y10C2", named(NamedFamily::Y10C2, {0.21, 0.67})},
      {"L11", named(NamedFamily::LN, {}, 11)},
      {"Y13", named(NamedFamily::Y13)},
  };
  for (const auto& [label, m] : pool) {
    const std::size_t d = defect(m);
    const HaagerupCount c = haagerup_count(m);
    for (int t = 0; t < 100; ++t) {
      const PhaseMatrix e = apply_equivalence(m, EquivalencePair::random(m.order(), rng));
      const HaagerupSet h = haagerup_set(e);
      const std::size_t de = defect(e);
      const HaagerupCount ce = haagerup_count(e);
      if (de != d || ce.count != c.count) {
        v.require(false, label + " invariants moved under equivalence " + std::to_string(t));
        break;
      }
      if (!h.contains_one(1e-10) || !h.closed_under_conjugation(1e-10)) {
        v.require(false, label + " Lambda lacks 1 or conjugates");
        break;
      }
    }
    note("  invariance: %s d=%zu #Lambda=%zu ok", label.c_str(), d, c.count);
  }
  return v;
}

Verdict polynomial_suite() {
  Verdict v;
  std::mt19937_64 rng(0x9017);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int half = 1 + t % 8;
    std::vector<cplx> c(2 * half + 1);
    for (int j = 0; j <= half; ++j) c[j] = c[2 * half - j] = cplx(g(rng), g(rng));
    c[0] = c[2 * half] = 1.0;
    const Polynomial p(c);
    worst = std::max(worst, coefficient_distance(palindromic_expand(palindromic_reduce(p)), p));

    std::vector<cplx> qc(half + 1);
    for (auto& x : qc) x = cplx(g(rng), g(rng));
    qc.back() = 1.0;
    const Polynomial q(qc);
    worst = std::max(worst, coefficient_distance(palindromic_reduce(palindromic_expand(q)), q));
  }
  v.require(worst <= 1e-10, "round trip error " + std::to_string(worst));

  const RootSet octic = roots(v8_octic());
  std::vector<cplx> quartic_roots;
  for (const Polynomial& f : v8_quartic_factors())
    for (const cplx& r : roots(f).roots) quartic_roots.push_back(r);
  double root_gap = 0.0;
  for (const cplx& r : octic.roots) {
    double best = 1e300;
    for (const cplx& s : quartic_roots) best = std::min(best, std::abs(r - s));
    root_gap = std::max(root_gap, best);
  }
  v.require(octic.roots.size() == 8 && quartic_roots.size() == 8 && root_gap <= 1e-9,
            "octic vs quartic roots differ by " + std::to_string(root_gap));

  const Polynomial sextic = c7d_sextic();
  const RootSet sr = roots(sextic);
  double x_star = -1e300;
  for (const cplx& r : sr.roots)
    if (std::abs(r.imag()) <= 1e-9) x_star = std::max(x_star, r.real());
  const C7DConstants k = c7d_constants();
  const double residual = std::abs(sextic(x_star)) / (std::pow(1.0 + std::abs(x_star), 6) * sextic.max_abs_coeff());
  v.require(sr.roots.size() == 6 && residual <= 1e-10, "sextic root residual " + std::to_string(residual));
  v.require(std::abs(k.x_star - x_star) <= 1e-12, "C7D does not use the maximal real root");
  v.require(VerifiedChm::verify(named(NamedFamily::C7D), 1e-9).unitarity_residual <= 1e-9, "C7D not verified");
  note("  polynomials: round trip %.2e, octic gap %.2e, x* = %.12f", worst, root_gap, x_star);
  return v;
}

Verdict symmetric_bound() {
  Verdict v;
  v.require(symmetric_haagerup_bound(11) == 3081, "bound(11) = " + std::to_string(symmetric_haagerup_bound(11)));
  for (int n = 2; n <= 16; ++n) profiled("F" + std::to_string(n), fourier(n));
  std::size_t symmetric = 0;
  for (const auto& p : g_profiled) {
    if (!p.profile.symmetric) continue;
    ++symmetric;
    const std::uint64_t bound = symmetric_haagerup_bound(p.order);
    v.require(p.profile.haagerup_card <= bound, p.label + " #Lambda " + std::to_string(p.profile.haagerup_card) +
                                                    " exceeds " + std::to_string(bound));
  }
  note("  symmetric bound: %zu symmetric matrices among %zu profiled", symmetric, g_profiled.size());
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string item; std::getline(ss, item, ',');) only.insert(std::stoi(item));
    }
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  // The symmetric bound inspects everything profiled before it, and the
  // sinkhorn criterion owns a wall-clock budget, so it runs last.
  const std::vector<Criterion> order = {
      {2, "order-9 closed form", y9c_reproduction},
      {3, "Fourier defects", fourier_defects},
      {4, "Haagerup cardinalities", haagerup_cardinalities},
      {5, "block-circulant solver", block_circulant_solver},
      {6, "circulant solver", circulant_solver},
      {7, "named constructions", named_constructions},
      {8, "invariance under equivalence", invariance_suite},
      {9, "polynomial suite", polynomial_suite},
      {10, "symmetric Haagerup bound", symmetric_bound},
      {1, "Sinkhorn convergence", sinkhorn_convergence},
  };

  std::map<int, std::string> lines;
  bool all = true;
  for (const auto& c : order) {
    if (!only.empty() && !only.count(c.id)) continue;
    note("criterion %d: %s", c.id, c.name);
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double t = std::chrono::duration<double>(Clock::now() - t0).count();
    char head[128];
    std::snprintf(head, sizeof head, "%s criterion %d: %s (%.1f s)", v.pass ? "PASS" : "FAIL", c.id, c.name, t);
    lines[c.id] = std::string(head) + (v.detail.empty() ? "" : " [" + v.detail + "]");
    all = all && v.pass;
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  return all ? 0 : 1;
}
