#include "chm/named.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <random>

#include "chm/parallel.hpp"

namespace chm {

namespace {

constexpr double kUnimodularTol = 1e-8;
constexpr double kConstructTol = 1e-9;
constexpr double kAcceptResidual = 1e-10;

const cplx kI{0.0, 1.0};

ComplexMatrix from_rows(Eigen::Index n, std::initializer_list<cplx> entries) {
  ComplexMatrix m(n, n);
  auto it = entries.begin();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) m(j, k) = *it++;
  return m;
}

ComplexMatrix border(const ComplexMatrix& core) {
  const Eigen::Index n = core.rows() + 1;
  ComplexMatrix h = ComplexMatrix::Ones(n, n);
  h.bottomRightCorner(n - 1, n - 1) = core;
  return h;
}

bool unimodular(cplx z, double tol = kUnimodularTol) { return std::abs(std::abs(z) - 1.0) <= tol; }

bool all_unimodular(const ComplexMatrix& h, double tol = kUnimodularTol) {
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (!unimodular(h(i), tol)) return false;
  return true;
}

// Entries must already be unimodular; the result is checked to be Hadamard.
std::optional<PhaseMatrix> admissible(const ComplexMatrix& h) {
  if (!h.allFinite() || !all_unimodular(h)) return std::nullopt;
  PhaseMatrix m = unimodularize(h);
  if (!is_hadamard(m, kConstructTol)) return std::nullopt;
  return m;
}

std::vector<cplx> unit_values(const RealVector& angles) {
  std::vector<cplx> out;
  for (Eigen::Index i = 0; i < angles.size(); ++i) out.push_back(std::polar(1.0, angles(i)));
  return out;
}

RealVector real_parts_of(const std::vector<cplx>& values, bool with_imag) {
  RealVector r(static_cast<Eigen::Index>(values.size() * (with_imag ? 2 : 1)));
  Eigen::Index i = 0;
  for (const cplx& v : values) {
    r(i++) = v.real();
    if (with_imag) r(i++) = v.imag();
  }
  return r;
}

NonlinearSystem make_system(std::size_t arity, std::size_t rows, std::string description,
                            std::function<RealVector(const std::vector<cplx>&)> fn) {
  NonlinearSystem sys;
  sys.arity = arity;
  sys.residual_count = rows;
  sys.description = std::move(description);
  sys.residual = [fn = std::move(fn)](const RealVector& x) { return fn(unit_values(x)); };
  return sys;
}

// Deterministic multistart: start i draws uniform angles from mix_seed(seed, i);
// returns the matrix of the first start (in index order) that `build` accepts.
std::optional<PhaseMatrix> first_admissible(const NonlinearSystem& sys, std::uint64_t seed, std::size_t starts,
                                            const std::function<std::optional<PhaseMatrix>(const RealVector&)>& build) {
  SolverConfig solver;
  solver.max_iterations = 400;
  constexpr std::size_t kBatch = 16;
  for (std::size_t base = 0; base < starts; base += kBatch) {
    const std::size_t count = std::min(kBatch, starts - base);
    std::vector<std::optional<PhaseMatrix>> slots(count);
    parallel_for(count, 0, [&](std::size_t i) {
      std::mt19937_64 rng(mix_seed(seed, base + i));
      std::uniform_real_distribution<double> angle(0.0, kTwoPi);
      RealVector start(static_cast<Eigen::Index>(sys.arity));
      for (Eigen::Index v = 0; v < start.size(); ++v) start(v) = angle(rng);
      const LeastSquaresResult ls = solve_least_squares(sys, start, solver);
      if (ls.residual_norm <= kAcceptResidual) slots[i] = build(ls.solution);
    });
    for (auto& s : slots)
      if (s) return s;
  }
  return std::nullopt;
}

RealVector offdiagonal_parts(const ComplexMatrix& h) {
  const ComplexMatrix g = h * h.adjoint();
  std::vector<cplx> v;
  for (Eigen::Index j = 0; j < g.rows(); ++j)
    for (Eigen::Index l = j + 1; l < g.cols(); ++l) v.push_back(g(j, l));
  return real_parts_of(v, true);
}

[[noreturn]] void solve_failed(std::string_view what) {
  throw Error(ErrorKind::SolveFailed, std::string(what) + ": no admissible solution found");
}

cplx unit(double phase) { return std::polar(1.0, kTwoPi * phase); }

// ---------------------------------------------------------------------------

ComplexMatrix t8b_template(cplx a, cplx b, cplx c, cplx d) {
  return from_rows(8, {1.0, 1.0,    1.0,   1.0,   1.0,    1.0,    1.0,    1.0,
                       1.0, -1.0,   c,     -c,    d,      -d,     c * d,  -c * d,
                       1.0, a,      -a,    -1.0,  a * d,  d,      -d,     -a * d,
                       1.0, -a,     -a * c, c,    a,      -1.0,   -c,     a * c,
                       1.0, b,      -c,    -b * c, -1.0,  -b,     c,      b * c,
                       1.0, -b,     -1.0,  b,     -d,     b * d,  d,      -b * d,
                       1.0, a * b,  a * c, b * c, -a * d, -b * d, -c * d, -a * b * c * d,
                       1.0, -a * b, a,     -b,    -a,     b,      -1.0,   a * b});
}

struct T8CAux {
  cplx d, e, f, g;
};

T8CAux t8c_aux(cplx a, cplx b, cplx c, cplx c1, cplx c2, cplx c3) {
  T8CAux x;
  x.d = -(c3 + a + c + b + 1.0 + c2 + a / c1);
  x.e = (c3 / c2 - c1 / c) / (1.0 / x.d - 1.0 / b);
  x.f = (a / c2 - a / c) / (c1 / c3 - x.d / b);
  x.g = -(1.0 + a / c2 + b + x.f + x.e) / (x.e / x.f + x.e + 1.0);
  return x;
}

ComplexMatrix t8c_template(cplx a, cplx b, cplx c, cplx c1, cplx c2, cplx c3) {
  const auto [d, e, f, g] = t8c_aux(a, b, c, c1, c2, c3);
  return from_rows(8, {1.0, 1.0,    1.0,    1.0,    1.0,        1.0,     1.0,        1.0,
                       1.0, c1,     c3,     -c3,    e,          -1.0,    -c1,        -e,
                       1.0, a,      c2,     c3,     b,          a / c1,  c,          d,
                       1.0, a / b,  a,      a / d,  a / c2,     a / c3,  c1,         a / c,
                       1.0, a / c2, b,      f,      e * g,      g,       e * g / f,  e,
                       1.0, a / d,  c,      -a / d, g,          -g,      -c,         -1.0,
                       1.0, a / c,  a / c1, -f,     f,          -a / c1, -1.0,       -a / c,
                       1.0, a / c3, d,      -1.0,   e * g / f,  -a / c3, -e * g / f, -d});
}

ComplexMatrix y9a_template(cplx x, cplx y, cplx z) {
  const cplx a = 2.0 * (y + z) + x * (2.0 + x / y) / z + 2.0 * x * x / ((y + z) * (x + y * z)) - 1.0;
  const cplx b = -x / y - y - x / z - z;
  const cplx c = 2.0 * x + x * x * (2.0 * x / y / z + 3.0) / y / z - 1.0;
  const cplx xy = x / y;
  const cplx q = x * x / (y * z);        // x^2 / (y z)
  const cplx qb = q / b;                 // x^2 / (b y z)
  const cplx r = x * x / (y * y);        // x^2 / y^2
  const cplx s = x * x / (y * y * z);    // x^2 / (y^2 z)
  const cplx t = x * x * x / (y * y * z * z);
  const cplx u = x * x / (y * z * z);
  return border(from_rows(8, {a,   b,      b,      xy,     xy,     -q, qb,     qb,
                              b,   x,      y,      xy,     z,      -x, -1.0,   x / z,
                              b,   y,      x,      z,      xy,     -x, x / z,  -1.0,
                              xy,  xy,     z,      r,      -z / y, -q, xy,     s,
                              xy,  z,      xy,     -z / y, r,      -q, s,      xy,
                              -q,  -x,     -x,     -q,     -q,     c,  -t,     -t,
                              qb,  -1.0,   x / z,  xy,     s,      -t, t,      u,
                              qb,  x / z,  -1.0,   s,      xy,     -t, u,      t}));
}

ComplexMatrix y9b_template(cplx a, cplx b, cplx c, cplx d) {
  const cplx c2 = c * c, c3 = c2 * c, c4 = c2 * c2, d2 = d * d;
  return border(from_rows(8, {
      c2 / b, a,                     b,                    c2,                   c2 / d,               c,                    c2 / a,               d,
      a,      a * a * d2 / c4,       a * b * d / c3,       a * d / (b * c),      a * d / (b * c2),     a * b * d / c2,       a * d2 / c4,          a * d / c2,
      b,      a * b * d / c3,        c * b * b / d,        b * c3 / (a * d),     b * c / d,            b * b,                b * d / c,            d / c,
      c2,     a * d / (b * c),       b * c3 / (a * d),     c3 / d,               c,                    b * c2 / d,           d / c,                d / b,
      c2 / d, a * d / (b * c2),      b * c / d,            c,                    1.0 / c,              b * c2 / (a * d),     d / (b * c),          d / c2,
      c,      a * b * d / c2,        b * b,                b * c2 / d,           b * c2 / (a * d),     b * b / c,            b,                    b * d / c2,
      c2 / a, a * d2 / c4,           b * d / c,            d / c,                d / (b * c),          b,                    d2 / (b * c2),        d2 / c2,
      d,      a * d / c2,            d / c,                d / b,                d / c2,               b * d / c2,           d2 / c2,              d / a}));
}

cplx y10a_f(cplx a, cplx b, cplx c, cplx d) { return -a * (2.0 + b) - 2.0 * (1.0 + d + c * d) / d; }

ComplexMatrix y10a_template(cplx a, cplx b, cplx c, cplx d) {
  const cplx e = a * b * c * d;
  const cplx f = y10a_f(a, b, c, d);
  const cplx a2 = a * a, c2 = c * c, d2 = d * d;
  return border(from_rows(9, {
      f,      1.0 / d,             1.0 / d,            a,                  a,              b * a,                c,                 c,               1.0,
      1.0 / d, 1.0 / (a * d2),     1.0 / d2,           1.0 / d,            a,              e / (c2 * d2),        c2 / e,            c / d,           1.0 / (c * d),
      1.0 / d, 1.0 / d2,           1.0 / (c * d2),     a / (c * d),        a * c / e,      b / d,                c,                 b * c2 / e,      1.0 / d,
      a,      1.0 / d,             a / (c * d),        a * e / (b * c),    a2,             a2 * b,               a,                 e / b,           1.0 / b,
      a,      a,                   a * c / e,          a2,                 a2 / c,         a * e / c,            a * c,             c,               a / c,
      b * a,  e / (c2 * d2),       b / d,              a2 * b,             a * e / c,      e * e / (c2 * d2),    e,                 b * a,           b,
      c,      c2 / e,              c,                  a,                  a * c,          e,                    c2 / a,            c2,              c / a,
      c,      c / d,               b * c2 / e,         e / b,              c,              b * a,                c2,                c2 * c * d / e,  c * d,
      1.0,    1.0 / (c * d),       1.0 / d,            1.0 / b,            a / c,          b,                    c / a,             c * d,           d}));
}

ComplexMatrix y10c2_template(cplx a, cplx b) {
  const auto w = [](int k) { return std::polar(1.0, M_PI * k / 6.0); };
  return border(from_rows(9, {
      1.0,  -kI,  kI,    kI,    -kI,   w(4),           w(4),            w(8),           w(8),
      1.0,  kI,   -1.0,  -1.0,  kI,    w(11),          w(11),           w(7),           w(7),
      kI,   w(8), w(10), w(7),  w(11), a,              -a,              w(4),           w(4),
      kI,   w(4), w(2),  w(11), w(7),  w(8),           w(8),            b,              -b,
      -kI,  w(8), w(4),  w(7),  w(5),  a * kI,         -a * kI,         w(1),           w(1),
      -kI,  w(4), w(8),  w(11), w(1),  w(5),           w(5),            b * kI,         -b * kI,
      -1.0, 1.0,  -1.0,  1.0,   -1.0,  a * w(11),      -a * w(11),      b * w(7),       -b * w(7),
      -1.0, -kI,  -kI,   kI,    kI,    a * w(7),       -a * w(7),       b * w(11),      -b * w(11),
      -1.0, kI,   1.0,   -1.0,  -kI,   -a,             a,               -b,             b}));
}

// Core of 6 x 6 circulant-style blocks, each 2 x 2 block [[x, x*], [x*, x]];
// starred labels use the conjugated variable.
ComplexMatrix y13_template(const std::vector<cplx>& v) {
  static const int layout[6][6] = {{0, 1, 2, 3, 4, 5},       {1, 2, 0, 4, 5, 3},       {2, 0, 1, 5, 3, 4},
                                   {3, 4, 5, ~2, ~0, ~1},    {4, 5, 3, ~0, ~1, ~2},    {5, 3, 4, ~1, ~2, ~0}};
  ComplexMatrix core(12, 12);
  for (int r = 0; r < 6; ++r) {
    for (int s = 0; s < 6; ++s) {
      const int label = layout[r][s];
      const cplx x = label >= 0 ? v[static_cast<std::size_t>(label)] : std::conj(v[static_cast<std::size_t>(~label)]);
      core(2 * r, 2 * s) = x;
      core(2 * r + 1, 2 * s + 1) = x;
      core(2 * r, 2 * s + 1) = std::conj(x);
      core(2 * r + 1, 2 * s) = std::conj(x);
    }
  }
  return border(core);
}

ComplexMatrix c7d_circulant(cplx a, cplx b, cplx c) {
  const cplx big_a = a, big_b = a * b, big_c = a * b * c;
  const cplx row[7] = {1.0, big_a, big_b, big_c, big_c, big_b, big_a};
  ComplexMatrix h(7, 7);
  for (int r = 0; r < 7; ++r)
    for (int s = 0; s < 7; ++s) h(r, s) = row[(s - r + 7) % 7];
  return h;
}

// ---------------------------------------------------------------------------

PhaseMatrix construct_c7d() {
  const C7DConstants k = c7d_constants();
  if (auto m = admissible(c7d_circulant(k.a, k.b, k.c))) return *m;
  solve_failed("C7D");
}

PhaseMatrix construct_v8() {
  const auto triples = v8_triples();
  if (triples.empty()) solve_failed("V8");
  const auto& t = triples.front();
  if (auto m = admissible(v8_template(t[0], t[1], t[2]))) return *m;
  solve_failed("V8");
}

PhaseMatrix construct_t8b(const std::vector<double>& p) {
  const cplx a = unit(p[0]), b = unit(p[1]), c = unit(p[2]);
  const cplx d = t8b_d(a, b, c);
  if (auto m = admissible(t8b_template(a, b, c, d))) return *m;
  throw Error(ErrorKind::ParameterOutOfDomain, "T8B: parameters do not give a unimodular d");
}

PhaseMatrix construct_t8c(const std::vector<double>& p) {
  const cplx c1 = unit(p[0]), c2 = unit(p[1]), c3 = unit(p[2]);
  const NonlinearSystem sys = make_system(3, 60, "T8C inner triplet", [=](const std::vector<cplx>& v) {
    const T8CAux aux = t8c_aux(v[0], v[1], v[2], c1, c2, c3);
    RealVector r(60);
    r.head(56) = offdiagonal_parts(t8c_template(v[0], v[1], v[2], c1, c2, c3));
    r(56) = std::abs(aux.d) - 1.0;
    r(57) = std::abs(aux.e) - 1.0;
    r(58) = std::abs(aux.f) - 1.0;
    r(59) = std::abs(aux.g) - 1.0;
    return r;
  });
  const auto m = first_admissible(sys, 0x7843, 64, [&](const RealVector& x) {
    const auto v = unit_values(x);
    return admissible(t8c_template(v[0], v[1], v[2], c1, c2, c3));
  });
  if (!m) solve_failed("T8C");
  return *m;
}

PhaseMatrix construct_y9a() {
  const NonlinearSystem sys = make_system(3, 6, "Y9A system", [](const std::vector<cplx>& v) {
    const cplx x = v[0], y = v[1], z = v[2];
    return real_parts_of({x - 3.0 * y * z / x + y * y * z * z * (1.0 - 2.0 * x) / (x * x * x) - 2.0,
                          1.0 / y + x / y / (z * z) + 1.0 / z + x / (y * y) / z - x / (y + z) / (x + y * z),
                          3.0 + x * (1.0 - y + z) / y / z + (y + (y - 1.0) * z) / x},
                         true);
  });
  const auto m = first_admissible(sys, 0x9a, 512, [](const RealVector& x) {
    const auto v = unit_values(x);
    return admissible(y9a_template(v[0], v[1], v[2]));
  });
  if (!m) solve_failed("Y9A");
  return *m;
}

PhaseMatrix construct_y9b() {
  const NonlinearSystem sys = make_system(4, 8, "Y9B system", [](const std::vector<cplx>& v) {
    const cplx a = v[0], b = v[1], c = v[2], d = v[3];
    const cplx c2 = c * c, c3 = c2 * c, c4 = c2 * c2, d2 = d * d;
    return real_parts_of(
        {1.0 + a + b + c + c2 + c2 / a + c2 / b + c2 / d + d,
         (c + d) / c + b * b * (c + d) / d + b * (1.0 + c / d + c3 / a / d + a * d / c3 + d / c),
         1.0 + 1.0 / a + b * d / c3 + d * (1.0 + 1.0 / b + b) / c2 + d / b / c + (1.0 + a) * d2 / c4,
         1.0 + d2 / c4 + d / c + b / c + d / c3 + a * d2 / b / c4 + b / a + d2 / b / c3 + d / c2},
        true);
  });
  // The system also admits Hadamard roots of other classes; keep the
  // isolated non-Butson one.
  const auto m = first_admissible(sys, 0x9b, 512, [](const RealVector& x) -> std::optional<PhaseMatrix> {
    const auto v = unit_values(x);
    auto m = admissible(y9b_template(v[0], v[1], v[2], v[3]));
    if (!m || defect(*m) != 0 || butson_order(*m)) return std::nullopt;
    return m;
  });
  if (!m) solve_failed("Y9B");
  return *m;
}

PhaseMatrix construct_y10a() {
  const NonlinearSystem sys = make_system(4, 8, "Y10A system", [](const std::vector<cplx>& v) {
    const cplx a = v[0], b = v[1], c = v[2], d = v[3];
    const cplx cd = c * d;
    return real_parts_of({1.0 + a + cd / b + a * d * (2.0 + 1.0 / c + c + d) + a * a * d * (b + cd) / c,
                          2.0 + 1.0 / b + b + a / c + c / a + 1.0 / d + 1.0 / cd + d + cd,
                          a * a * b * cd * (1.0 + b + d) + c * (b + d + b * d) + a * b * (1.0 + cd) * (1.0 + cd),
                          c + b * d * ((1.0 + a) * (1.0 + c) * (a + c) + a * a * b * cd)},
                         true);
  });
  const auto m = first_admissible(sys, 0x10a, 512, [](const RealVector& x) {
    const auto v = unit_values(x);
    return admissible(y10a_template(v[0], v[1], v[2], v[3]));
  });
  if (!m) solve_failed("Y10A");
  return *m;
}

PhaseMatrix construct_y13() {
  const NonlinearSystem sys = make_system(6, 6, "Y13 system", [](const std::vector<cplx>& v) {
    const cplx a = v[0], b = v[1], c = v[2], d = v[3], e = v[4], f = v[5];
    RealVector r = real_parts_of({a * a + b * b + c * c + d * d + e * e + f * f,
                                  a / c + b / a + c / b + d / f + e / d + f / e,
                                  a * c + a * b + b * c + d * f + d * e + e * f,
                                  a * e + b * f + c * d + d / a + e / b + f / c,
                                  a * d + b * e + c * f + a / e + b / f + c / d,
                                  a * f + b * d + c * e + d / b + e / c + f / a},
                                 false);
    return RealVector((2.0 * r.array() + 1.0).matrix());
  });
  // Roots of this system include Fourier-class and non-Hadamard solutions.
  const auto m = first_admissible(sys, 0x13, 1024, [](const RealVector& x) -> std::optional<PhaseMatrix> {
    auto m = admissible(y13_template(unit_values(x)));
    if (!m || butson_order(*m)) return std::nullopt;
    return m;
  });
  if (!m) solve_failed("Y13");
  return *m;
}

PhaseMatrix construct_from_family(const SolutionSet& set, std::string_view what) {
  if (!set.solutions.empty()) return set.solutions.front().matrix;
  if (!set.butson.empty()) return set.butson.front().matrix;
  solve_failed(what);
}

struct NameEntry {
  NamedFamily family;
  std::string_view name;
  std::size_t arity;
  Eigen::Index order;
};

constexpr NameEntry kNames[] = {
    {NamedFamily::Fourier, "Fourier", 0, 0}, {NamedFamily::LN, "LN", 0, 0},     {NamedFamily::VN, "VN", 0, 0},
    {NamedFamily::C7D, "C7D", 0, 7},         {NamedFamily::V8, "V8", 0, 8},     {NamedFamily::T8B, "T8B", 3, 8},
    {NamedFamily::T8C, "T8C", 3, 8},         {NamedFamily::Y9A, "Y9A", 0, 9},   {NamedFamily::Y9B, "Y9B", 0, 9},
    {NamedFamily::Y9C, "Y9C", 0, 9},         {NamedFamily::Y10A, "Y10A", 0, 10}, {NamedFamily::Y10C2, "Y10C2", 2, 10},
    {NamedFamily::Y13, "Y13", 0, 13},
};

const NameEntry& entry(NamedFamily f) {
  for (const NameEntry& e : kNames)
    if (e.family == f) return e;
  throw Error(ErrorKind::InvalidArgument, "unknown named family");
}

}  // namespace

std::string_view to_string(NamedFamily f) { return entry(f).name; }

std::optional<NamedFamily> parse_named_family(std::string_view name) {
  for (const NameEntry& e : kNames) {
    if (e.name.size() != name.size()) continue;
    if (std::equal(name.begin(), name.end(), e.name.begin(), [](char x, char y) {
          return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
        }))
      return e.family;
  }
  return std::nullopt;
}

const std::vector<NamedFamily>& all_named_families() {
  static const std::vector<NamedFamily> all = [] {
    std::vector<NamedFamily> v;
    for (const NameEntry& e : kNames) v.push_back(e.family);
    return v;
  }();
  return all;
}

std::size_t family_arity(NamedFamily f) { return entry(f).arity; }
Eigen::Index family_order(NamedFamily f) { return entry(f).order; }

Quadruplet y9c_quadruplet() {
  const cplx omega = std::polar(1.0, M_PI * 5.0 / 3.0);
  const double s771 = std::sqrt(771.0);
  const cplx zeta1 = omega / std::pow(2.0, 4.0 / 3.0) * std::pow(cplx(43.0, -3.0 * s771), 1.0 / 3.0);
  const cplx zeta2 = std::pow(2.0, 5.0 / 3.0) * omega * omega * std::pow(cplx(43.0, 3.0 * s771), 1.0 / 3.0);
  const cplx r1 = std::sqrt(cplx(1.0 - 2.0 * zeta1.real(), 0.0));
  const cplx r2 = std::sqrt(cplx(1.0 - 2.0 * zeta2.real(), 0.0));
  const cplx g1 = 0.25 * r2 - 0.25;
  const cplx g4 = 0.25 * r2 + 0.25;
  const cplx g2 = std::sqrt(2.0) / 2.0 * r1 + 0.5;
  const cplx g3 = std::sqrt(2.0) / 2.0 * r1 - 0.5;
  // Principal root; adding +0.0 turns a negative zero imaginary part into
  // +0 so negative reals map to +i sqrt(|x|).
  const auto root = [](cplx g) {
    const cplx w = g * g - 1.0;
    return std::sqrt(cplx(w.real(), w.imag() + 0.0));
  };
  return {root(g1) - g1, root(g2) - g2, root(g3) + g3, root(g4) + g4};
}

ComplexMatrix y9c_template(const Quadruplet& q) {
  const cplx a = q.a, b = q.b, c = q.c, d = q.d;
  const cplx A = 1.0 / a, B = 1.0 / b, C = 1.0 / c, D = 1.0 / d;
  return border(from_rows(8, {a, d, A, C, B, c, b, D,
                              b, c, B, a, D, A, d, C,
                              c, B, C, d, a, D, A, b,
                              B, C, b, A, d, a, D, c,
                              d, A, D, b, C, B, c, a,
                              A, D, a, c, b, C, B, d,
                              C, b, c, D, A, d, a, B,
                              D, a, d, B, c, b, C, A}));
}

NonlinearSystem y9c_constraint_system() {
  return make_system(4, 5, "Y9C system", [](const std::vector<cplx>& v) {
    const cplx a = v[0], b = v[1], c = v[2], d = v[3];
    const RealVector r = real_parts_of({a + b + c + d, a * a + b * b + c * c + d * d,
                                        a / b + b / d + c / d + a * c, a / d + b / c + b * c + a * d,
                                        a / c + a * b + c * d + b * d},
                                       false);
    return RealVector((2.0 * r.array() + 1.0).matrix());
  });
}

Polynomial c7d_sextic() { return Polynomial::from_real({1.0, 12.0, 18.0, -64.0, -96.0, 45.0, 43.0}); }

C7DConstants c7d_constants() {
  C7DConstants k;
  const RootSet rs = roots(c7d_sextic());
  bool found = false;
  for (const cplx& r : rs.roots) {
    if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r))) continue;
    if (!found || r.real() > k.x_star) k.x_star = r.real();
    found = true;
  }
  if (!found) solve_failed("C7D sextic");

  const double s21 = std::sqrt(21.0);
  const double t = 3.0 * M_PI / 14.0;
  const double im = 0.5 * std::sqrt(2.0 * s21 + 6.0) * std::cos(t) - std::sqrt(2.0 * s21 - 6.0) * std::sin(t) -
                    0.75 * std::sqrt(2.0 * s21 - 6.0);
  k.a = cplx(-1.0 / (2.0 * k.x_star), im);
  if (!unimodular(k.a)) solve_failed("C7D constant a");

  const cplx a = k.a;
  const NonlinearSystem sys = make_system(2, 4, "C7D (b, c) system", [a](const std::vector<cplx>& v) {
    const cplx b = v[0], c = v[1];
    return real_parts_of({1.0 + a + b + c + 1.0 / a + 1.0 / b + 1.0 / c,
                          1.0 + c + 1.0 / c + a * b + 1.0 / (a * b) + b * c + 1.0 / (b * c)},
                         true);
  });
  // Several unimodular (b, c) solve the pair of equations; the one wanted is
  // the root whose circulant is Hadamard.
  const auto m = first_admissible(sys, 0x7d, 256, [&](const RealVector& x) {
    const auto v = unit_values(x);
    auto m = admissible(c7d_circulant(a, v[0], v[1]));
    return m;
  });
  if (!m) solve_failed("C7D (b, c)");
  // Recover b and c from the circulant's first row: A = a, B = ab, C = abc.
  const ComplexMatrix h = m->realize();
  k.b = h(0, 2) / h(0, 1);
  k.c = h(0, 3) / h(0, 2);
  return k;
}

Polynomial v8_octic() {
  return Polynomial::from_real({-16.0, 256.0, -96.0, -896.0, -696.0, -96.0, 56.0, 16.0, 1.0});
}

std::array<Polynomial, 2> v8_quartic_factors() {
  const double s2 = std::sqrt(2.0);
  std::array<Polynomial, 2> out;
  for (int mu = 0; mu < 2; ++mu) {
    const double sign = mu == 0 ? 1.0 : -1.0;
    const double alpha = -4.0 + 2.0 * sign * std::sqrt(116.0 - 2.0 * s2);
    const double beta = -16.0 + 8.0 * sign * std::sqrt(10.0 - s2);
    const double gamma = -4.0 * s2 + 4.0 - 4.0 * sign * std::sqrt(4.0 - 2.0 * s2);
    out[static_cast<std::size_t>(mu)] = Polynomial::from_real({gamma, beta, alpha, 8.0, 1.0});
  }
  return out;
}

ComplexMatrix v8_template(cplx a, cplx b, cplx c) {
  return from_rows(8, {-1.0, -1.0, b,    b,    c,    c,    a,    a,
                       -1.0, b,    -1.0, c,    b,    a,    c,    -a,
                       b,    -1.0, c,    -1.0, a,    b,    -a,   c,
                       b,    c,    -1.0, a,    -1.0, -a,   b,    -c,
                       c,    b,    a,    -1.0, -a,   -1.0, -c,   b,
                       c,    a,    b,    -a,   -1.0, -c,   -1.0, -b,
                       a,    c,    -a,   b,    -c,   -1.0, -b,   -1.0,
                       a,    -a,   c,    -c,   b,    -b,   -1.0, 1.0});
}

std::vector<std::array<cplx, 3>> v8_triples() {
  // Each octic root y = x + 1/x gives a unimodular pair x, 1/x; entries of
  // the template are these values up to sign.
  std::vector<cplx> candidates;
  for (const cplx& y : roots(v8_octic()).roots) {
    for (const cplx& x : roots(Polynomial{1.0, -y, 1.0}).roots) {
      if (!unimodular(x, 1e-9)) continue;
      candidates.push_back(x);
      candidates.push_back(-x);
    }
  }
  std::vector<std::array<cplx, 3>> out;
  for (const cplx& b : candidates) {
    for (const cplx& c : candidates) {
      // Row orthogonality of the template fixes a given (b, c).
      const Polynomial quad{1.0 + b, c + 1.0 / c, 1.0 + 1.0 / b};
      if (quad.degree() < 1) continue;
      for (const cplx& a : roots(quad).roots) {
        if (!unimodular(a, 1e-9)) continue;
        if (objective_z(v8_template(a, b, c)) > 1e-9) continue;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const std::array<cplx, 3>& t) {
          return std::abs(t[0] - a) + std::abs(t[1] - b) + std::abs(t[2] - c) < 1e-9;
        });
        if (!dup) out.push_back({a, b, c});
      }
    }
  }
  return out;
}

cplx t8b_d(cplx a, cplx b, cplx c) {
  const cplx den = a + b + c + a * b * c;
  if (!(std::abs(den) > 1e-10))
    throw Error(ErrorKind::ParameterOutOfDomain, "T8B: a + b + c + abc vanishes for these parameters");
  return (1.0 + a * b + b * c + c * a) / den;
}

PhaseMatrix construct_named(const FamilyId& id) {
  const NameEntry& e = entry(id.name);
  if (id.parameters.size() != e.arity)
    throw Error(ErrorKind::ParameterOutOfDomain, std::string(e.name) + ": expected " + std::to_string(e.arity) +
                                                     " parameters, got " + std::to_string(id.parameters.size()));
  for (double p : id.parameters)
    if (!std::isfinite(p)) throw Error(ErrorKind::ParameterOutOfDomain, std::string(e.name) + ": parameter is not finite");
  if (e.order != 0 && id.order != 0 && id.order != e.order)
    throw Error(ErrorKind::ParameterOutOfDomain, std::string(e.name) + " has fixed order " + std::to_string(e.order));

  switch (id.name) {
    case NamedFamily::Fourier:
      if (id.order < 1) throw Error(ErrorKind::ParameterOutOfDomain, "Fourier: order must be at least 1");
      return fourier(id.order);
    case NamedFamily::LN: {
      if (id.order < 3 || (id.order - 3) % 4 != 0)
        throw Error(ErrorKind::ParameterOutOfDomain, "LN: order must be 3 + 4k");
      MultistartConfig cfg;
      cfg.starts = 64;
      return construct_from_family(solve_LN(static_cast<int>((id.order - 3) / 4), cfg), "LN");
    }
    case NamedFamily::VN: {
      if (id.order < 6 || id.order > kMaxCirculantOrder)
        throw Error(ErrorKind::ParameterOutOfDomain, "VN: order must lie in [6, 64]");
      MultistartConfig cfg;
      cfg.starts = 64;
      return construct_from_family(solve_VN(id.order, cfg), "VN");
    }
    case NamedFamily::C7D:
      return construct_c7d();
    case NamedFamily::V8:
      return construct_v8();
    case NamedFamily::T8B:
      return construct_t8b(id.parameters);
    case NamedFamily::T8C:
      return construct_t8c(id.parameters);
    case NamedFamily::Y9A:
      return construct_y9a();
    case NamedFamily::Y9B:
      return construct_y9b();
    case NamedFamily::Y9C: {
      if (auto m = admissible(y9c_template(y9c_quadruplet()))) return *m;
      solve_failed("Y9C");
    }
    case NamedFamily::Y10A:
      return construct_y10a();
    case NamedFamily::Y10C2: {
      if (auto m = admissible(y10c2_template(unit(id.parameters[0]), unit(id.parameters[1])))) return *m;
      solve_failed("Y10C2");
    }
    case NamedFamily::Y13:
      return construct_y13();
  }
  throw Error(ErrorKind::InvalidArgument, "construct_named: unknown family");
}

}  // namespace chm
