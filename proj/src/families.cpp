#include "chm/families.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "chm/parallel.hpp"

namespace chm {

PhaseMatrix fourier(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "fourier: order must be at least 1");
  RealMatrix p(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) p(j, k) = static_cast<double>((j * k) % n) / static_cast<double>(n);
  return PhaseMatrix(p);
}

double full_unitarity_residual(const PhaseMatrix& m) {
  const ComplexMatrix h = m.realize();
  const ComplexMatrix g = h * h.adjoint();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < g.rows(); ++j)
    for (Eigen::Index l = j + 1; l < g.cols(); ++l) sum += std::norm(g(j, l));
  return std::sqrt(sum);
}

NonlinearSystem build_LN_system(int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "build_LN_system: k must be nonnegative");
  const auto m = static_cast<Eigen::Index>(2 * k + 1);
  NonlinearSystem sys;
  sys.arity = static_cast<std::size_t>(m);
  sys.residual_count = static_cast<std::size_t>(2 * k + 2);
  sys.description = "LN k=" + std::to_string(k);
  sys.residual = [k, m](const RealVector& a) {
    RealVector r(2 * k + 2);
    r(0) = a.array().cos().sum() + 0.5;
    r(1) = (2.0 * a.array()).cos().sum() + 0.5;
    for (int i = 0; i < k; ++i) {
      double plus = 0.0;
      double minus = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        const double b = a((j + 1 + i) % m);
        plus += std::cos(a(j) + b);
        minus += std::cos(a(j) - b);
      }
      r(2 + 2 * i) = plus + 0.5;
      r(3 + 2 * i) = minus + 0.5;
    }
    return r;
  };
  return sys;
}

PhaseMatrix assemble_block_circulant(const RealVector& alphas) {
  const Eigen::Index m = alphas.size();
  if (m < 1) throw Error(ErrorKind::LengthMismatch, "assemble_block_circulant: need at least one angle");
  detail::require_finite(alphas, "assemble_block_circulant");
  const Eigen::Index n = 2 * m + 1;
  RealMatrix p = RealMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index s = 0; s < m; ++s) {
      const double phase = alphas((s - r + m) % m) / kTwoPi;
      p(1 + 2 * r, 1 + 2 * s) = phase;
      p(2 + 2 * r, 2 + 2 * s) = phase;
      p(1 + 2 * r, 2 + 2 * s) = -phase;
      p(2 + 2 * r, 1 + 2 * s) = -phase;
    }
  }
  return PhaseMatrix(p);
}

PhaseMatrix assemble_LN(const RealVector& alphas) {
  if (alphas.size() % 2 == 0)
    throw Error(ErrorKind::LengthMismatch,
                "assemble_LN: expected an odd number of angles, got " + std::to_string(alphas.size()));
  return assemble_block_circulant(alphas);
}

namespace {

RealVector offdiagonal_residual(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  const ComplexMatrix g = h * h.adjoint();
  RealVector r(n * (n - 1));
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = j + 1; l < n; ++l) {
      r(idx++) = g(j, l).real();
      r(idx++) = g(j, l).imag();
    }
  }
  return r;
}

}  // namespace

NonlinearSystem build_block_circulant_unitarity_system(int blocks) {
  if (blocks < 1) throw Error(ErrorKind::InvalidArgument, "block-circulant system: need at least one block");
  const auto n = static_cast<std::size_t>(2 * blocks + 1);
  NonlinearSystem sys;
  sys.arity = static_cast<std::size_t>(blocks);
  sys.residual_count = n * (n - 1);
  sys.description = "block-circulant unitarity N=" + std::to_string(n);
  sys.residual = [](const RealVector& a) { return offdiagonal_residual(assemble_block_circulant(a).realize()); };
  return sys;
}

NonlinearSystem build_VN_system(Eigen::Index n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "build_VN_system: order must be at least 2");
  NonlinearSystem sys;
  sys.arity = static_cast<std::size_t>(n - 1);
  sys.residual_count = static_cast<std::size_t>(2 * (n - 1));
  sys.description = "VN N=" + std::to_string(n);
  sys.residual = [n](const RealVector& x) {
    std::vector<cplx> c(static_cast<std::size_t>(n));
    c[0] = 1.0;
    for (Eigen::Index j = 1; j < n; ++j) c[static_cast<std::size_t>(j)] = std::polar(1.0, x(j - 1));
    RealVector r(2 * (n - 1));
    for (Eigen::Index k = 1; k < n; ++k) {
      cplx s{};
      for (Eigen::Index j = 0; j < n; ++j)
        s += c[static_cast<std::size_t>(j)] / c[static_cast<std::size_t>((j + k) % n)];
      r(2 * (k - 1)) = s.real();
      r(2 * (k - 1) + 1) = s.imag();
    }
    return r;
  };
  return sys;
}

PhaseMatrix assemble_VN(const RealVector& c_angles) {
  if (c_angles.size() < 1) throw Error(ErrorKind::LengthMismatch, "assemble_VN: need at least one angle");
  detail::require_finite(c_angles, "assemble_VN");
  const Eigen::Index n = c_angles.size() + 1;
  RealVector first(n);
  first(0) = 0.0;
  first.tail(n - 1) = c_angles / kTwoPi;
  RealMatrix p(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index s = 0; s < n; ++s) p(r, s) = first((s - r + n) % n);
  return PhaseMatrix(p);
}

SolutionSet solve_multistart(const NonlinearSystem& system, const Assembler& assemble,
                             const MultistartConfig& config) {
  enum class Fate { NotConverged, Unverified, Accepted };
  struct Slot {
    Fate fate = Fate::NotConverged;
    std::optional<FamilySolution> solution;
  };
  std::vector<Slot> slots(config.starts);

  parallel_for(config.starts, config.threads, [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(config.rng_seed, i));
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    RealVector start(static_cast<Eigen::Index>(system.arity));
    for (Eigen::Index v = 0; v < start.size(); ++v) start(v) = angle(rng);

    const LeastSquaresResult ls = solve_least_squares(system, start, config.solver);
    if (!(ls.residual_norm <= config.accept_residual)) return;
    slots[i].fate = Fate::Unverified;

    const PhaseMatrix m = assemble(ls.solution);
    if (!is_hadamard(m, config.hadamard_tol)) return;
    const double unitarity = full_unitarity_residual(m);
    if (!(unitarity <= config.unitarity_tol)) return;

    FamilySolution s;
    s.matrix = m;
    s.profile = profile(m, config.profile_tol);
    s.lambda = haagerup_set(m, config.profile_tol.phase_tol);
    s.parameters = ls.solution;
    s.system_residual = ls.residual_norm;
    s.unitarity_residual = unitarity;
    s.start_index = i;
    slots[i].fate = Fate::Accepted;
    slots[i].solution = std::move(s);
  });

  SolutionSet out;
  out.attempted = config.starts;
  const auto seen = [&](const std::vector<FamilySolution>& pool, const FamilySolution& s) {
    for (const FamilySolution& t : pool)
      if (t.profile.same_class(s.profile) && t.lambda.approx_equal(s.lambda, config.dedup_tol, false)) return true;
    return false;
  };
  for (Slot& slot : slots) {
    switch (slot.fate) {
      case Fate::NotConverged:
        ++out.discarded_nonconverged;
        continue;
      case Fate::Unverified:
        ++out.converged;
        ++out.discarded_unverified;
        continue;
      case Fate::Accepted:
        ++out.converged;
        break;
    }
    FamilySolution& s = *slot.solution;
    const bool is_butson = s.profile.butson_order.has_value();
    if (is_butson && !config.retain_butson) {
      ++out.discarded_butson;
      if (!seen(out.butson, s)) out.butson.push_back(std::move(s));
      continue;
    }
    if (!seen(out.solutions, s)) out.solutions.push_back(std::move(s));
  }
  return out;
}

SolutionSet solve_LN(int k, const MultistartConfig& config) {
  return solve_multistart(build_LN_system(k), assemble_LN, config);
}

SolutionSet solve_block_circulant(int blocks, const MultistartConfig& config) {
  return solve_multistart(build_block_circulant_unitarity_system(blocks), assemble_block_circulant, config);
}

SolutionSet solve_VN(Eigen::Index n, const MultistartConfig& config) {
  if (n < 6) throw Error(ErrorKind::InvalidArgument, "solve_VN: order must be at least 6");
  if (n > kMaxCirculantOrder && !config.allow_large_order)
    throw Error(ErrorKind::InvalidArgument, "solve_VN: order above 64 requires allow_large_order");
  return solve_multistart(build_VN_system(n), assemble_VN, config);
}

}  // namespace chm
