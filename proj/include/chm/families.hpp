#pragma once

// Fourier matrices and the two systematic families: bordered block-circulant
// matrices built from 2x2 blocks, and circulant matrices whose first row
// solves the cyclic-roots system. Both families are found numerically by a
// deterministic multistart Levenberg-Marquardt search.

#include <cstdint>
#include <functional>
#include <vector>

#include "chm/invariants.hpp"
#include "chm/numkernel.hpp"
#include "chm/phase_matrix.hpp"

namespace chm {

/// p_jk = (j k mod n) / n.
PhaseMatrix fourier(Eigen::Index n);

/// sqrt of the sum of |(H H^H)_jl|^2 over j < l: the residual of every
/// off-diagonal unitarity constraint.
double full_unitarity_residual(const PhaseMatrix& m);

// ---------------------------------------------------------------------------
// Block-circulant family, order 3 + 4k.

/// Trigonometric system in the angles alpha_0..alpha_2k (radians):
///   sum cos(alpha_j) + 1/2, sum cos(2 alpha_j) + 1/2, and for 0 <= i < k
///   sum cos(alpha_j +- alpha_{(j+1+i) mod (2k+1)}) + 1/2.
NonlinearSystem build_LN_system(int k);

/// Order 2m + 1 matrix for m angles: a border of ones around an m x m
/// block-circulant array whose (r, s) block is [[c, c*], [c*, c]] with
/// c = exp(i alpha_{(s - r) mod m}). Any m >= 1.
PhaseMatrix assemble_block_circulant(const RealVector& alphas);

/// assemble_block_circulant restricted to odd length (order 3 + 4k).
/// Throws LengthMismatch for even or empty input.
PhaseMatrix assemble_LN(const RealVector& alphas);

/// Full off-diagonal unitarity residual (real and imaginary parts) of
/// assemble_block_circulant(alphas) for m = `blocks` angles. Used for orders
/// 2m + 1 that the reduced trigonometric system does not cover.
NonlinearSystem build_block_circulant_unitarity_system(int blocks);

// ---------------------------------------------------------------------------
// Circulant family.

/// Cyclic-roots system with c_0 = 1 and c_j = exp(i x_{j-1}) for j >= 1:
/// real and imaginary parts of sum_j c_j / c_{(j+k) mod n}, k = 1..n-1.
NonlinearSystem build_VN_system(Eigen::Index n);

/// circ([1, c_1, ..., c_{n-1}]) with row r the cyclic shift of the first row
/// by r. Input is the n - 1 angles in radians; the result is not dephased.
PhaseMatrix assemble_VN(const RealVector& c_angles);

inline constexpr Eigen::Index kMaxCirculantOrder = 64;

// ---------------------------------------------------------------------------
// Multistart solving.

struct MultistartConfig {
  std::size_t starts = 256;
  std::uint64_t rng_seed = 0;
  unsigned threads = 0;              // 0 = hardware concurrency
  SolverConfig solver{};
  double accept_residual = 1e-10;    // on the system residual
  double hadamard_tol = 1e-9;        // on Z / n of the assembled matrix
  double unitarity_tol = 1e-9;       // on full_unitarity_residual
  double dedup_tol = 1e-7;           // Haagerup representatives, circular
  bool retain_butson = false;        // keep Butson solutions among `solutions`
  bool allow_large_order = false;    // lift the order cap of solve_VN
  ProfileTolerances profile_tol{};
};

struct FamilySolution {
  PhaseMatrix matrix;   // as assembled, not dephased
  InvariantProfile profile;
  HaagerupSet lambda;
  RealVector parameters;
  double system_residual = 0.0;
  double unitarity_residual = 0.0;
  std::size_t start_index = 0;
};

struct SolutionSet {
  std::vector<FamilySolution> solutions;  // distinct, in order of first discovery
  std::vector<FamilySolution> butson;     // distinct Butson solutions set aside
  std::size_t discarded_butson = 0;       // converged starts landing on Butson matrices
  std::size_t discarded_nonconverged = 0;
  std::size_t discarded_unverified = 0;   // converged system, matrix failed a check
  std::size_t converged = 0;
  std::size_t attempted = 0;

  bool no_solutions() const noexcept { return solutions.empty() && butson.empty(); }
};

using Assembler = std::function<PhaseMatrix(const RealVector&)>;

/// Uniform starts in [0, 2 pi)^arity, one LM solve per start, each converged
/// phase vector assembled, verified, profiled and deduplicated by
/// (defect, #Lambda, Butson order, Lambda representatives).
SolutionSet solve_multistart(const NonlinearSystem& system, const Assembler& assemble,
                             const MultistartConfig& config);

SolutionSet solve_LN(int k, const MultistartConfig& config = {});

/// Multistart over build_block_circulant_unitarity_system.
SolutionSet solve_block_circulant(int blocks, const MultistartConfig& config = {});

/// n >= 6; n > 64 requires config.allow_large_order.
SolutionSet solve_VN(Eigen::Index n, const MultistartConfig& config = {});

}  // namespace chm
