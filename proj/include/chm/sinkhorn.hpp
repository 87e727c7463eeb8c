#pragma once

// Randomised alternating-projection search for complex Hadamard matrices:
// seeds are pushed back and forth between the torus of unimodular matrices
// and the rescaled unitary group until both constraints hold at once.

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "chm/invariants.hpp"
#include "chm/phase_matrix.hpp"

namespace chm {

struct SinkhornConfig {
  std::size_t max_iterations = 100000;
  double z_tol = 1e-12;
  std::size_t stall_window = 500;
  double stall_eps = 1e-15;
  std::uint64_t rng_seed = 0;
  unsigned threads = 0;      // search only; 0 = hardware concurrency
  bool record_trace = false;  // keep Z of every iterate
};

enum class SinkhornStop { Converged, MaxIterations, Stalled };

struct SinkhornOutcome {
  PhaseMatrix matrix;  // dephased unimodular iterate
  double final_z = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::uint64_t seed_id = 0;
  SinkhornStop stop = SinkhornStop::MaxIterations;
  std::vector<double> trace;
};

/// n x n complex standard-normal seed; entries with modulus below 1e-12 are
/// redrawn. Deterministic in rng_seed.
ComplexMatrix random_seed(Eigen::Index n, std::uint64_t rng_seed);

/// Iterate sinkhorn_step until Z of the unimodular iterate drops to z_tol,
/// the iteration budget runs out, or Z improves by less than stall_eps over
/// stall_window iterations.
SinkhornOutcome run(const ComplexMatrix& seed, const SinkhornConfig& config = {});

struct ProfiledOutcome {
  SinkhornOutcome outcome;
  InvariantProfile profile;
};

struct ProfileKey {
  std::size_t defect;
  std::size_t haagerup_card;
  std::optional<int> butson_order;
  auto operator<=>(const ProfileKey&) const = default;
};

struct SearchResult {
  std::vector<ProfiledOutcome> outcomes;  // converged only, sorted by seed_id
  std::size_t attempted = 0;
  std::size_t failed = 0;
  std::map<ProfileKey, std::size_t> summary;
};

/// Seed i uses mix_seed(config.rng_seed, i); results do not depend on the
/// number of worker threads.
SearchResult search(Eigen::Index n, std::size_t num_seeds, const SinkhornConfig& config = {},
                    const ProfileTolerances& tol = {});

}  // namespace chm
