#pragma once

// Equivalence-invariant fingerprints of complex Hadamard matrices: the
// defect, the Haagerup set and one-way inequivalence certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chm/phase_matrix.hpp"

namespace chm {

struct ProfileTolerances {
  double hadamard_tol = 1e-8;  // precondition on Z/n
  double rank_rel_tol = kDefaultRankTol;
  double phase_tol = 1e-8;
  int butson_q_max = kDefaultButsonQMax;
  double butson_tol = kDefaultButsonTol;
  double symmetry_tol = 1e-8;
};

struct InvariantProfile {
  std::size_t defect = 0;
  std::size_t haagerup_card = 1;
  bool haagerup_stable = true;
  std::optional<int> butson_order;
  bool symmetric = false;
  double unitarity_residual = 0.0;

  /// Key used to group and deduplicate matrices.
  bool same_class(const InvariantProfile& o) const noexcept {
    return defect == o.defect && haagerup_card == o.haagerup_card && butson_order == o.butson_order;
  }
};

/// Clustered Haagerup set. Each cluster is stored as a phase in [0, 1)
/// (the value is exp(2 pi i phase)) with the number of quartets it absorbed.
struct HaagerupSet {
  std::vector<double> phases;  // sorted ascending
  std::vector<std::size_t> multiplicities;

  std::size_t size() const noexcept { return phases.size(); }
  std::vector<cplx> values() const;
  bool contains_one(double tol) const;
  bool closed_under_conjugation(double tol) const;
  /// Same cardinality and every representative within tol (circular).
  bool approx_equal(const HaagerupSet& other, double tol, bool compare_multiplicities = true) const;
};

struct HaagerupCount {
  std::size_t count = 0;
  bool stable = true;  // count unchanged at phase_tol / 2 and 2 * phase_tol
};

/// Dimension of first-order unitarity-preserving phase deformations minus
/// the 2n - 1 trivial directions. Throws NotHadamard unless Z/n <= 1e-8.
std::size_t defect(const PhaseMatrix& m, double rank_rel_tol = kDefaultRankTol);

/// The real tangent system whose kernel the defect measures: n(n-1) rows
/// (real and imaginary part per row pair j < l) by n^2 columns.
RealMatrix defect_system(const PhaseMatrix& m);

HaagerupSet haagerup_set(const PhaseMatrix& m, double phase_tol = 1e-8);

HaagerupCount haagerup_count(const PhaseMatrix& m, double phase_tol = 1e-8);

/// Cardinality of the Haagerup set; throws Unstable when the count moves
/// under halving or doubling of phase_tol.
std::size_t haagerup_cardinality(const PhaseMatrix& m, double phase_tol = 1e-8);

/// 1 + tau + tau^2 with tau = n(n-1)/2.
std::uint64_t symmetric_haagerup_bound(std::int64_t n);

/// Dephased form equals its transpose within tol (circular distance).
bool is_symmetric_dephased(const PhaseMatrix& m, double tol = 1e-8);

enum class CertificateVerdict { Inequivalent, Unknown };
enum class CertificateReason { None, Order, Defect, Haagerup };

struct Certificate {
  CertificateVerdict verdict = CertificateVerdict::Unknown;
  CertificateReason reason = CertificateReason::None;
  std::string detail;
};

/// Never claims equivalence: equal invariants yield Unknown.
Certificate certify_inequivalent(const PhaseMatrix& a, const PhaseMatrix& b,
                                 const ProfileTolerances& tol = {});

InvariantProfile profile(const PhaseMatrix& m, const ProfileTolerances& tol = {});

std::string to_string(const InvariantProfile& p);

}  // namespace chm
