#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "chm/numkernel.hpp"

namespace chm {

/// Reduce a phase to [0, 1). Values that round up to 1.0 wrap to 0.
double reduce_phase(double p) noexcept;

/// min(|a - b|, 1 - |a - b|) after reduction of both arguments.
double circular_distance(double a, double b) noexcept;

/// An n x n matrix of phases p_jk in [0, 1) standing for exp(2 pi i p_jk).
class PhaseMatrix {
 public:
  PhaseMatrix() = default;
  explicit PhaseMatrix(Eigen::Index n);
  /// Entries are reduced mod 1 on construction.
  explicit PhaseMatrix(const RealMatrix& phases);

  Eigen::Index order() const noexcept { return phases_.rows(); }
  const RealMatrix& phases() const noexcept { return phases_; }
  double operator()(Eigen::Index j, Eigen::Index k) const { return phases_(j, k); }

  /// The unimodular complex matrix exp(2 pi i p).
  ComplexMatrix realize() const;

  PhaseMatrix transpose() const { return PhaseMatrix(RealMatrix(phases_.transpose())); }
  PhaseMatrix conjugate() const { return PhaseMatrix(RealMatrix(-phases_)); }

  /// Largest entrywise circular distance; orders must agree.
  double max_distance(const PhaseMatrix& other) const;

  bool operator==(const PhaseMatrix& other) const { return phases_ == other.phases_; }

 private:
  RealMatrix phases_;
};

/// H1 = D1 P1 H2 P2 D2 with the diagonal unitaries stored as phase vectors.
/// Convention: (P1 H P2)_{jk} = H_{row_perm[j], col_perm[k]}.
struct EquivalencePair {
  RealVector row_phases;                  // D1
  RealVector col_phases;                  // D2
  std::vector<Eigen::Index> row_perm;     // P1
  std::vector<Eigen::Index> col_perm;     // P2

  static EquivalencePair identity(Eigen::Index n);
  static EquivalencePair random(Eigen::Index n, std::mt19937_64& rng);
  void validate(Eigen::Index n) const;
};

struct HadamardCheck {
  bool accepted = false;
  double residual = 0.0;  // Z / n
  double tolerance = 0.0;
  explicit operator bool() const noexcept { return accepted; }
};

/// A phase matrix together with the evidence that it is Hadamard.
struct VerifiedChm {
  PhaseMatrix matrix;
  double unitarity_residual = 0.0;
  double tolerance = 0.0;

  /// Throws NotHadamard when Z/n exceeds tol.
  static VerifiedChm verify(const PhaseMatrix& m, double tol);
};

/// pi_1: entrywise phases of a complex matrix. Throws ZeroEntry for entries
/// of modulus below 1e-300.
PhaseMatrix unimodularize(const ComplexMatrix& m);

/// Z(X) = ||X X^H - n I||_F.
double objective_z(const ComplexMatrix& x);
double objective_z(const PhaseMatrix& m);

/// One sweep sqrt(n) * pi_2(pi_1(m)), landing on sqrt(n) U(n).
ComplexMatrix sinkhorn_step(const ComplexMatrix& m);

/// Pin row 0 and column 0 to phase zero.
PhaseMatrix dephase(const PhaseMatrix& m);

PhaseMatrix apply_equivalence(const PhaseMatrix& m, const EquivalencePair& e);

HadamardCheck is_hadamard(const PhaseMatrix& m, double tol);

inline constexpr int kDefaultButsonQMax = 1 << 16;
inline constexpr double kDefaultButsonTol = 1e-9;

/// Smallest q <= q_max with |q p - round(q p)| <= tol for every phase.
std::optional<int> butson_order(const PhaseMatrix& m, int q_max = kDefaultButsonQMax,
                                double tol = kDefaultButsonTol);

}  // namespace chm
