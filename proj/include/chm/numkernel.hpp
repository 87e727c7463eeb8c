#pragma once

// Dense complex linear-algebra primitives shared by every other module.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "chm/error.hpp"

namespace chm {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kDefaultRankTol = 1e-8;

struct SvdResult {
  ComplexMatrix left;
  RealVector singulars;  // nonincreasing, nonnegative
  ComplexMatrix right;
};

namespace detail {
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* where) {
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, std::string(where) + ": matrix has NaN/Inf entries");
}
}  // namespace detail

/// Full SVD m = left * diag(singulars) * right^H.
SvdResult svd(const ComplexMatrix& m);

/// Singular values of a real or complex matrix of any shape, nonincreasing.
template <typename Derived>
RealVector singular_values(const Eigen::MatrixBase<Derived>& m) {
  detail::require_finite(m, "singular_values");
  using Plain = typename Derived::PlainObject;
  if (m.size() == 0) return RealVector();
  // BDCSVD in Eigen 3.4.0 misplaces clustered singular values on the
  // highly degenerate tangent systems of Fourier matrices.
  Eigen::JacobiSVD<Plain> dec(m.derived());
  return dec.singularValues();
}

/// Number of singular values strictly above rel_tol * sigma_max. The zero
/// matrix has rank 0.
template <typename Derived>
std::size_t numerical_rank(const Eigen::MatrixBase<Derived>& m, double rel_tol = kDefaultRankTol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw Error(ErrorKind::InvalidArgument, "numerical_rank: rel_tol must lie in (0, 1)");
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

/// Unitary polar factor U of m = U P, computed as left * right^H from the
/// SVD. Throws RankDeficient when sigma_min <= 1e-12 * sigma_max.
ComplexMatrix polar_unitary(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Damped least squares

/// Residual map from a real parameter vector to a fixed-length real vector.
struct NonlinearSystem {
  using Residual = std::function<RealVector(const RealVector&)>;
  using Jacobian = std::function<RealMatrix(const RealVector&)>;

  std::size_t arity = 0;
  std::size_t residual_count = 0;
  Residual residual;
  Jacobian jacobian;  // optional; finite differences when empty
  std::string description;

  RealVector operator()(const RealVector& x) const { return residual(x); }
};

struct SolverConfig {
  std::size_t max_iterations = 200;
  double residual_tol = 1e-12;
  double step_tol = 1e-15;
  double damping_init = 1e-3;
  std::uint64_t rng_seed = 0;
};

struct LeastSquaresResult {
  RealVector solution;
  double residual_norm = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Levenberg-Marquardt minimisation of ||system(x)||_2 from `start`.
/// Running out of iterations is not an error: the best point found is
/// returned with converged == false.
LeastSquaresResult solve_least_squares(const NonlinearSystem& system, const RealVector& start,
                                       const SolverConfig& config = {});

/// Central-difference Jacobian, exposed for tests and for systems that want
/// to compare an analytic Jacobian against it.
RealMatrix finite_difference_jacobian(const NonlinearSystem& system, const RealVector& x);

}  // namespace chm
