#include "chm/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ZeroEntry: return "ZeroEntry";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotHadamard: return "NotHadamard";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::NotPalindromic: return "NotPalindromic";
    case ErrorKind::OddDegree: return "OddDegree";
    case ErrorKind::ParameterOutOfDomain: return "ParameterOutOfDomain";
    case ErrorKind::SolveFailed: return "SolveFailed";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

SvdResult svd(const ComplexMatrix& m) {
  detail::require_finite(m, "svd");
  Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "polar_unitary: matrix must be square");
  const SvdResult d = svd(m);
  const Eigen::Index n = d.singulars.size();
  if (n == 0) return m;
  if (!(d.singulars(n - 1) > 1e-12 * d.singulars(0)))
    throw Error(ErrorKind::RankDeficient, "polar_unitary: smallest singular value below 1e-12 * largest");
  return d.left * d.right.adjoint();
}

RealMatrix finite_difference_jacobian(const NonlinearSystem& system, const RealVector& x) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  RealMatrix jac(static_cast<Eigen::Index>(system.residual_count), x.size());
  RealVector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = base * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + h;
    const RealVector fp = system(probe);
    probe(i) = x(i) - h;
    const RealVector fm = system(probe);
    probe(i) = x(i);
    jac.col(i) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

LeastSquaresResult solve_least_squares(const NonlinearSystem& system, const RealVector& start,
                                       const SolverConfig& config) {
  if (static_cast<std::size_t>(start.size()) != system.arity)
    throw Error(ErrorKind::LengthMismatch, "solve_least_squares: start length " + std::to_string(start.size()) +
                                               " != arity " + std::to_string(system.arity));
  if (!(config.residual_tol > 0.0) || !(config.step_tol > 0.0) || !(config.damping_init > 0.0))
    throw Error(ErrorKind::InvalidArgument, "solve_least_squares: tolerances and damping must be positive");

  auto jacobian_at = [&](const RealVector& x) {
    return system.jacobian ? system.jacobian(x) : finite_difference_jacobian(system, x);
  };

  LeastSquaresResult out;
  RealVector x = start;
  RealVector r = system(x);
  double cost = r.squaredNorm();
  out.solution = x;
  out.residual_norm = std::sqrt(cost);
  if (!std::isfinite(cost)) return out;
  if (out.residual_norm <= config.residual_tol) {
    out.converged = true;
    return out;
  }

  RealMatrix jac = jacobian_at(x);
  RealMatrix normal = jac.transpose() * jac;
  RealVector grad = jac.transpose() * r;
  double mu = config.damping_init * std::max(1e-12, normal.diagonal().maxCoeff());
  double nu = 2.0;

  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    out.iterations = it + 1;
    RealVector scale = normal.diagonal().cwiseMax(1e-12 * std::max(1.0, normal.diagonal().maxCoeff()));
    RealMatrix damped = normal;
    damped.diagonal() += mu * scale;
    const RealVector step = damped.ldlt().solve(-grad);
    if (!step.allFinite()) break;
    if (step.norm() <= config.step_tol * (x.norm() + config.step_tol)) break;

    const RealVector trial = x + step;
    const RealVector r_trial = system(trial);
    const double cost_trial = r_trial.squaredNorm();
    const double predicted = step.dot(mu * scale.cwiseProduct(step) - grad);
    const double rho = (std::isfinite(cost_trial) && predicted > 0.0) ? (cost - cost_trial) / predicted : -1.0;

    if (rho > 0.0) {
      x = trial;
      r = r_trial;
      cost = cost_trial;
      if (std::sqrt(cost) < out.residual_norm) {
        out.solution = x;
        out.residual_norm = std::sqrt(cost);
      }
      if (out.residual_norm <= config.residual_tol) break;
      jac = jacobian_at(x);
      normal = jac.transpose() * jac;
      grad = jac.transpose() * r;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (mu > 1e30) break;
    }
  }
  out.converged = out.residual_norm <= config.residual_tol;
  return out;
}

}  // namespace chm
