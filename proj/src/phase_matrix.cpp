#include "chm/phase_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chm {

double reduce_phase(double p) noexcept {
  double r = p - std::floor(p);
  if (r >= 1.0) r = 0.0;
  return r;
}

double circular_distance(double a, double b) noexcept {
  const double d = std::abs(reduce_phase(a) - reduce_phase(b));
  return std::min(d, 1.0 - d);
}

PhaseMatrix::PhaseMatrix(Eigen::Index n) : phases_(RealMatrix::Zero(n, n)) {}

PhaseMatrix::PhaseMatrix(const RealMatrix& phases) : phases_(phases) {
  if (phases.rows() != phases.cols())
    throw Error(ErrorKind::DimensionMismatch, "PhaseMatrix: phase array must be square");
  detail::require_finite(phases, "PhaseMatrix");
  phases_ = phases_.unaryExpr([](double p) { return reduce_phase(p); });
}

ComplexMatrix PhaseMatrix::realize() const {
  return phases_.unaryExpr([](double p) { return std::polar(1.0, kTwoPi * p); });
}

double PhaseMatrix::max_distance(const PhaseMatrix& other) const {
  if (order() != other.order()) throw Error(ErrorKind::DimensionMismatch, "max_distance: orders differ");
  double worst = 0.0;
  for (Eigen::Index j = 0; j < order(); ++j)
    for (Eigen::Index k = 0; k < order(); ++k)
      worst = std::max(worst, circular_distance(phases_(j, k), other.phases_(j, k)));
  return worst;
}

EquivalencePair EquivalencePair::identity(Eigen::Index n) {
  EquivalencePair e;
  e.row_phases = RealVector::Zero(n);
  e.col_phases = RealVector::Zero(n);
  e.row_perm.resize(static_cast<std::size_t>(n));
  std::iota(e.row_perm.begin(), e.row_perm.end(), Eigen::Index{0});
  e.col_perm = e.row_perm;
  return e;
}

EquivalencePair EquivalencePair::random(Eigen::Index n, std::mt19937_64& rng) {
  EquivalencePair e = identity(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    e.row_phases(i) = unit(rng);
    e.col_phases(i) = unit(rng);
  }
  std::shuffle(e.row_perm.begin(), e.row_perm.end(), rng);
  std::shuffle(e.col_perm.begin(), e.col_perm.end(), rng);
  return e;
}

namespace {
void check_permutation(const std::vector<Eigen::Index>& perm, Eigen::Index n, const char* what) {
  if (static_cast<Eigen::Index>(perm.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Eigen::Index v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " is not a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
}
}  // namespace

void EquivalencePair::validate(Eigen::Index n) const {
  if (row_phases.size() != n || col_phases.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "EquivalencePair: phase vector length differs from matrix order");
  check_permutation(row_perm, n, "row permutation");
  check_permutation(col_perm, n, "column permutation");
}

VerifiedChm VerifiedChm::verify(const PhaseMatrix& m, double tol) {
  const HadamardCheck check = is_hadamard(m, tol);
  if (!check)
    throw Error(ErrorKind::NotHadamard,
                "unitarity residual " + std::to_string(check.residual) + " exceeds " + std::to_string(tol));
  return {m, check.residual, tol};
}

PhaseMatrix unimodularize(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "unimodularize: matrix must be square");
  detail::require_finite(m, "unimodularize");
  RealMatrix phases(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      const cplx z = m(j, k);
      if (std::abs(z) < 1e-300) throw Error(ErrorKind::ZeroEntry, "unimodularize: entry has vanishing modulus");
      phases(j, k) = std::arg(z) / kTwoPi;
    }
  }
  return PhaseMatrix(phases);
}

double objective_z(const ComplexMatrix& x) {
  const Eigen::Index n = x.rows();
  ComplexMatrix gram = x * x.adjoint();
  gram.diagonal().array() -= static_cast<double>(n);
  return gram.norm();
}

double objective_z(const PhaseMatrix& m) { return objective_z(m.realize()); }

ComplexMatrix sinkhorn_step(const ComplexMatrix& m) {
  const double scale = std::sqrt(static_cast<double>(m.rows()));
  return scale * polar_unitary(unimodularize(m).realize());
}

PhaseMatrix dephase(const PhaseMatrix& m) {
  const RealMatrix& p = m.phases();
  const Eigen::Index n = m.order();
  if (n == 0) return m;
  RealMatrix r(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) r(j, k) = p(j, k) - p(j, 0) - p(0, k) + p(0, 0);
  r.row(0).setZero();
  r.col(0).setZero();
  return PhaseMatrix(r);
}

PhaseMatrix apply_equivalence(const PhaseMatrix& m, const EquivalencePair& e) {
  const Eigen::Index n = m.order();
  e.validate(n);
  RealMatrix r(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      r(j, k) = m(e.row_perm[sj], e.col_perm[sk]) + e.row_phases(j) + e.col_phases(k);
    }
  }
  return PhaseMatrix(r);
}

HadamardCheck is_hadamard(const PhaseMatrix& m, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "is_hadamard: tolerance must be positive");
  HadamardCheck check;
  check.tolerance = tol;
  const Eigen::Index n = m.order();
  check.residual = n == 0 ? 0.0 : objective_z(m) / static_cast<double>(n);
  check.accepted = check.residual <= tol;
  return check;
}

std::optional<int> butson_order(const PhaseMatrix& m, int q_max, double tol) {
  if (q_max < 2) throw Error(ErrorKind::InvalidArgument, "butson_order: q_max must be at least 2");
  const RealMatrix& p = m.phases();
  // The tolerance bounds the rounding error of q p itself. Scaling it by q
  // lets an isolated irrational phase match some q near 2^16 by chance.
  for (int q = 1; q <= q_max; ++q) {
    bool ok = true;
    for (Eigen::Index i = 0; i < p.size() && ok; ++i) {
      const double scaled = q * p(i);
      ok = std::abs(scaled - std::round(scaled)) <= tol;
    }
    if (ok) return q;
  }
  return std::nullopt;
}

}  // namespace chm
