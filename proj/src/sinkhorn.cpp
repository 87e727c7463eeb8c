#include "chm/sinkhorn.hpp"

#include <cmath>
#include <random>

#include "chm/parallel.hpp"

namespace chm {

ComplexMatrix random_seed(Eigen::Index n, std::uint64_t rng_seed) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "random_seed: order must be at least 2");
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix x(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      cplx z;
      do {
        const double re = normal(rng);
        const double im = normal(rng);
        z = {re, im};
      } while (std::abs(z) < 1e-12);
      x(j, k) = z;
    }
  }
  return x;
}

namespace {

// pi_1 on a complex matrix without the round trip through phases.
ComplexMatrix normalize_entries(const ComplexMatrix& x) {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = std::abs(x(i));
    if (!(r >= 1e-300)) throw Error(ErrorKind::ZeroEntry, "sinkhorn: iterate has a vanishing entry");
    out(i) = x(i) / r;
  }
  return out;
}

// sqrt(n) times the unitary polar factor of u, given gram = u^H u - n I.
// Near unitarity a few Newton-Schulz steps Y <- Y - Y (Y^H Y - I) / 2 reach
// machine precision for the cost of matrix products; otherwise use the SVD.
ComplexMatrix scaled_polar(const ComplexMatrix& u, const ComplexMatrix& gram, double z) {
  const Eigen::Index n = u.rows();
  const double dn = static_cast<double>(n);
  const double scale = std::sqrt(dn);
  if (z / dn < 0.5) {
    ComplexMatrix y = u / scale;
    ComplexMatrix e = gram / dn;
    double err = z / dn;
    for (int k = 0; k < 60 && err > 1e-15; ++k) {
      y -= 0.5 * (y * e);
      e.noalias() = y.adjoint() * y;
      e.diagonal().array() -= 1.0;
      const double next = e.norm();
      if (next >= err) break;
      err = next;
    }
    if (err <= 1e-13) return scale * y;
  }
  return scale * polar_unitary(u);
}

}  // namespace

SinkhornOutcome run(const ComplexMatrix& seed, const SinkhornConfig& config) {
  if (!(config.z_tol > 0.0) || config.stall_window < 1)
    throw Error(ErrorKind::InvalidArgument, "sinkhorn: z_tol must be positive and stall_window at least 1");
  if (seed.rows() != seed.cols() || seed.rows() < 1)
    throw Error(ErrorKind::DimensionMismatch, "sinkhorn: seed must be square");
  detail::require_finite(seed, "sinkhorn");

  SinkhornOutcome out;
  std::vector<double> window(config.stall_window, 0.0);
  ComplexMatrix x = seed;
  ComplexMatrix unimodular;
  ComplexMatrix gram;

  for (std::size_t it = 0;; ++it) {
    unimodular = normalize_entries(x);
    // ||X X^H - n I|| equals ||X^H X - n I|| for square X; the latter is reused below.
    gram.noalias() = unimodular.adjoint() * unimodular;
    gram.diagonal().array() -= static_cast<double>(seed.rows());
    const double z = gram.norm();
    if (config.record_trace) out.trace.push_back(z);
    out.final_z = z;
    out.iterations = it;
    if (z <= config.z_tol) {
      out.converged = true;
      out.stop = SinkhornStop::Converged;
      break;
    }
    const std::size_t slot = it % config.stall_window;
    if (it >= config.stall_window && window[slot] - z < config.stall_eps) {
      out.stop = SinkhornStop::Stalled;
      break;
    }
    window[slot] = z;
    if (it >= config.max_iterations) {
      out.stop = SinkhornStop::MaxIterations;
      break;
    }
    x = scaled_polar(unimodular, gram, z);
  }
  out.matrix = dephase(unimodularize(unimodular));
  return out;
}

SearchResult search(Eigen::Index n, std::size_t num_seeds, const SinkhornConfig& config,
                    const ProfileTolerances& tol) {
  if (n < 2 || n > 64) throw Error(ErrorKind::InvalidArgument, "search: order must lie in [2, 64]");
  std::vector<std::optional<ProfiledOutcome>> slots(num_seeds);
  SinkhornConfig single = config;
  single.record_trace = false;
  parallel_for(num_seeds, config.threads, [&](std::size_t i) {
    SinkhornOutcome o = run(random_seed(n, mix_seed(config.rng_seed, i)), single);
    o.seed_id = i;
    if (!o.converged) return;
    InvariantProfile p = profile(o.matrix, tol);
    slots[i] = ProfiledOutcome{std::move(o), p};
  });

  SearchResult result;
  result.attempted = num_seeds;
  for (auto& s : slots) {
    if (!s) {
      ++result.failed;
      continue;
    }
    ++result.summary[ProfileKey{s->profile.defect, s->profile.haagerup_card, s->profile.butson_order}];
    result.outcomes.push_back(std::move(*s));
  }
  return result;
}

}  // namespace chm
