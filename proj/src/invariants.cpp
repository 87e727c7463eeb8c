#include "chm/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace chm {

namespace {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double sum = 0.0;
  std::size_t count = 0;
};

// Quartet phases p_jk + p_lm - p_jm - p_lk, enumerated one (j, l) pair at a
// time. Each pair's n^2 values are sorted and runs closer than `merge_tol`
// are collapsed into intervals that keep their true extent, so clustering
// the intervals later cuts at exactly the same gaps as clustering the raw
// values would.
std::vector<Interval> quartet_intervals(const PhaseMatrix& m, double merge_tol) {
  const Eigen::Index n = m.order();
  const RealMatrix& p = m.phases();
  std::vector<Interval> out;
  std::vector<double> vals(static_cast<std::size_t>(n * n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      std::size_t idx = 0;
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index mm = 0; mm < n; ++mm)
          vals[idx++] = reduce_phase(p(j, k) + p(l, mm) - p(j, mm) - p(l, k));
      std::sort(vals.begin(), vals.end());
      Interval cur{vals[0], vals[0], vals[0], 1};
      for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] - cur.hi <= merge_tol) {
          cur.hi = vals[i];
          cur.sum += vals[i];
          ++cur.count;
        } else {
          out.push_back(cur);
          cur = {vals[i], vals[i], vals[i], 1};
        }
      }
      out.push_back(cur);
    }
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return out;
}

// Clusters on the circle: cut wherever the gap exceeds tol, then join the
// first and last clusters when they meet across 0.
std::vector<Interval> cluster(const std::vector<Interval>& sorted, double tol) {
  std::vector<Interval> clusters;
  for (const Interval& iv : sorted) {
    if (!clusters.empty() && iv.lo - clusters.back().hi <= tol) {
      Interval& c = clusters.back();
      c.hi = std::max(c.hi, iv.hi);
      c.sum += iv.sum;
      c.count += iv.count;
    } else {
      clusters.push_back(iv);
    }
  }
  if (clusters.size() > 1 && clusters.front().lo + 1.0 - clusters.back().hi <= tol) {
    Interval tail = clusters.back();
    clusters.pop_back();
    Interval& head = clusters.front();
    head.sum += tail.sum - static_cast<double>(tail.count);  // shift tail to just below 0
    head.count += tail.count;
  }
  return clusters;
}

}  // namespace

std::vector<cplx> HaagerupSet::values() const {
  std::vector<cplx> out;
  out.reserve(phases.size());
  for (double p : phases) out.push_back(std::polar(1.0, kTwoPi * p));
  return out;
}

bool HaagerupSet::contains_one(double tol) const {
  return std::any_of(phases.begin(), phases.end(), [&](double p) { return circular_distance(p, 0.0) <= tol; });
}

bool HaagerupSet::closed_under_conjugation(double tol) const {
  return std::all_of(phases.begin(), phases.end(), [&](double p) {
    return std::any_of(phases.begin(), phases.end(), [&](double q) { return circular_distance(p, -q) <= tol; });
  });
}

bool HaagerupSet::approx_equal(const HaagerupSet& other, double tol, bool compare_multiplicities) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (circular_distance(phases[i], other.phases[i]) > tol) return false;
    if (compare_multiplicities && multiplicities[i] != other.multiplicities[i]) return false;
  }
  return true;
}

RealMatrix defect_system(const PhaseMatrix& m) {
  const Eigen::Index n = m.order();
  const RealMatrix& p = m.phases();
  RealMatrix sys = RealMatrix::Zero(n * (n - 1), n * n);
  Eigen::Index row = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = j + 1; l < n; ++l, row += 2) {
      for (Eigen::Index k = 0; k < n; ++k) {
        const double angle = kTwoPi * (p(j, k) - p(l, k));
        const double re = std::cos(angle);
        const double im = std::sin(angle);
        sys(row, j * n + k) += re;
        sys(row, l * n + k) -= re;
        sys(row + 1, j * n + k) += im;
        sys(row + 1, l * n + k) -= im;
      }
    }
  }
  return sys;
}

std::size_t defect(const PhaseMatrix& m, double rank_rel_tol) {
  VerifiedChm::verify(m, 1e-8);
  const auto n = static_cast<std::int64_t>(m.order());
  const auto rank = static_cast<std::int64_t>(numerical_rank(defect_system(m), rank_rel_tol));
  const std::int64_t d = n * n - (2 * n - 1) - rank;
  if (d < 0) {
    std::clog << "warning: defect rank " << rank << " exceeds n^2 - (2n - 1); clamping to 0\n";
    return 0;
  }
  return static_cast<std::size_t>(d);
}

HaagerupSet haagerup_set(const PhaseMatrix& m, double phase_tol) {
  if (!(phase_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "haagerup_set: phase_tol must be positive");
  HaagerupSet set;
  if (m.order() == 0) return set;
  for (const Interval& c : cluster(quartet_intervals(m, phase_tol * 1e-3), phase_tol)) {
    set.phases.push_back(reduce_phase(c.sum / static_cast<double>(c.count)));
    set.multiplicities.push_back(c.count);
  }
  // Representatives of a wrapped cluster can land anywhere; restore order.
  std::vector<std::size_t> order(set.phases.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return set.phases[a] < set.phases[b]; });
  HaagerupSet sorted;
  for (std::size_t i : order) {
    sorted.phases.push_back(set.phases[i]);
    sorted.multiplicities.push_back(set.multiplicities[i]);
  }
  return sorted;
}

HaagerupCount haagerup_count(const PhaseMatrix& m, double phase_tol) {
  if (!(phase_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "haagerup_count: phase_tol must be positive");
  if (m.order() == 0) return {0, true};
  const auto intervals = quartet_intervals(m, 0.5 * phase_tol * 1e-3);
  const std::size_t at = cluster(intervals, phase_tol).size();
  const std::size_t half = cluster(intervals, 0.5 * phase_tol).size();
  const std::size_t twice = cluster(intervals, 2.0 * phase_tol).size();
  return {at, at == half && at == twice};
}

std::size_t haagerup_cardinality(const PhaseMatrix& m, double phase_tol) {
  const HaagerupCount c = haagerup_count(m, phase_tol);
  if (!c.stable)
    throw Error(ErrorKind::Unstable, "Haagerup count " + std::to_string(c.count) +
                                         " changes when phase_tol is halved or doubled; re-solve the matrix");
  return c.count;
}

std::uint64_t symmetric_haagerup_bound(std::int64_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "symmetric_haagerup_bound: n must be at least 2");
  const auto tau = static_cast<std::uint64_t>(n * (n - 1) / 2);
  return 1 + tau + tau * tau;
}

bool is_symmetric_dephased(const PhaseMatrix& m, double tol) {
  const PhaseMatrix d = dephase(m);
  return d.max_distance(d.transpose()) <= tol;
}

Certificate certify_inequivalent(const PhaseMatrix& a, const PhaseMatrix& b, const ProfileTolerances& tol) {
  VerifiedChm::verify(a, tol.hadamard_tol);
  VerifiedChm::verify(b, tol.hadamard_tol);
  Certificate cert;
  if (a.order() != b.order()) {
    cert.verdict = CertificateVerdict::Inequivalent;
    cert.reason = CertificateReason::Order;
    cert.detail = "orders " + std::to_string(a.order()) + " vs " + std::to_string(b.order());
    return cert;
  }
  const std::size_t da = defect(a, tol.rank_rel_tol);
  const std::size_t db = defect(b, tol.rank_rel_tol);
  if (da != db) {
    cert.verdict = CertificateVerdict::Inequivalent;
    cert.reason = CertificateReason::Defect;
    cert.detail = "defect " + std::to_string(da) + " vs " + std::to_string(db);
    return cert;
  }
  const HaagerupCount ha = haagerup_count(a, tol.phase_tol);
  const HaagerupCount hb = haagerup_count(b, tol.phase_tol);
  if (ha.stable && hb.stable && ha.count != hb.count) {
    cert.verdict = CertificateVerdict::Inequivalent;
    cert.reason = CertificateReason::Haagerup;
    cert.detail = "haagerup " + std::to_string(ha.count) + " vs " + std::to_string(hb.count);
    return cert;
  }
  cert.detail = "defect and Haagerup cardinality agree";
  return cert;
}

InvariantProfile profile(const PhaseMatrix& m, const ProfileTolerances& tol) {
  const VerifiedChm v = VerifiedChm::verify(m, tol.hadamard_tol);
  InvariantProfile p;
  p.unitarity_residual = v.unitarity_residual;
  p.defect = defect(m, tol.rank_rel_tol);
  const HaagerupCount h = haagerup_count(m, tol.phase_tol);
  p.haagerup_card = h.count;
  p.haagerup_stable = h.stable;
  p.butson_order = butson_order(m, tol.butson_q_max, tol.butson_tol);
  p.symmetric = is_symmetric_dephased(m, tol.symmetry_tol);
  return p;
}

std::string to_string(const InvariantProfile& p) {
  std::ostringstream os;
  os << "d=" << p.defect << " #L=" << p.haagerup_card << (p.haagerup_stable ? "" : "(unstable)") << " q=";
  if (p.butson_order)
    os << *p.butson_order;
  else
    os << "none";
  os << " symmetric=" << (p.symmetric ? "yes" : "no") << " residual=" << p.unitarity_residual;
  return os.str();
}

}  // namespace chm
