// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/uncertainty.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "hbtcal/error.hpp"

namespace hbtcal {

UncertaintyInputs exact_inputs(const DetectorSetup& setup, const CoincidenceVector& c_obs) {
  UncertaintyInputs in;
  for (double e : setup.efficiencies()) in.eta.push_back({e, e});
  for (double c : c_obs.entries()) in.c_obs.push_back({c, c});
  return in;
}

std::vector<Interval> relative_eta_box(const DetectorSetup& setup, double relative) {
  require(relative >= 0.0 && relative < 1.0, ErrorCode::invalid_argument, "relative eta ambiguity must be in [0, 1)");
  std::vector<Interval> box;
  for (double e : setup.efficiencies()) box.push_back({e * (1.0 - relative), e * (1.0 + relative)});
  return box;
}

double hoeffding_half_width(int detectors, std::uint64_t pulses, double delta) {
  require(pulses >= 1, ErrorCode::invalid_argument, "confidence intervals need N >= 1");
  require(delta > 0.0 && delta < 1.0, ErrorCode::invalid_argument, "delta must be in (0, 1)");
  require(detectors >= 1 && detectors <= kMaxDetectors, ErrorCode::invalid_argument, "detector count out of range");
  const double subsets = std::ldexp(1.0, detectors) - 1.0;
  return std::sqrt(std::log(2.0 * subsets / delta) / (2.0 * static_cast<double>(pulses)));
}

std::vector<Interval> confidence_intervals(int detectors, const std::vector<std::uint64_t>& subset_clicks,
                                           std::uint64_t pulses, double delta) {
  const double h = hoeffding_half_width(detectors, pulses, delta);
  const std::size_t masks = std::size_t{1} << detectors;
  require(subset_clicks.size() == masks, ErrorCode::invalid_argument, "need one click count per detector subset");
  std::vector<Interval> out(static_cast<std::size_t>(detectors) + 1, Interval{0.0, 0.0});
  std::vector<int> count(out.size(), 0);
  out[0] = {1.0, 1.0};
  const auto n = static_cast<double>(pulses);
  for (std::size_t mask = 1; mask < masks; ++mask) {
    require(subset_clicks[mask] <= pulses, ErrorCode::invalid_argument,
            "subset " + std::to_string(mask) + " has more clicks than pulses");
    const double f = static_cast<double>(subset_clicks[mask]) / n;
    const auto r = static_cast<std::size_t>(std::popcount(mask));
    out[r].lo += std::max(0.0, f - h);
    out[r].hi += std::min(1.0, f + h);
    ++count[r];
  }
  for (std::size_t r = 1; r < out.size(); ++r) {
    out[r].lo /= count[r];
    out[r].hi /= count[r];
  }
  return out;
}

namespace {

void check_inputs(const UncertaintyInputs& in) {
  const auto d = in.eta.size();
  require(d >= 1 && d <= static_cast<std::size_t>(kMaxDetectors), ErrorCode::invalid_argument,
          "eta box needs 1..24 intervals");
  require(in.c_obs.size() == d + 1, ErrorCode::invalid_argument, "need D+1 coincidence intervals");
  require(in.grid_points >= 2, ErrorCode::invalid_argument, "eta grid needs at least 2 points per dimension");
  for (const auto& e : in.eta) {
    require(e.lo <= e.hi && e.lo > 0.0 && e.hi < 1.0, ErrorCode::invalid_argument,
            "eta intervals must be nonempty and inside (0, 1)");
  }
  for (const auto& c : in.c_obs) {
    require(c.lo <= c.hi && c.lo >= 0.0 && c.hi <= 1.0, ErrorCode::invalid_argument,
            "coincidence intervals must be nonempty and inside [0, 1]");
  }
  require(in.c_obs[0].lo == 1.0 && in.c_obs[0].hi == 1.0, ErrorCode::invalid_argument,
          "the zero-fold coincidence is 1 by definition");
}

struct Extremes {
  std::vector<double> lower;
  std::vector<double> upper;
};

double extremal_projection(const ReciprocalBasis& basis, int i, const std::vector<Interval>& c, bool minimize) {
  const auto& row = basis.scaled_rows[static_cast<std::size_t>(i)];
  double sum = 0.0;
  for (std::size_t r = 0; r < row.size(); ++r) {
    const bool take_low = (row[r] >= 0.0) == minimize;
    sum += row[r] * ((take_low ? c[r].lo : c[r].hi) / basis.row_scale[r]);
  }
  return sum;
}

Extremes evaluate(const DetectorSetup& setup, const std::vector<Interval>& c) {
  const BoundsEngine engine(setup);
  const int d = setup.detectors();
  Extremes out;
  for (int n = 0; n <= d; ++n) {
    const auto& ub = n == d || upper_basis_for(d, n) == Basis::S ? engine.s_basis() : engine.s_prime_basis();
    const auto& lb = n < d && lower_basis_for(d, n) == Basis::S ? engine.s_basis() : engine.s_prime_basis();
    out.upper.push_back(extremal_projection(ub, n, c, false));
    out.lower.push_back(extremal_projection(lb, n, c, true));
  }
  return out;
}

std::string describe_point(const std::vector<double>& eta) {
  std::string s = "eta=(";
  for (std::size_t i = 0; i < eta.size(); ++i) s += (i ? "," : "") + std::to_string(eta[i]);
  return s + ")";
}

class Scanner {
 public:
  explicit Scanner(const UncertaintyInputs& in) : in_(in) {
    const auto size = in.eta.size() + 1;
    lower_.assign(size, std::numeric_limits<double>::infinity());
    upper_.assign(size, -std::numeric_limits<double>::infinity());
  }

  /// Returns false when the point was skipped.
  bool visit(const std::vector<double>& eta, Extremes* values = nullptr) {
    const DetectorSetup setup(eta);
    const auto report = validate_setup(setup);
    if (!report.valid()) {
      std::string msg = describe_point(eta) + ":";
      for (const auto& v : report.violations) msg += " " + v;
      skipped_.push_back(std::move(msg));
      return false;
    }
    auto e = evaluate(setup, in_.c_obs);
    ++evaluated_;
    for (std::size_t n = 0; n < lower_.size(); ++n) {
      lower_[n] = std::min(lower_[n], e.lower[n]);
      upper_[n] = std::max(upper_[n], e.upper[n]);
    }
    if (values) *values = std::move(e);
    return true;
  }

  WorstCaseResult finish() {
    require(evaluated_ > 0, ErrorCode::invalid_argument, "every point of the eta box fails the efficiency conditions");
    WorstCaseResult out;
    const int d = static_cast<int>(in_.eta.size());
    auto& b = out.bounds;
    b.detectors = d;
    b.lower_raw = lower_;
    b.upper_raw = upper_;
    for (int n = 0; n < d; ++n) {
      b.lower_basis.push_back(lower_basis_for(d, n));
      b.upper_basis.push_back(upper_basis_for(d, n));
    }
    b.lower_basis.push_back(Basis::SPrime);
    b.upper_basis.push_back(Basis::S);
    b.clamp();
    out.points_evaluated = evaluated_;
    out.skipped = std::move(skipped_);
    return out;
  }

 private:
  const UncertaintyInputs& in_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> skipped_;
  int evaluated_ = 0;
};

std::vector<double> shifted(const std::vector<Interval>& box, double s) {
  std::vector<double> eta;
  for (const auto& e : box) eta.push_back(s >= 1.0 ? e.hi : e.lo + s * (e.hi - e.lo));
  return eta;
}

}  // namespace

WorstCaseResult worstcase_bounds(const UncertaintyInputs& in) {
  check_inputs(in);
  Scanner scan(in);
  const int g = in.grid_points;
  const auto d = in.eta.size();

  if (in.scan == EtaScan::uniform_shift) {
    std::vector<Extremes> values(static_cast<std::size_t>(g));
    std::vector<bool> ok(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
      const auto i = static_cast<std::size_t>(k);
      ok[i] = scan.visit(shifted(in.eta, static_cast<double>(k) / (g - 1)), &values[i]);
    }
    // Refine each bound on a finer grid around its best coarse point.
    for (std::size_t n = 0; n <= d; ++n) {
      for (int side = 0; side < 2; ++side) {
        int best = -1;
        for (int k = 0; k < g; ++k) {
          const auto i = static_cast<std::size_t>(k);
          if (!ok[i]) continue;
          const double v = side == 0 ? values[i].lower[n] : -values[i].upper[n];
          const double w = best < 0 ? 0.0
                                    : (side == 0 ? values[static_cast<std::size_t>(best)].lower[n]
                                                 : -values[static_cast<std::size_t>(best)].upper[n]);
          if (best < 0 || v < w) best = k;
        }
        if (best < 0) continue;
        const double lo = std::max(0.0, (best - 1.0) / (g - 1));
        const double hi = std::min(1.0, (best + 1.0) / (g - 1));
        for (int k = 1; k < g - 1; ++k) {
          scan.visit(shifted(in.eta, lo + (hi - lo) * k / (g - 1)));
        }
      }
    }
    return scan.finish();
  }

  // Full grid over every eta_i.
  std::vector<int> index(d, 0);
  while (true) {
    std::vector<double> eta(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double s = static_cast<double>(index[i]) / (g - 1);
      eta[i] = index[i] == g - 1 ? in.eta[i].hi : in.eta[i].lo + s * (in.eta[i].hi - in.eta[i].lo);
    }
    scan.visit(eta);
    std::size_t pos = 0;
    while (pos < d && ++index[pos] == g) index[pos++] = 0;
    if (pos == d) break;
  }
  return scan.finish();
}

PropagationEstimate propagation_estimate(const DetectorSetup& setup, const CoincidenceVector& c_obs,
                                         const std::vector<double>& relative_c, double relative_eta) {
  const int d = setup.detectors();
  require(c_obs.detectors() == d, ErrorCode::invalid_argument, "coincidence vector does not match setup");
  require(relative_c.size() == static_cast<std::size_t>(d) + 1, ErrorCode::invalid_argument,
          "need one relative error per fold");
  require(relative_eta >= 0.0, ErrorCode::invalid_argument, "relative eta error must be nonnegative");
  PropagationEstimate out;
  std::vector<double> normalized(static_cast<std::size_t>(d) + 1, 1.0);
  for (int r = 1; r <= d; ++r) normalized[static_cast<std::size_t>(r)] = c_obs[r] / diagonal_coincidence(setup, r);
  out.p_estimate.push_back(1.0 - normalized[1]);
  for (int n = 1; n < d; ++n) out.p_estimate.push_back(normalized[static_cast<std::size_t>(n)]);

  const double p0 = out.p_estimate[0];
  const double p1 = normalized[1];
  out.relative.push_back(p0 > 0.0 ? p1 / p0 * (std::abs(relative_c[1]) + relative_eta)
                                  : std::numeric_limits<double>::quiet_NaN());
  for (int n = 1; n < d; ++n) {
    out.relative.push_back(std::abs(relative_c[static_cast<std::size_t>(n)]) + n * relative_eta);
  }
  for (int n = 0; n < d; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.absolute.push_back(out.relative[i] * out.p_estimate[i]);
  }
  out.weak_regime = true;
  for (int n = 1; n + 1 < d; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.weak_regime = out.weak_regime && out.p_estimate[i] >= 10.0 * std::abs(out.p_estimate[i + 1]);
  }
  return out;
}

double propagation_estimate_at(const DetectorSetup& setup, const CoincidenceVector& c_obs,
                               const std::vector<double>& relative_c, double relative_eta, int n) {
  require(n >= 0 && n < setup.detectors(), ErrorCode::invalid_argument, "n outside 0..D-1");
  const auto est = propagation_estimate(setup, c_obs, relative_c, relative_eta);
  require(n > 0 || est.p_estimate[0] > 0.0, ErrorCode::diagnostic_unavailable,
          "p_0 estimate vanishes; the n = 0 estimate is undefined");
  return est.relative[static_cast<std::size_t>(n)];
}

}  // namespace hbtcal
