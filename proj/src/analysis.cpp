#include "morsedec/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace morsedec {

namespace {

std::vector<Real> moving_average(const std::vector<Real>& v, int window) {
  if (window <= 1) return v;
  const int n = static_cast<int>(v.size());
  const int half = window / 2;
  std::vector<Real> out(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    Real acc = 0;
    for (int j = lo; j <= hi; ++j) acc += v[j];
    out[i] = acc / (hi - lo + 1);
  }
  return out;
}

struct SegmentFit {
  Real a, b, c, sse;
};

// f(t) = a + b min(t, t*) + c max(t - t*, 0), solved by 3x3 normal equations.
SegmentFit solve_for_breakpoint(const std::vector<Real>& t,
                                const std::vector<Real>& v, Real t_star) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  const int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i) {
    const Real u = std::min(t[i], t_star);
    const Real w = std::max(t[i] - t_star, 0.0);
    const Eigen::Vector3d row(1.0, u, w);
    m += row * row.transpose();
    rhs += row * v[i];
  }
  const Eigen::Vector3d sol = m.ldlt().solve(rhs);
  Real sse = 0;
  for (int i = 0; i < n; ++i) {
    const Real u = std::min(t[i], t_star);
    const Real w = std::max(t[i] - t_star, 0.0);
    const Real r = v[i] - (sol[0] + sol[1] * u + sol[2] * w);
    sse += r * r;
  }
  return {sol[0], sol[1], sol[2], sse};
}

}  // namespace

DecoherenceFit fit_two_segment(const std::vector<Real>& times,
                               const std::vector<Real>& values,
                               FitSource source,
                               const BreakpointFitOptions& options) {
  if (times.size() != values.size())
    throw std::invalid_argument("fit_two_segment: length mismatch");
  const int n = static_cast<int>(times.size());
  if (n < 50)
    throw std::invalid_argument(
        "fit_two_segment: need at least 50 samples spanning both regimes");

  const std::vector<Real> smooth = moving_average(values, options.smooth_window);

  int best = -1;
  SegmentFit best_fit{0, 0, 0, std::numeric_limits<Real>::infinity()};
  for (int i = 2; i < n - 2; ++i) {
    const SegmentFit fit = solve_for_breakpoint(times, smooth, times[i]);
    if (fit.sse < best_fit.sse) {
      best_fit = fit;
      best = i;
    }
  }

  DecoherenceFit result;
  result.t_d = times[best];
  result.pre_slope = best_fit.b;
  result.post_slope = best_fit.c;
  result.residual = std::sqrt(best_fit.sse / n);
  result.source = source;
  if (std::abs(result.pre_slope) <=
      options.slope_ratio_min * std::abs(result.post_slope))
    throw InconclusiveFit(
        "no breakpoint separates the slopes by the required ratio (pre " +
        std::to_string(result.pre_slope) + ", post " +
        std::to_string(result.post_slope) +
        "); the coupling may be too weak for the simulated span");
  return result;
}

DecoherenceResult detect_decoherence_time(const std::vector<Real>& times,
                                          const std::vector<Real>& entropy,
                                          const std::vector<Real>& purity,
                                          const BreakpointFitOptions& options) {
  DecoherenceResult result;
  result.from_entropy = fit_two_segment(times, entropy, FitSource::entropy, options);
  result.from_purity = fit_two_segment(times, purity, FitSource::purity, options);
  result.rel_gap = std::abs(result.from_entropy.t_d - result.from_purity.t_d) /
                   result.from_entropy.t_d;
  result.consistent = result.rel_gap <= 0.15;
  return result;
}

ExponentialLaw fit_exponential(const std::vector<std::pair<Real, Real>>& points) {
  if (points.size() < 4)
    throw std::invalid_argument("fit_exponential: need at least 4 points");
  Real sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  Real x_lo = points[0].first, x_hi = points[0].first;
  const int n = static_cast<int>(points.size());
  for (const auto& [x0, td] : points) {
    if (!(td > 0))
      throw std::domain_error("fit_exponential: nonpositive decoherence time");
    const Real y = std::log(td);
    sx += x0;
    sy += y;
    sxx += x0 * x0;
    sxy += x0 * y;
    syy += y * y;
    x_lo = std::min(x_lo, x0);
    x_hi = std::max(x_hi, x0);
  }
  const Real denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-14)
    throw std::domain_error("fit_exponential: degenerate x0 grid");
  const Real slope = (n * sxy - sx * sy) / denom;
  const Real intercept = (sy - slope * sx) / n;

  ExponentialLaw law;
  law.kappa = -slope;
  law.t_d0 = std::exp(intercept);
  law.x0_range = {x_lo, x_hi};
  const Real ss_tot = syy - sy * sy / n;
  Real ss_res = 0;
  for (const auto& [x0, td] : points) {
    const Real r = std::log(td) - (intercept + slope * x0);
    ss_res += r * r;
  }
  law.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  return law;
}

namespace {

// Standard peak prominence: descend from the peak on each side until a
// higher point (or the series edge); the prominence is the height above the
// higher of the two valley floors.
Real prominence_at(const std::vector<Real>& v, int peak) {
  const int n = static_cast<int>(v.size());
  Real left_min = v[peak];
  for (int i = peak - 1; i >= 0; --i) {
    if (v[i] > v[peak]) break;
    left_min = std::min(left_min, v[i]);
  }
  Real right_min = v[peak];
  for (int i = peak + 1; i < n; ++i) {
    if (v[i] > v[peak]) break;
    right_min = std::min(right_min, v[i]);
  }
  return v[peak] - std::max(left_min, right_min);
}

}  // namespace

std::vector<Revival> detect_revivals(const std::vector<Real>& times,
                                     const std::vector<Real>& autocorr,
                                     const RevivalOptions& options) {
  if (times.size() != autocorr.size())
    throw std::invalid_argument("detect_revivals: length mismatch");
  const int n = static_cast<int>(times.size());
  if (n < 5) return {};
  const Real span = times.back() - times.front();
  const Real t_min = times.front() + options.t_min_fraction * span;

  struct Peak {
    int index;
    Real prominence;
  };
  std::vector<Peak> peaks;
  for (int i = 1; i + 1 < n; ++i) {
    if (times[i] < t_min) continue;
    if (!(autocorr[i] > autocorr[i - 1] && autocorr[i] >= autocorr[i + 1]))
      continue;
    const Real prom = prominence_at(autocorr, i);
    if (prom >= options.prominence_threshold) peaks.push_back({i, prom});
  }
  if (peaks.empty()) return {};

  Real top = 0;
  for (const Peak& p : peaks) top = std::max(top, autocorr[p.index]);
  Real t_rev = times[peaks.back().index];
  for (const Peak& p : peaks)
    if (autocorr[p.index] >= options.full_height_fraction * top) {
      t_rev = times[p.index];
      break;
    }

  std::vector<Revival> out;
  for (const Peak& p : peaks) {
    const Real r = times[p.index] / t_rev;
    RevivalKind kind;
    if (std::abs(r - 0.25) <= options.fraction_tolerance)
      kind = RevivalKind::quarter;
    else if (std::abs(r - 0.5) <= options.fraction_tolerance)
      kind = RevivalKind::half;
    else if (std::abs(r - std::round(r)) <= options.fraction_tolerance &&
             std::round(r) >= 1.0)
      kind = RevivalKind::full;
    else
      continue;  // unclassifiable fragment between fractions
    out.push_back({times[p.index], kind, autocorr[p.index], p.prominence});
  }
  return out;
}

Real trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a - b,
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

std::vector<Real> sector_masses(const PhaseSpaceGrid& grid, Real x_c, Real p_c,
                                Real p_scale, int n_sectors) {
  if (n_sectors < 2) throw std::domain_error("sector_masses: need >= 2 sectors");
  std::vector<Real> mass(n_sectors, 0.0);
  Real total = 0;
  for (int k = 0; k < grid.spec.np; ++k) {
    for (int j = 0; j < grid.spec.nx; ++j) {
      const Real w = grid.values(k, j);
      const Real dxc = grid.x_at(j) - x_c;
      const Real dpc = (grid.p_at(k) - p_c) / p_scale;
      Real angle = std::atan2(dpc, dxc);
      if (angle < 0) angle += 2.0 * M_PI;
      int sector = static_cast<int>(angle / (2.0 * M_PI) * n_sectors);
      sector = std::min(sector, n_sectors - 1);
      mass[sector] += w;
      total += w;
    }
  }
  if (std::abs(total) < 1e-12)
    throw std::domain_error("sector_masses: vanishing total mass");
  for (Real& m : mass) m /= total;
  return mass;
}

}  // namespace morsedec
