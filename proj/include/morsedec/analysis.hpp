#pragma once

#include "morsedec/types.hpp"
#include "morsedec/wigner.hpp"

#include <utility>
#include <vector>

namespace morsedec {

enum class FitSource { entropy, purity };

/// Two-segment continuous piecewise-linear fit; the breakpoint is the
/// decoherence time. pre/post slopes must separate by at least the
/// configured ratio or the fit is inconclusive.
struct DecoherenceFit {
  Real t_d = 0;
  Real pre_slope = 0;
  Real post_slope = 0;
  Real residual = 0;  ///< RMS of the fit
  FitSource source = FitSource::entropy;
};

struct BreakpointFitOptions {
  int smooth_window = 5;      ///< centered moving average applied first
  Real slope_ratio_min = 3.0; ///< |pre| must exceed this multiple of |post|
};

/// Least-squares two-segment fit over all interior breakpoint candidates.
/// Requires >= 50 samples; throws InconclusiveFit when no breakpoint
/// separates the slopes by the required ratio.
DecoherenceFit fit_two_segment(const std::vector<Real>& times,
                               const std::vector<Real>& values,
                               FitSource source,
                               const BreakpointFitOptions& options = {});

struct DecoherenceResult {
  DecoherenceFit from_entropy;
  DecoherenceFit from_purity;
  Real rel_gap = 0;        ///< |t_d(S) - t_d(purity)| / t_d(S)
  bool consistent = false; ///< rel_gap <= 0.15
};

/// Breakpoint from the entropy series, cross-checked against the purity
/// series; the two extractions must agree within 15% to count as consistent.
DecoherenceResult detect_decoherence_time(const std::vector<Real>& times,
                                          const std::vector<Real>& entropy,
                                          const std::vector<Real>& purity,
                                          const BreakpointFitOptions& options = {});

struct ExponentialLaw {
  Real t_d0 = 0;   ///< intercept, same units as the input t_d values
  Real kappa = 0;
  std::pair<Real, Real> x0_range{0, 0};
  Real r_squared = 0;
};

/// Linear least squares on (x0, ln t_d): t_d(x0) = t_d0 exp(-kappa x0).
ExponentialLaw fit_exponential(const std::vector<std::pair<Real, Real>>& points);

enum class RevivalKind { quarter, half, full };

struct Revival {
  Real time = 0;
  RevivalKind kind = RevivalKind::full;
  Real height = 0;
  Real prominence = 0;
};

struct RevivalOptions {
  Real prominence_threshold = 0.1;
  Real t_min_fraction = 0.02;   ///< skip the initial plateau
  Real full_height_fraction = 0.8;  ///< peaks this close to the max count as full
  Real fraction_tolerance = 0.08;
};

/// Prominence-filtered peaks of the autocorrelation, classified by the
/// nearest rational fraction (1/4, 1/2, integer) of the fitted revival time.
/// The revival time is the earliest retained peak whose height reaches
/// `full_height_fraction` of the strongest retained peak.
std::vector<Revival> detect_revivals(const std::vector<Real>& times,
                                     const std::vector<Real>& autocorr,
                                     const RevivalOptions& options = {});

/// Half the trace norm of a - b; in [0, 1] for density matrices.
Real trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Wigner mass split into equal angular sectors around (x_c, p_c), with
/// momentum rescaled by p_scale so the classical orbit is roughly round.
/// Returns per-sector fractions of the total mass.
std::vector<Real> sector_masses(const PhaseSpaceGrid& grid, Real x_c, Real p_c,
                                Real p_scale, int n_sectors = 8);

}  // namespace morsedec
