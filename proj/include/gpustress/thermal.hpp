#pragma once

#include <span>

#include "gpustress/core.hpp"
#include "gpustress/counters.hpp"

namespace gpustress {

// Least-squares fit of T(t) = T_inf + (T0 - T_inf) * exp(-(t - t_first)/tau)
// over (T_inf, T0, tau). The initial estimate comes from a log-linear
// regression against an asymptote guess one degree beyond the observed
// extremum; a damped Gauss-Newton refinement follows (at most 200
// iterations, convergence on relative parameter step < 1e-9).
//
// Bounds: tau in [1 s, 1e4 s], T_inf in [-20, 150] degC. Fits outside the
// bounds are projected back; a parameter ending on a bound is flagged.
//
// Degenerate inputs:
//   - a constant series yields T_inf = T0 = value, t_r = 0, flag "no transient"
//   - non-convergence returns the best-effort parameters, flag "unconverged"
//
// Throws std::invalid_argument on fewer than 10 samples or a zero time span.
ThermalFit fit_exponential(std::span<const TelemetrySample> telemetry);

// Mean observed temperature over the steady-state window [t_r, end of trace].
// When the window contains no samples the fitted asymptote is returned and a
// warning is emitted.
double steady_state_temp(std::span<const TelemetrySample> telemetry,
                         const ThermalFit& fit, Warnings* warnings = nullptr);

inline constexpr double kRiseTimeFactor = 2.9957322735539909;  // ln(20)

inline constexpr double kTauMin = 1.0;
inline constexpr double kTauMax = 1e4;
inline constexpr double kTInfMin = -20.0;
inline constexpr double kTInfMax = 150.0;

}  // namespace gpustress
