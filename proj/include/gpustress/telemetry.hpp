#pragma once

#include <span>

#include "gpustress/core.hpp"
#include "gpustress/counters.hpp"

namespace gpustress {

// Energy drawn over the trace window, from the cumulative energy counter.
struct EnergySummary {
    double total_kj = 0.0;  // (last - first) counter reading, kilojoules
    double rate_w = 0.0;    // total energy divided by the trace time span
};

// Counter-based energy over the trace window. Requires at least two samples
// and a positive time span (enforced by validate_trace).
EnergySummary energy(std::span<const TelemetrySample> telemetry);

// Independent estimate: trapezoidal integration of the power series, joules.
// Used to cross-check the cumulative counter; the two should agree closely
// when the counter is well behaved.
double energy_from_power(std::span<const TelemetrySample> telemetry);

// Clock deficit: how far the mean SM clock sits below the peak observed in
// the same trace, MHz. Zero for a flat clock profile; grows when thermal
// throttling drags the sustained clock down.
double delta_cf(std::span<const TelemetrySample> telemetry);

}  // namespace gpustress
