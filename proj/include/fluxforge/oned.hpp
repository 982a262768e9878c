#pragma once

#include <functional>
#include <vector>

#include <cstddef>

namespace fluxforge {

/// Piecewise-constant function on [0,1): value_k on [breakpoints_k,
/// breakpoints_{k+1}) plus a constant offset. For integer step functions the
/// values are integers stored as doubles.
struct StepFunction {
    std::vector<double> breakpoints;  // strictly increasing, first 0, last 1
    std::vector<double> values;       // one per interval
    double offset = 0.0;

    double eval(double x) const;
    void validate() const;
};

/// Project grid samples of an integer-plus-constant function onto an integer
/// step function: estimate the offset by the circular mean of the fractional
/// parts, truncate levels at K, compress runs of grid cells into intervals.
/// Throws (with the measured distance) when the samples are farther than tol
/// from every integer-plus-constant step function at this resolution.
StepFunction integer_step_projection(const std::vector<double>& samples, long K,
                                     double tol, double p = 2.0);

/// The dyadic-average construction: on each I_k = [(k-1)/2^n, k/2^n) place
/// the value ceil(c_k) on an initial segment of length c_k/(2^n ceil(c_k))
/// and 0 elsewhere (floor and a sign-flipped segment for negative averages;
/// zero averages give the zero function). Interval averages are preserved
/// exactly.
StepFunction weak_approx_sequence(const std::function<double(double)>& f, int levels);

/// Average of f over [a,b) by composite midpoint; the shared quadrature that
/// defines interval averages at desk scale.
double interval_average(const std::function<double(double)>& f, double a, double b,
                        int points = 64);

}  // namespace fluxforge
