#include "fluxforge/oned.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fluxforge {

double StepFunction::eval(double x) const {
    if (values.empty()) return offset;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    long idx = std::distance(breakpoints.begin(), it) - 1;
    idx = std::clamp<long>(idx, 0, static_cast<long>(values.size()) - 1);
    return offset + values[idx];
}

void StepFunction::validate() const {
    if (breakpoints.size() != values.size() + 1)
        throw std::invalid_argument("breakpoints must bracket the intervals");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("values must be finite");
}

StepFunction integer_step_projection(const std::vector<double>& samples, long K,
                                     double tol, double p) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    const long n = static_cast<long>(samples.size());
    const double h = 1.0 / n;

    // circular mean of the fractional parts locates the constant offset
    double cs = 0.0, sn = 0.0;
    for (double v : samples) {
        cs += std::cos(2.0 * M_PI * v);
        sn += std::sin(2.0 * M_PI * v);
    }
    double offset = std::atan2(sn, cs) / (2.0 * M_PI);
    if (offset < 0.0) offset += 1.0;
    if (offset >= 1.0 - 1e-9) offset = 0.0;  // canonical representative in [0,1)

    std::vector<long> level(n);
    double distp = 0.0;
    for (long i = 0; i < n; ++i) {
        long r = std::lround(samples[i] - offset);
        r = std::clamp(r, -K, K);
        level[i] = r;
        distp += std::pow(std::abs(samples[i] - offset - r), p) * h;
    }
    double dist = std::pow(distp, 1.0 / p);
    if (dist > tol) {
        std::ostringstream msg;
        msg << "samples are not an integer step function plus a constant at this "
               "resolution: L^p distance "
            << dist << " exceeds tolerance " << tol;
        throw std::runtime_error(msg.str());
    }

    StepFunction out;
    out.offset = offset;
    out.breakpoints.push_back(0.0);
    for (long i = 1; i < n; ++i) {
        if (level[i] != level[i - 1]) {
            out.values.push_back(static_cast<double>(level[i - 1]));
            out.breakpoints.push_back(i * h);
        }
    }
    out.values.push_back(static_cast<double>(level[n - 1]));
    out.breakpoints.push_back(1.0);
    out.validate();
    return out;
}

StepFunction weak_approx_sequence(const std::function<double(double)>& f, int levels) {
    if (levels < 0) throw std::invalid_argument("levels must be nonnegative");
    const long k_count = 1L << levels;
    const double len = 1.0 / k_count;

    StepFunction out;
    out.offset = 0.0;
    out.breakpoints.push_back(0.0);
    for (long k = 0; k < k_count; ++k) {
        const double a = k * len;
        const double b = (k + 1) * len;
        const double ck = interval_average(f, a, b);

        double value = ck > 0.0 ? std::ceil(ck) : std::floor(ck);
        double seg = value != 0.0 ? ck / (k_count * value) : 0.0;
        // the initial sub-segment carries the whole interval average
        double split = a + seg;
        if (value == 0.0 || split <= a) {
            out.values.push_back(0.0);
        } else if (split >= b) {
            out.values.push_back(value);
        } else {
            out.values.push_back(value);
            out.breakpoints.push_back(split);
            out.values.push_back(0.0);
        }
        out.breakpoints.push_back(b);
    }
    out.validate();
    return out;
}

double interval_average(const std::function<double(double)>& f, double a, double b,
                        int points) {
    const double h = (b - a) / points;
    double acc = 0.0;
    for (int i = 0; i < points; ++i) acc += f(a + (i + 0.5) * h);
    return acc / points;
}

}  // namespace fluxforge
