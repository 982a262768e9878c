#include "fluxforge/audit.hpp"

#include <cmath>
#include <random>

namespace fluxforge {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::integral: return "integral";
        case Verdict::non_integral: return "non-integral";
        default: return "inconclusive";
    }
}

namespace {

void finalize(FluxAuditReport& rep) {
    long evaluated = 0, passed = 0;
    rep.max_deviation = 0.0;
    rep.n_skipped = 0;
    for (const auto& s : rep.samples) {
        if (s.skipped) {
            ++rep.n_skipped;
            continue;
        }
        ++evaluated;
        rep.max_deviation = std::max(rep.max_deviation, s.deviation);
        if (s.deviation < rep.tolerance) ++passed;
    }
    rep.pass_fraction = evaluated > 0 ? static_cast<double>(passed) / evaluated : 0.0;
    if (evaluated == 0 || rep.n_skipped > static_cast<long>(rep.samples.size()) / 2)
        rep.verdict = Verdict::inconclusive;
    else
        rep.verdict = rep.pass_fraction >= 0.95 ? Verdict::integral : Verdict::non_integral;
}

FluxSample measure(const VectorField& V, const Point& x0, double rho, int M,
                   double grid_h) {
    FluxSample s;
    s.center = x0;
    s.rho = rho;
    if (rho < 2.0 * grid_h) {
        s.skipped = true;
        return s;
    }
    Cube c = cube_centered(x0, rho, V.dim());
    s.flux = boundary_flux(V, c, M);
    s.nearest = std::lround(s.flux);
    s.deviation = std::abs(s.flux - s.nearest);
    return s;
}

}  // namespace

FluxAuditReport integer_flux_scan(const VectorField& V, const AuditOptions& opt) {
    if (opt.tolerance <= 0.0 || opt.tolerance >= 0.5)
        throw std::invalid_argument("tolerance must be in (0, 0.5)");
    const int n = V.dim();
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    FluxAuditReport rep;
    rep.tolerance = opt.tolerance;
    rep.samples.reserve(static_cast<std::size_t>(opt.n_centers) * opt.n_radii);
    for (int i = 0; i < opt.n_centers; ++i) {
        Point x0{};
        for (int a = 0; a < n; ++a) x0[a] = unif(rng) - 0.5;
        const double r_max = 2.0 * dist_to_boundary(x0, n);
        for (int j = 0; j < opt.n_radii; ++j) {
            double rho = unif(rng) * r_max;
            rep.samples.push_back(measure(V, x0, rho, opt.quadrature_M, V.grid().h()));
        }
    }
    finalize(rep);
    return rep;
}

FluxAuditReport lipschitz_slice_check(const VectorField& V, const Point& x0,
                                      int n_levels, const AuditOptions& opt) {
    if (!inside_unit_cube(x0, V.dim()))
        throw std::invalid_argument("slice center must lie in Q_1(0)");
    if (n_levels < 1) throw std::invalid_argument("n_levels must be >= 1");

    // Level t of f_{x0} corresponds to the cube boundary of edge rho = 2t.
    const double r_max = 2.0 * dist_to_boundary(x0, V.dim());
    FluxAuditReport rep;
    rep.tolerance = opt.tolerance;
    rep.samples.reserve(n_levels);
    for (int k = 0; k < n_levels; ++k) {
        double rho = r_max * (k + 0.5) / n_levels;
        rep.samples.push_back(measure(V, x0, rho, opt.quadrature_M, V.grid().h()));
    }
    finalize(rep);
    return rep;
}

}  // namespace fluxforge
