#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fluxforge/quadrature.hpp"

namespace fluxforge {

enum class Verdict { integral, non_integral, inconclusive };

std::string to_string(Verdict v);

struct FluxSample {
    Point center{};
    double rho = 0.0;
    double flux = 0.0;
    long nearest = 0;
    double deviation = 0.0;
    bool skipped = false;  // rho below grid scale, counted as inconclusive
};

/// Evidence that a field has (or lacks) integer-valued fluxes, at one
/// quadrature resolution. Not a proof.
struct FluxAuditReport {
    std::vector<FluxSample> samples;
    double pass_fraction = 0.0;  // over evaluated samples
    double max_deviation = 0.0;
    long n_skipped = 0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

struct AuditOptions {
    double tolerance = 1e-2;
    int n_centers = 50;
    int n_radii = 20;
    std::uint64_t seed = 42;
    int quadrature_M = 256;
};

/// Sample centers x_0 uniformly in Q_1(0) and edges rho uniformly in
/// (0, 2 dist_inf(x_0, boundary)); flag each cube flux by its distance to the
/// nearest integer. Verdict is integral iff at least 95% of the evaluated
/// samples pass; inconclusive when more than half the draws fall below grid
/// scale.
FluxAuditReport integer_flux_scan(const VectorField& V, const AuditOptions& opt);

/// Slicing check along f_{x0} = min(||. - x0||_inf, r_{x0}/2): the level sets
/// are concentric cube boundaries, so this reduces to a radial family of cube
/// fluxes around x0.
FluxAuditReport lipschitz_slice_check(const VectorField& V, const Point& x0,
                                      int n_levels, const AuditOptions& opt);

}  // namespace fluxforge
