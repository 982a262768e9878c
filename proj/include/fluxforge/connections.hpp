#pragma once

#include <optional>
#include <vector>

#include "fluxforge/field.hpp"

namespace fluxforge {

/// Polyline 1-current with positive integer multiplicities: segments are
/// oriented a -> b, so the boundary is mult*(delta_b - delta_a). Endpoints on
/// the domain boundary carry no charge against test functions vanishing
/// there.
struct Segment {
    Point a{};
    Point b{};
    long mult = 1;
};

struct OneCurrent {
    int dim = 0;
    std::vector<Segment> segments;

    double mass() const {
        double m = 0.0;
        for (const auto& s : segments) m += s.mult * euclid_dist(s.a, s.b, dim);
        return m;
    }
};

/// Signed endpoint multiset of a current, with boundary-incident endpoints
/// discarded, coincident interior points merged and zero degrees dropped.
ChargeSet boundary_of_current(const OneCurrent& current);

/// The input-order matching construction: positives are visited in order,
/// each consuming negatives until its supply is exhausted; any net degree is
/// wired to the given boundary point. The interior boundary of the result
/// equals the charge set exactly.
OneCurrent greedy_connection(const ChargeSet& charges, int dim,
                             std::optional<Point> boundary_point = std::nullopt);

struct MinimalConnection {
    OneCurrent current;
    double mass = 0.0;
    // Optimal transport potentials at the charges (boundary normalized to 0),
    // used to build the dual certificate.
    std::vector<double> potentials;
};

/// Least-mass connection: a transportation problem between positive and
/// negative charges with a boundary node of unlimited capacity; arc costs are
/// Euclidean distances, boundary arcs cost 1/2 - ||x||_inf. Solved exactly by
/// successive shortest augmenting paths with potentials.
MinimalConnection minimal_connection(const ChargeSet& charges, int dim);

struct DualCertificate {
    int grid_res = 0;
    std::vector<double> phi;       // grid-sampled potential, res^n cells
    double value = 0.0;            // sum_j d_j phi(x_j), exact evaluation
    double feasibility_residual = 0.0;  // max adjacent-cell slope minus 1, clamped
};

/// 1-Lipschitz potential vanishing on the boundary that attains the minimal
/// mass: phi(x) = min(dist(x, dQ), min_neg(phi_j + |x - x_j|)) built from the
/// optimal flow potentials.
DualCertificate dual_value(const ChargeSet& charges, int dim, int grid_res);

/// Expand the boundary of a current into unit dipole pairs (P_i, N_i) via a
/// minimal connection; charges routed to the boundary pair with their nearest
/// boundary point.
std::vector<std::pair<Point, Point>> dipole_decomposition(const OneCurrent& current);

}  // namespace fluxforge
