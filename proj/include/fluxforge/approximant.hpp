#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "fluxforge/audit.hpp"
#include "fluxforge/extension.hpp"

namespace fluxforge {

struct PipelineSettings {
    double p = 1.5;
    double q = 0.0;
    int shift_candidates = 32;
    std::uint64_t seed = 42;
    double tolerance = 1e-2;   // good/bad classification
    bool force_round = false;  // round non-integral cubes instead of aborting
    double smooth_delta = 0.0; // <= 0: auto per-face budget
    int face_M = 0;
    int flux_M = 0;
    int ext_m = 0;             // extension grid, 0: auto by dimension
    SolverOptions solver{1e-6, 4000, 1e-7, false};  // pipeline-grade tolerance
    int threads = 1;
    int eval_res = 0;          // L^p error quadrature, 0: auto

    WeightedMeasure measure() const { return WeightedMeasure(q); }
    int auto_ext_m(int dim) const {
        if (ext_m > 0) return ext_m;
        switch (dim) {
            case 2: return 24;
            case 3: return 10;
            default: return 6;
        }
    }
    int auto_eval_res(int dim) const {
        if (eval_res > 0) return eval_res;
        switch (dim) {
            case 2: return 192;
            case 3: return 48;
            default: return 16;
        }
    }
};

/// The assembled approximant: good cubes carry the divergence-free extension
/// plus the cube mean, bad cubes the radial closure of their smoothed trace;
/// after rescaling the field covers all of Q_1(0) with charges at the
/// rescaled bad-cube centers.
struct ApproximantField {
    CubicMesh mesh;
    std::vector<CubeRecord> records;
    std::map<long, ExtensionResult> good;          // by cube index
    std::map<long, std::vector<FaceData>> bad;      // outward traces per face
    ChargeSet charges;
    double alpha = 1.0;  // 1 before rescaling
    double p = 1.5;
    double skeleton_deviation = 0.0;
    PipelineSettings provenance;

    /// Evaluate at x in Q_1(0) (after rescale) or in Omega_eps (before);
    /// defined a.e., faces resolve to the lower cube, zero outside coverage.
    Point eval(const Point& x) const;
};

/// Run shift selection, classification, skeleton smoothing and per-cube
/// extensions; returns the field on Omega_eps with its charge list.
/// Non-integral cubes abort unless force_round is set.
ApproximantField assemble(const VectorField& V, double epsilon,
                          const PipelineSettings& settings);

/// Apply the dilation x -> alpha^{n-1} field(alpha x) with the closed-form
/// maximal alpha such that Q_1(0) is covered; charges move to alpha^{-1} c_Q
/// and those landing outside Q_1(0) are dropped.
ApproximantField rescale(const ApproximantField& tilde);

/// Maximal alpha with alpha * Q_1(0) inside Omega_eps, from the mesh
/// geometry.
double rescale_alpha(const CubicMesh& mesh);

/// Standalone dilation operator (P_alpha V)(x) = alpha^{n-1} V(alpha x) on
/// grid fields over Q_1(0).
VectorField dilate(const VectorField& V, double alpha);

struct ResidualEntry {
    std::string name;
    double residual = 0.0;   // |int field.grad phi + sum d_j phi(x_j)|
    double grad_sup = 0.0;   // sup norm of grad phi over the sample grid
};

/// Weak-divergence residuals against a fixed family of 20 windowed tensor
/// polynomials, by midpoint quadrature at resolution res. charges_override
/// substitutes the tested charge list (pass an empty set to measure the raw
/// pairing).
std::vector<ResidualEntry> divergence_residual(const ApproximantField& field,
                                               int res = 0,
                                               const ChargeSet* charges_override = nullptr);

/// Same residuals for an arbitrary evaluator.
std::vector<ResidualEntry> divergence_residual_of(
    const std::function<Point(const Point&)>& eval, const ChargeSet& charges, int dim,
    int res);

/// ||A - V||_{L^p(mu)} by midpoint quadrature over the approximant's domain:
/// Q_1(0) once rescaled, Omega_eps before.
double approximation_error(const ApproximantField& A, const VectorField& V,
                           double p, const WeightedMeasure& mu, int res);

struct SweepRow {
    double epsilon = 0.0;
    double lp_error = 0.0;
    long bad_count = 0;
    double alpha = 0.0;
    double wallclock_ms = 0.0;
    std::string error;  // per-row failures recorded, sweep continues
};

/// One pipeline run per epsilon (descending); rows run concurrently when
/// settings.threads > 1 with deterministic ordering.
std::vector<SweepRow> converge_sweep(const VectorField& V, const std::vector<double>& eps_list,
                                     const PipelineSettings& settings);

}  // namespace fluxforge
