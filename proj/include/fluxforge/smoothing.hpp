#pragma once

#include <map>
#include <vector>

#include "fluxforge/mesh.hpp"

namespace fluxforge {

/// Flat sample grid on one skeleton face: M^(n-1) tensor midpoint nodes,
/// anchored at the lattice corner shared by the adjacent cubes.
struct FaceGrid {
    int dim = 0;   // ambient n
    int axis = 0;  // face normal
    double plane = 0.0;
    Point lo{};    // cross-axis anchor (lo[axis] unused)
    double edge = 0.0;
    int M = 0;

    long count() const {
        long m = 1;
        for (int i = 0; i < dim - 1; ++i) m *= M;
        return m;
    }
    double weight() const {
        double w = 1.0;
        for (int i = 0; i < dim - 1; ++i) w *= edge / M;
        return w;
    }
    Point node(long flat) const {
        Point p{};
        p[axis] = plane;
        const double step = edge / M;
        for (int a = dim - 1; a >= 0; --a) {
            if (a == axis) continue;
            long i = flat % M;
            flat /= M;
            p[a] = lo[a] + (i + 0.5) * step;
        }
        return p;
    }
};

/// Scalar normal-trace data on a face (the component V.e_axis; cube-side
/// outward signs are applied by consumers). The cached integral equals the
/// quadrature sum of the samples.
struct FaceData {
    FaceGrid grid;
    std::vector<double> samples;
    double integral = 0.0;

    double recompute_integral() const {
        double s = 0.0;
        for (double v : samples) s += v;
        return s * grid.weight();
    }
};

FaceData sample_face(const VectorField& V, const FaceGrid& grid);

/// Identifies a skeleton face: j[axis] is the plane index in [1, q_eps],
/// the other entries are cube lattice indices in [1, q_eps-1].
struct FaceKey {
    int axis = 0;
    std::array<int, kMaxDim> j{};

    bool operator<(const FaceKey& o) const {
        if (axis != o.axis) return axis < o.axis;
        return j < o.j;
    }
};

FaceGrid face_grid(const CubicMesh& mesh, const FaceKey& key, int M);

struct SmoothFaceInfo {
    int band_cells = 0;
    int mollifier_radius_cells = 0;
    double discarded_integral = 0.0;
    double premollify_sup = 0.0;
};

/// Three-step smoothing of one face datum: zero a margin band at the face
/// boundary (shrunk by factor 2 until the discarded L^p mass is below delta),
/// re-inject the discarded integral through a normalized (1+cos) bump
/// supported in the middle half, then mollify with a discrete kernel whose
/// radius stays below half the margin. The output vanishes on a band at the
/// face boundary and its quadrature integral is forced back onto the input's.
FaceData smooth_face(const FaceData& g, double delta, double p = 2.0,
                     SmoothFaceInfo* info = nullptr);

struct SkeletonSmoothing {
    std::map<FaceKey, FaceData> faces;
    double total_deviation = 0.0;  // sum_Q int_{dQ} |V_eps - V|^p f(c_Q)
    double requested_delta = 0.0;
};

struct SmoothingOptions {
    double delta = 0.0;  // <= 0: auto per-face budget
    int face_M = 0;      // 0: auto by dimension and mesh size

    // one discarded ring costs a fixed fraction of the face norm at fixed M,
    // so the sample count grows as the cubes shrink
    int auto_face_M(int dim, double epsilon) const {
        if (face_M > 0) return face_M;
        auto pow2_at_least = [](double x, int lo, int hi) {
            int m = lo;
            while (m < x && m < hi) m *= 2;
            return m;
        };
        switch (dim) {
            case 2: return pow2_at_least(64.0 / epsilon, 256, 2048);
            case 3: return pow2_at_least(4.0 / epsilon, 16, 64);
            default: return 8;
        }
    }
};

/// Smooth every skeleton face once (shared faces have a single owner) with
/// per-cube flux preservation; reports the total L^p deviation against the
/// original traces.
SkeletonSmoothing smooth_skeleton(const VectorField& V, const CubicMesh& mesh,
                                  const std::vector<CubeRecord>& records, double p,
                                  const WeightedMeasure& mu,
                                  const SmoothingOptions& opt = {});

/// Face keys of one cube with the outward-normal sign per entry.
std::vector<std::pair<FaceKey, double>> cube_faces(const CubicMesh& mesh,
                                                   const std::array<int, kMaxDim>& j);

}  // namespace fluxforge
