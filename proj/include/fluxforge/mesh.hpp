#pragma once

#include <cstdint>
#include <vector>

#include "fluxforge/quadrature.hpp"

namespace fluxforge {

/// Shifted cubic decomposition of Q_1(0) with mesh thickness epsilon and
/// origin shift a in Q_epsilon(0). Cube j (per axis, j = 1..q_eps-1) spans
/// the lattice planes [plane(j), plane(j+1)]; building every cube from the
/// shared plane values makes adjacent cubes agree on face coordinates
/// bitwise.
struct CubicMesh {
    int dim = 0;
    double epsilon = 0.0;
    Point shift{};
    int q_eps = 0;

    int cubes_per_axis() const { return q_eps - 1; }

    long cube_count() const {
        long c = 1;
        for (int i = 0; i < dim; ++i) c *= cubes_per_axis();
        return c;
    }

    double plane(int axis, int j) const { return j * epsilon - 0.5 + shift[axis]; }

    /// Lattice index per axis is in [1, q_eps-1].
    Cube cube(const std::array<int, kMaxDim>& j) const {
        Cube c;
        c.dim = dim;
        for (int a = 0; a < dim; ++a) {
            c.lo[a] = plane(a, j[a]);
            c.hi[a] = plane(a, j[a] + 1);
        }
        return c;
    }

    Point center(const std::array<int, kMaxDim>& j) const {
        Point p{};
        for (int a = 0; a < dim; ++a) p[a] = (j[a] + 0.5) * epsilon - 0.5 + shift[a];
        return p;
    }

    std::array<int, kMaxDim> multi_index(long flat) const {
        std::array<int, kMaxDim> j{};
        const int per = cubes_per_axis();
        for (int a = dim - 1; a >= 0; --a) {
            j[a] = 1 + static_cast<int>(flat % per);
            flat /= per;
        }
        return j;
    }

    long flat_index(const std::array<int, kMaxDim>& j) const {
        const int per = cubes_per_axis();
        long f = 0;
        for (int a = 0; a < dim; ++a) f = f * per + (j[a] - 1);
        return f;
    }

    /// The covered region Omega_eps = union of all cubes.
    Cube omega() const {
        Cube c;
        c.dim = dim;
        for (int a = 0; a < dim; ++a) {
            c.lo[a] = plane(a, 1);
            c.hi[a] = plane(a, q_eps);
        }
        return c;
    }

    /// Cube of the mesh containing x (faces resolve to the lower cube);
    /// returns -1 if x lies outside Omega_eps.
    long locate(const Point& x) const;
};

enum class CubeClass { good, bad, non_integral };

struct CubeRecord {
    long index = 0;
    Point center{};
    Point mean{};  // (V)_Q
    double flux = 0.0;
    long degree = 0;
    CubeClass cls = CubeClass::good;
};

CubicMesh build_mesh(int dim, double epsilon, const Point& shift);

struct MeshOptions {
    int flux_M = 0;        // 0: auto by dimension
    int deviation_M = 0;   // face quadrature for skeleton deviation
    int average_K = 0;     // cube-average sampling
    int auto_flux_M(int dim) const;
    int auto_deviation_M(int dim) const;
    int auto_average_K(int dim) const;
};

/// eps * sum_Q int_{dQ} |V - (V)_Q|^p f(c_Q) dH^{n-1}, by face quadrature.
double skeleton_deviation(const VectorField& V, const CubicMesh& mesh, double p,
                          const WeightedMeasure& mu, const MeshOptions& opt = {});

/// Evaluate the skeleton deviation over seeded uniform candidate shifts plus
/// the zero shift; return the mesh with minimal deviation (ties broken by
/// lexicographic shift order).
CubicMesh select_shift(const VectorField& V, double epsilon, double p,
                       const WeightedMeasure& mu, int n_candidates,
                       std::uint64_t seed, const MeshOptions& opt = {});

/// Per-cube flux, nearest-integer degree and good/bad/non-integral class.
std::vector<CubeRecord> classify_cubes(const VectorField& V, const CubicMesh& mesh,
                                       double tolerance, const MeshOptions& opt = {});

/// (N_eps^b, eps^n sum_{bad} f(c_Q)).
std::pair<long, double> bad_cube_stats(const std::vector<CubeRecord>& records,
                                       const CubicMesh& mesh, const WeightedMeasure& mu);

}  // namespace fluxforge
