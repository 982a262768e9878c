#pragma once

#include <functional>

#include "fluxforge/field.hpp"

namespace fluxforge {

/// Tensor midpoint quadrature on one cube face. Nodes are anchored at the
/// cube's lower corner, so cubes sharing plane coordinates share node sets
/// bitwise and interior-face fluxes cancel exactly under summation.
struct FaceQuadrature {
    Cube cube;
    int axis = 0;
    int side = 0;  // 0 = low, 1 = high
    int M = 2;     // nodes per face axis

    double plane() const { return side ? cube.hi[axis] : cube.lo[axis]; }
    double normal_sign() const { return side ? 1.0 : -1.0; }

    long node_count() const {
        long m = 1;
        for (int i = 0; i < cube.dim - 1; ++i) m *= M;
        return m;
    }

    double weight() const {
        double w = 1.0;
        double step = cube.edge() / M;
        for (int i = 0; i < cube.dim - 1; ++i) w *= step;
        return w;
    }

    Point node(long flat) const {
        const int n = cube.dim;
        Point p{};
        p[axis] = plane();
        const double step = cube.edge() / M;
        for (int a = n - 1; a >= 0; --a) {
            if (a == axis) continue;
            long i = flat % M;
            flat /= M;
            p[a] = cube.lo[a] + (i + 0.5) * step;
        }
        return p;
    }
};

/// Signed flux of V through the boundary of an axis-aligned cube inside
/// Q_1(0), by tensor midpoint quadrature with M nodes per face axis.
/// For n = 1 the "quadrature" is the exact two-point evaluation V(hi)-V(lo).
double boundary_flux(const VectorField& V, const Cube& cube, int M);

/// Cell average (V)_Q by tensor midpoint sampling at K points per axis.
Point cube_average(const VectorField& V, const Cube& cube, int K);

/// Midpoint quadrature of g over the cube volume at K points per axis.
double cube_integral(const Cube& cube, int K,
                     const std::function<double(const Point&)>& g);

/// Midpoint quadrature of g over all faces of the cube.
double surface_integral(const Cube& cube, int M,
                        const std::function<double(const Point&)>& g);

}  // namespace fluxforge
