#pragma once

#include <functional>
#include <vector>

#include "fluxforge/smoothing.hpp"

namespace fluxforge {

/// Zero-divergence Neumann extension problem on one cube. faces[axis*2+side]
/// holds the outward normal trace f on that face; the data must satisfy the
/// compatibility condition sum_faces int f = 0.
struct NeumannProblem {
    Cube cube;
    double pprime = 2.0;  // dual exponent p' = p/(p-1); for p = 1 pass s = n+1
    int m = 32;           // interior grid: m elements per axis
    std::vector<FaceData> faces;

    double total_boundary_integral() const {
        double s = 0.0;
        for (const auto& f : faces) s += f.integral;
        return s;
    }
    double boundary_l1() const {
        double s = 0.0;
        for (const auto& f : faces) {
            const double w = f.grid.weight();
            for (double v : f.samples) s += std::abs(v) * w;
        }
        return s;
    }
};

struct ExtensionResult {
    int m = 0;
    std::vector<double> field;  // m^n * n, element centers, component-fastest
    double energy = 0.0;
    double div_residual = 0.0;      // weak-divergence residual, relative
    double neumann_mismatch = 0.0;  // per-face discrete Neumann balance, relative
    int iterations = 0;
    bool converged = true;
    std::vector<double> energy_trace;  // accepted-iteration energies (descent path)
    double lp_volume_integral(double p, const Cube& cube) const;
    Point eval(const Cube& cube, const Point& x) const;  // multilinear in the cube
};

struct SolverOptions {
    double reg_scale = 1e-6;  // regularization; reg = reg_scale * max(1,||f||_L1)
    int max_iter = 4000;
    double tol = 1e-9;
    bool force_descent = false;  // skip the direct p'=2 path (used by tests)
};

/// Minimize (1/p') sum (|grad u|^2 + reg^2)^(p'/2) vol - sum_faces quad(f u)
/// over zero-mean multilinear nodal grids and return
/// V = (|grad u|^2 + reg^2)^((p'-2)/2) grad u at element centers.
/// Exact sparse solve when p' = 2, preconditioned Barzilai-Borwein descent
/// with Armijo backtracking otherwise.
ExtensionResult extend_good(const NeumannProblem& problem, const SolverOptions& opt = {});

/// The radial singular extension
///   V(x) = 2^{1-n} f(c + (eps/2)(x-c)/r(x)) (x-c)/r(x)^n,  r = ||x-c||_inf,
/// with f interpolated on the face sample grids.
Point extend_bad(const Cube& cube, const std::vector<FaceData>& faces, const Point& x);

/// int_Q |V|^p for the radial extension by shell quadrature over r in
/// (0, eps/2); the radial/angular factors separate exactly.
/// Throws for p >= n/(n-1), where the integral diverges.
double bad_cube_lp(const Cube& cube, const std::vector<FaceData>& faces, double p,
                   int shells = 256);

/// int_Q V . grad(phi) for the radial extension by shell quadrature; the
/// integrand is bounded, so plain midpoint in the radius converges fast.
double bad_cube_pairing(const Cube& cube, const std::vector<FaceData>& faces,
                        const std::function<Point(const Point&)>& grad_phi,
                        int shells = 256);

/// The closed-form constant of the radial L^p estimate:
///   C(n,p) = n^{p/2} 2^{-(n-1)(p-1)} * int_0^{1/2} rho^{-(n-1)(p-1)} d rho.
double bad_cube_constant(int n, double p);

}  // namespace fluxforge
