#include "fluxforge/quadrature.hpp"

namespace fluxforge {

double boundary_flux(const VectorField& V, const Cube& cube, int M) {
    const int n = cube.dim;
    if (n != V.dim()) throw std::invalid_argument("cube/field dimension mismatch");
    require_inside_domain(cube);

    if (n == 1) {
        Point hi{}, lo{};
        hi[0] = cube.hi[0];
        lo[0] = cube.lo[0];
        return V.eval_component(hi, 0) - V.eval_component(lo, 0);
    }

    if (M < 2) throw std::invalid_argument("quadrature resolution M must be >= 2");

    double flux = 0.0;
    for (int axis = 0; axis < n; ++axis) {
        for (int side = 0; side < 2; ++side) {
            FaceQuadrature fq{cube, axis, side, M};
            const long count = fq.node_count();
            const double w = fq.weight();
            const double sign = fq.normal_sign();
            double acc = 0.0;
            for (long i = 0; i < count; ++i)
                acc += V.eval_component(fq.node(i), axis);
            flux += sign * acc * w;
        }
    }
    return flux;
}

Point cube_average(const VectorField& V, const Cube& cube, int K) {
    const int n = cube.dim;
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    long count = 1;
    for (int i = 0; i < n; ++i) count *= K;
    const double step = cube.edge() / K;

    Point sum{};
    for (long flat = 0; flat < count; ++flat) {
        Point x{};
        long r = flat;
        for (int a = n - 1; a >= 0; --a) {
            long i = r % K;
            r /= K;
            x[a] = cube.lo[a] + (i + 0.5) * step;
        }
        Point v = V.eval(x);
        for (int a = 0; a < n; ++a) sum[a] += v[a];
    }
    for (int a = 0; a < n; ++a) sum[a] /= static_cast<double>(count);
    return sum;
}

double cube_integral(const Cube& cube, int K,
                     const std::function<double(const Point&)>& g) {
    const int n = cube.dim;
    long count = 1;
    for (int i = 0; i < n; ++i) count *= K;
    const double step = cube.edge() / K;
    double vol = 1.0;
    for (int i = 0; i < n; ++i) vol *= step;

    double acc = 0.0;
    for (long flat = 0; flat < count; ++flat) {
        Point x{};
        long r = flat;
        for (int a = n - 1; a >= 0; --a) {
            long i = r % K;
            r /= K;
            x[a] = cube.lo[a] + (i + 0.5) * step;
        }
        acc += g(x);
    }
    return acc * vol;
}

double surface_integral(const Cube& cube, int M,
                        const std::function<double(const Point&)>& g) {
    const int n = cube.dim;
    double acc = 0.0;
    for (int axis = 0; axis < n; ++axis) {
        for (int side = 0; side < 2; ++side) {
            FaceQuadrature fq{cube, axis, side, M};
            const long count = fq.node_count();
            const double w = fq.weight();
            double s = 0.0;
            for (long i = 0; i < count; ++i) s += g(fq.node(i));
            acc += s * w;
        }
    }
    return acc;
}

}  // namespace fluxforge
