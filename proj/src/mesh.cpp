#include "fluxforge/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fluxforge {

long CubicMesh::locate(const Point& x) const {
    std::array<int, kMaxDim> j{};
    for (int a = 0; a < dim; ++a) {
        double u = (x[a] + 0.5 - shift[a]) / epsilon;  // plane index space
        int ja = static_cast<int>(std::floor(u));
        if (u == std::floor(u)) ja -= 1;  // faces resolve to the lower cube
        if (ja < 1 || ja > q_eps - 1) return -1;
        j[a] = ja;
    }
    return flat_index(j);
}

CubicMesh build_mesh(int dim, double epsilon, const Point& shift) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("epsilon out of range");
    for (int a = 0; a < dim; ++a)
        if (std::abs(shift[a]) >= 0.5 * epsilon)
            throw std::invalid_argument("shift must lie in Q_epsilon(0)");

    CubicMesh m;
    m.dim = dim;
    m.epsilon = epsilon;
    m.shift = shift;
    int q = static_cast<int>(std::floor((1.0 - epsilon) / epsilon));
    while ((q + 1) * epsilon <= 1.0 - epsilon) ++q;
    while (q > 0 && q * epsilon > 1.0 - epsilon) --q;
    m.q_eps = q;
    if (m.cubes_per_axis() < 1) throw std::invalid_argument("epsilon admits no cubes");
    return m;
}

int MeshOptions::auto_flux_M(int dim) const {
    if (flux_M > 0) return flux_M;
    switch (dim) {
        case 1: return 2;
        case 2: return 256;
        case 3: return 48;
        default: return 12;
    }
}

int MeshOptions::auto_deviation_M(int dim) const {
    if (deviation_M > 0) return deviation_M;
    switch (dim) {
        case 1: return 2;
        case 2: return 64;
        case 3: return 16;
        default: return 8;
    }
}

int MeshOptions::auto_average_K(int dim) const {
    if (average_K > 0) return average_K;
    switch (dim) {
        case 1: return 32;
        case 2: return 16;
        case 3: return 8;
        default: return 4;
    }
}

double skeleton_deviation(const VectorField& V, const CubicMesh& mesh, double p,
                          const WeightedMeasure& mu, const MeshOptions& opt) {
    const int n = mesh.dim;
    const int M = opt.auto_deviation_M(n);
    const int K = opt.auto_average_K(n);
    const long count = mesh.cube_count();

    double total = 0.0;
    for (long idx = 0; idx < count; ++idx) {
        auto j = mesh.multi_index(idx);
        Cube cube = mesh.cube(j);
        Point mean = cube_average(V, cube, K);
        double fq = mu.density(mesh.center(j), n);
        double cube_acc = 0.0;
        for (int axis = 0; axis < n; ++axis) {
            for (int side = 0; side < 2; ++side) {
                FaceQuadrature face{cube, axis, side, M};
                const long nodes = face.node_count();
                const double w = face.weight();
                double acc = 0.0;
                for (long i = 0; i < nodes; ++i) {
                    Point v = V.eval(face.node(i));
                    double s = 0.0;
                    for (int a = 0; a < n; ++a) {
                        double d = v[a] - mean[a];
                        s += d * d;
                    }
                    acc += std::pow(std::sqrt(s), p);
                }
                cube_acc += acc * w;
            }
        }
        total += cube_acc * fq;
    }
    return mesh.epsilon * total;
}

CubicMesh select_shift(const VectorField& V, double epsilon, double p,
                       const WeightedMeasure& mu, int n_candidates,
                       std::uint64_t seed, const MeshOptions& opt) {
    if (n_candidates < 1) throw std::invalid_argument("n_candidates must be >= 1");
    const int n = V.dim();

    std::vector<Point> candidates;
    candidates.push_back(Point{});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    for (int i = 0; i < n_candidates; ++i) {
        Point a{};
        for (int d = 0; d < n; ++d) a[d] = unif(rng) * epsilon;
        candidates.push_back(a);
    }

    // ties keep the earliest candidate, so the zero shift wins when every
    // deviation is equal
    double best = std::numeric_limits<double>::infinity();
    Point best_shift{};
    bool first = true;
    for (const auto& a : candidates) {
        CubicMesh m = build_mesh(n, epsilon, a);
        double dev = skeleton_deviation(V, m, p, mu, opt);
        if (first || dev < best) {
            best = dev;
            best_shift = a;
            first = false;
        }
    }
    return build_mesh(n, epsilon, best_shift);
}

std::vector<CubeRecord> classify_cubes(const VectorField& V, const CubicMesh& mesh,
                                       double tolerance, const MeshOptions& opt) {
    if (tolerance <= 0.0 || tolerance >= 0.5)
        throw std::invalid_argument("tolerance must be in (0, 0.5)");
    const int n = mesh.dim;
    const int M = opt.auto_flux_M(n);
    const int K = opt.auto_average_K(n);
    const long count = mesh.cube_count();

    std::vector<CubeRecord> records(count);
    for (long idx = 0; idx < count; ++idx) {
        auto j = mesh.multi_index(idx);
        Cube cube = mesh.cube(j);
        CubeRecord& r = records[idx];
        r.index = idx;
        r.center = mesh.center(j);
        r.mean = cube_average(V, cube, K);
        r.flux = boundary_flux(V, cube, M);
        r.degree = std::lround(r.flux);
        if (std::abs(r.flux - r.degree) < tolerance)
            r.cls = r.degree == 0 ? CubeClass::good : CubeClass::bad;
        else
            r.cls = CubeClass::non_integral;
    }
    return records;
}

std::pair<long, double> bad_cube_stats(const std::vector<CubeRecord>& records,
                                       const CubicMesh& mesh, const WeightedMeasure& mu) {
    long count = 0;
    double weighted = 0.0;
    for (const auto& r : records) {
        if (r.cls != CubeClass::bad) continue;
        ++count;
        weighted += mu.density(r.center, mesh.dim);
    }
    return {count, std::pow(mesh.epsilon, mesh.dim) * weighted};
}

}  // namespace fluxforge
