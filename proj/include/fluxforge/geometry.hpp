#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fluxforge {

inline constexpr int kMaxDim = 4;

/// Point in R^n, n <= kMaxDim. Unused coordinates stay zero.
using Point = std::array<double, kMaxDim>;

inline Point make_point(std::initializer_list<double> xs) {
    Point p{};
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

inline double linf_norm(const Point& x, int dim) {
    double m = 0.0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

inline double euclid_norm(const Point& x, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

inline double euclid_dist(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Distance from x to the boundary of the unit cube Q_1(0) = (-1/2,1/2)^n.
/// The nearest point lies on the closest face, so this equals 1/2 - ||x||_inf.
inline double dist_to_boundary(const Point& x, int dim) {
    return 0.5 - linf_norm(x, dim);
}

inline bool inside_unit_cube(const Point& x, int dim) {
    return linf_norm(x, dim) < 0.5;
}

/// Axis-aligned cube stored by its corner lattice values. Adjacent cubes built
/// from a shared set of plane coordinates reproduce face positions bitwise,
/// which is what makes interior-face flux cancellation exact.
struct Cube {
    int dim = 0;
    Point lo{};
    Point hi{};

    double edge() const { return hi[0] - lo[0]; }

    Point center() const {
        Point c{};
        for (int i = 0; i < dim; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
        return c;
    }

    bool contains(const Point& x) const {
        for (int i = 0; i < dim; ++i)
            if (x[i] <= lo[i] || x[i] >= hi[i]) return false;
        return true;
    }
};

/// Q_edge(center) as an explicit corner pair.
inline Cube cube_centered(const Point& center, double edge, int dim) {
    Cube c;
    c.dim = dim;
    for (int i = 0; i < dim; ++i) {
        c.lo[i] = center[i] - 0.5 * edge;
        c.hi[i] = center[i] + 0.5 * edge;
    }
    return c;
}

inline void require_inside_domain(const Cube& c, double slack = 1e-12) {
    for (int i = 0; i < c.dim; ++i)
        if (c.lo[i] < -0.5 - slack || c.hi[i] > 0.5 + slack)
            throw std::invalid_argument("cube extends outside Q_1(0)");
}

/// Weighted measure mu = f L^n with density f = (1/2 - ||.||_inf)^q, q <= 1.
/// q = 0 is Lebesgue measure; the fast path returns exactly 1.0 so weighted
/// and unweighted results agree bitwise.
struct WeightedMeasure {
    double q = 0.0;

    WeightedMeasure() = default;
    explicit WeightedMeasure(double q_) : q(q_) {
        if (q > 1.0) throw std::invalid_argument("measure exponent q must be <= 1");
    }

    double density(const Point& x, int dim) const {
        if (q == 0.0) return 1.0;
        return std::pow(0.5 - linf_norm(x, dim), q);
    }
};

}  // namespace fluxforge
