#pragma once

#include <functional>
#include <vector>

#include "fluxforge/geometry.hpp"

namespace fluxforge {

/// Uniform cell-centered grid on Q_1(0). Sample points are cell centers
/// (-1/2 + (i+1/2)h) per axis with h = 1/N.
struct GridSpec {
    int dim = 0;
    int cells = 0;

    GridSpec() = default;
    GridSpec(int dim_, int cells_) : dim(dim_), cells(cells_) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dim must be in 1..4");
        if (cells < 1) throw std::invalid_argument("cells_per_axis must be positive");
        double total = 1.0;
        for (int i = 0; i < dim; ++i) total *= cells;
        if (total * dim > 1.5e9)
            throw std::invalid_argument("grid too large (> 1.5e9 samples)");
    }

    double h() const { return 1.0 / cells; }

    long cell_count() const {
        long n = 1;
        for (int i = 0; i < dim; ++i) n *= cells;
        return n;
    }

    double center_coord(int i) const { return -0.5 + (i + 0.5) * h(); }

    Point cell_center(long flat) const {
        Point p{};
        for (int a = dim - 1; a >= 0; --a) {
            p[a] = center_coord(static_cast<int>(flat % cells));
            flat /= cells;
        }
        return p;
    }
};

using AnalyticField = std::function<void(const Point&, double*)>;

/// Grid sampling of a map Q_1(0) -> R^n, optionally backed by an analytic
/// callback for exact evaluation off the grid (used by face quadrature).
/// Values are stored component-fastest, cells row-major (last axis fastest).
class VectorField {
public:
    VectorField() = default;
    VectorField(GridSpec grid, std::vector<double> values);
    VectorField(GridSpec grid, AnalyticField analytic);

    const GridSpec& grid() const { return grid_; }
    int dim() const { return grid_.dim; }
    const std::vector<double>& values() const { return values_; }
    bool has_analytic() const { return static_cast<bool>(analytic_); }

    const double* at(long cell) const { return values_.data() + cell * grid_.dim; }

    /// Evaluate at an arbitrary point: analytic callback when present,
    /// multilinear interpolation of grid values otherwise.
    void eval(const Point& x, double* out) const;

    Point eval(const Point& x) const {
        Point v{};
        eval(x, v.data());
        return v;
    }

    /// Single component of eval(); the quadrature hot path.
    double eval_component(const Point& x, int comp) const;

    void check_finite() const;

private:
    void interpolate(const Point& x, double* out) const;

    GridSpec grid_;
    std::vector<double> values_;
    AnalyticField analytic_;
};

/// (sum_cells |V|^p f h^n)^(1/p); cells are weighted with f at cell centers,
/// which stay clear of the boundary so f is finite also for q < 0.
double lp_norm(const VectorField& V, double p, const WeightedMeasure& mu);

/// Integer point charges {(x_j, d_j)}: positions pairwise distinct, strictly
/// inside Q_1(0), degrees nonzero.
struct Charge {
    Point pos{};
    long deg = 0;
};

struct ChargeSet {
    std::vector<Charge> items;

    long total_degree() const {
        long d = 0;
        for (const auto& c : items) d += c.deg;
        return d;
    }
    bool empty() const { return items.empty(); }
    std::size_t size() const { return items.size(); }

    void validate(int dim) const;
};

}  // namespace fluxforge
