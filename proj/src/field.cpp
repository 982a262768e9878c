#include "fluxforge/field.hpp"

#include <algorithm>
#include <cmath>

namespace fluxforge {

VectorField::VectorField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<long>(values_.size()) != grid_.cell_count() * grid_.dim)
        throw std::invalid_argument("value array size does not match grid");
}

VectorField::VectorField(GridSpec grid, AnalyticField analytic)
    : grid_(grid), analytic_(std::move(analytic)) {
    values_.resize(grid_.cell_count() * grid_.dim);
    const long cells = grid_.cell_count();
    for (long c = 0; c < cells; ++c) {
        Point x = grid_.cell_center(c);
        analytic_(x, values_.data() + c * grid_.dim);
    }
}

void VectorField::eval(const Point& x, double* out) const {
    if (analytic_) {
        analytic_(x, out);
        return;
    }
    interpolate(x, out);
}

double VectorField::eval_component(const Point& x, int comp) const {
    Point v{};
    eval(x, v.data());
    return v[comp];
}

void VectorField::interpolate(const Point& x, double* out) const {
    const int n = grid_.dim;
    const int N = grid_.cells;
    const double h = grid_.h();

    int base[kMaxDim];
    double t[kMaxDim];
    for (int a = 0; a < n; ++a) {
        double u = (x[a] + 0.5) / h - 0.5;  // index-space coordinate
        double uf = std::floor(u);
        int i0 = static_cast<int>(uf);
        if (i0 < 0) i0 = 0;
        if (i0 > N - 2) i0 = std::max(0, N - 2);
        base[a] = i0;
        double tt = u - i0;
        t[a] = std::clamp(tt, 0.0, 1.0);
        if (N == 1) t[a] = 0.0;
    }

    for (int c = 0; c < n; ++c) out[c] = 0.0;
    const int corners = 1 << n;
    for (int m = 0; m < corners; ++m) {
        double w = 1.0;
        long flat = 0;
        for (int a = 0; a < n; ++a) {
            int bit = (m >> a) & 1;
            int idx = base[a] + (N > 1 ? bit : 0);
            w *= bit ? t[a] : (1.0 - t[a]);
            flat = flat * N + idx;
        }
        if (w == 0.0) continue;
        const double* v = values_.data() + flat * n;
        for (int c = 0; c < n; ++c) out[c] += w * v[c];
    }
}

void VectorField::check_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) throw std::runtime_error("corrupt field");
}

double lp_norm(const VectorField& V, double p, const WeightedMeasure& mu) {
    if (p < 1.0) throw std::invalid_argument("p must be >= 1");
    V.check_finite();
    const auto& g = V.grid();
    const int n = g.dim;
    const long cells = g.cell_count();
    const double cell_vol = std::pow(g.h(), n);

    double acc = 0.0;
    for (long c = 0; c < cells; ++c) {
        const double* v = V.at(c);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += v[i] * v[i];
        double mag = std::sqrt(s);
        double f = mu.density(g.cell_center(c), n);
        acc += std::pow(mag, p) * f * cell_vol;
    }
    return std::pow(acc, 1.0 / p);
}

void ChargeSet::validate(int dim) const {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].deg == 0) throw std::invalid_argument("charge degree must be nonzero");
        if (!inside_unit_cube(items[i].pos, dim))
            throw std::invalid_argument("charge position must lie strictly inside Q_1(0)");
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            bool same = true;
            for (int a = 0; a < dim; ++a)
                if (items[i].pos[a] != items[j].pos[a]) same = false;
            if (same) throw std::invalid_argument("charge positions must be pairwise distinct");
        }
    }
}

}  // namespace fluxforge
