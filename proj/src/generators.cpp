#include "fluxforge/generators.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace fluxforge {

namespace {
constexpr double kNudge = 1e-9;
constexpr double kPoleCap = 1e-12;

double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        case 4: return M_PI * M_PI / 2.0;
        default: throw std::invalid_argument("unsupported dimension");
    }
}
}  // namespace

ChargeSet nudged(const ChargeSet& charges, int dim) {
    ChargeSet out = charges;
    for (auto& c : out.items)
        for (int a = 0; a < dim; ++a) c.pos[a] += kNudge;
    out.validate(dim);
    return out;
}

VectorField gen_vortex(const ChargeSet& charges, int n, int N) {
    if (n != 2 && n != 3) throw std::invalid_argument("gen_vortex supports n in {2,3}");
    charges.validate(n);
    ChargeSet cs = nudged(charges, n);
    const double scale = 1.0 / (n * unit_ball_volume(n));

    AnalyticField fn = [cs, n, scale](const Point& x, double* out) {
        for (int a = 0; a < n; ++a) out[a] = 0.0;
        for (const auto& ch : cs.items) {
            double d[kMaxDim];
            double r2 = 0.0;
            for (int a = 0; a < n; ++a) {
                d[a] = x[a] - ch.pos[a];
                r2 += d[a] * d[a];
            }
            r2 = std::max(r2, kPoleCap * kPoleCap);
            double rn = std::pow(r2, 0.5 * n);  // |x - x_j|^n
            double w = ch.deg * scale / rn;
            for (int a = 0; a < n; ++a) out[a] += w * d[a];
        }
    };
    return VectorField(GridSpec(n, N), fn);
}

VectorField gen_circle_map_current(const ChargeSet& charges, int N) {
    const int n = 2;
    charges.validate(n);
    for (const auto& c : charges.items)
        if (c.deg != 1 && c.deg != -1)
            throw std::invalid_argument("circle-map degrees must be +-1");
    ChargeSet cs = nudged(charges, n);

    AnalyticField fn = [cs](const Point& x, double* out) {
        std::complex<double> u(1.0, 0.0);
        double sx = 0.0, sy = 0.0;  // sum_j s_j grad theta_j
        for (const auto& ch : cs.items) {
            double dx = x[0] - ch.pos[0];
            double dy = x[1] - ch.pos[1];
            double r2 = std::max(dx * dx + dy * dy, kPoleCap * kPoleCap);
            double r = std::sqrt(r2);
            std::complex<double> phi(dx / r, dy / r);
            if (ch.deg == 1)
                u *= phi;
            else
                u *= std::conj(phi);
            sx += ch.deg * (-dy / r2);
            sy += ch.deg * (dx / r2);
        }
        // d_k u = u * i * S_k; (u ^ grad u)_k = Im(conj(u) d_k u)
        std::complex<double> cu = std::conj(u);
        double g1 = std::imag(cu * (u * std::complex<double>(0.0, sx)));
        double g2 = std::imag(cu * (u * std::complex<double>(0.0, sy)));
        // u ^ grad^perp u with grad^perp f = (d_2 f, -d_1 f)
        out[0] = g2 / (2.0 * M_PI);
        out[1] = -g1 / (2.0 * M_PI);
    };
    return VectorField(GridSpec(n, N), fn);
}

VectorField gen_divfree(std::uint64_t seed, int n, int N) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("dim must be in 1..4");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> wave(-2, 2);

    if (n == 1) {
        double c = unif(rng);
        AnalyticField fn = [c](const Point&, double* out) { out[0] = c; };
        return VectorField(GridSpec(1, N), fn);
    }

    // One scalar potential per unordered axis pair: quadratic polynomial plus
    // a low-amplitude trigonometric ripple. The pair potential enters V
    // antisymmetrically, so div V = 0 identically.
    struct PairPotential {
        int a, b;
        double lin[kMaxDim];
        double quad[kMaxDim][kMaxDim];
        double amp, phase;
        int k[kMaxDim];
    };
    std::vector<PairPotential> pots;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            PairPotential p{};
            p.a = a;
            p.b = b;
            for (int i = 0; i < n; ++i) p.lin[i] = unif(rng);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) p.quad[i][j] = unif(rng);
            p.amp = 1e-5 * unif(rng);
            p.phase = M_PI * unif(rng);
            for (int i = 0; i < n; ++i) p.k[i] = wave(rng);
            pots.push_back(p);
        }
    }

    AnalyticField fn = [pots, n](const Point& x, double* out) {
        for (int a = 0; a < n; ++a) out[a] = 0.0;
        for (const auto& p : pots) {
            double grad[kMaxDim];
            for (int d = 0; d < n; ++d) {
                double g = p.lin[d];
                for (int j = 0; j < n; ++j) {
                    if (d <= j) g += p.quad[d][j] * x[j];
                    if (j <= d) g += p.quad[j][d] * x[j];
                }
                double karg = p.phase;
                for (int j = 0; j < n; ++j) karg += 2.0 * M_PI * p.k[j] * x[j];
                g += p.amp * 2.0 * M_PI * p.k[d] * std::cos(karg);
                grad[d] = g;
            }
            out[p.a] += grad[p.b];
            out[p.b] -= grad[p.a];
        }
    };
    return VectorField(GridSpec(n, N), fn);
}

}  // namespace fluxforge
