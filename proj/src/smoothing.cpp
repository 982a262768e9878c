#include "fluxforge/smoothing.hpp"

#include <cmath>

namespace fluxforge {

namespace {

void decode(const FaceGrid& g, long flat, int idx[kMaxDim]) {
    for (int a = g.dim - 1; a >= 0; --a) {
        if (a == g.axis) continue;
        idx[a] = static_cast<int>(flat % g.M);
        flat /= g.M;
    }
}

long encode(const FaceGrid& g, const int idx[kMaxDim]) {
    long flat = 0;
    for (int a = 0; a < g.dim; ++a) {
        if (a == g.axis) continue;
        flat = flat * g.M + idx[a];
    }
    return flat;
}

int band_depth(const FaceGrid& g, long flat) {
    int idx[kMaxDim];
    decode(g, flat, idx);
    int depth = g.M;
    for (int a = 0; a < g.dim; ++a) {
        if (a == g.axis) continue;
        depth = std::min(depth, std::min(idx[a], g.M - 1 - idx[a]));
    }
    return depth;
}

double band_mass(const FaceData& g, int b, double p) {
    const double w = g.grid.weight();
    double acc = 0.0;
    for (long i = 0; i < static_cast<long>(g.samples.size()); ++i)
        if (band_depth(g.grid, i) < b) acc += std::pow(std::abs(g.samples[i]), p) * w;
    return std::pow(acc, 1.0 / p);
}

double lp_face(const FaceGrid& g, const std::vector<double>& v, double p) {
    const double w = g.weight();
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::abs(x), p) * w;
    return std::pow(acc, 1.0 / p);
}

// Tensor (1+cos) window supported in the middle half of the face.
std::vector<double> bump_profile(const FaceGrid& g) {
    std::vector<double> psi(g.count());
    for (long i = 0; i < static_cast<long>(psi.size()); ++i) {
        int idx[kMaxDim];
        decode(g, i, idx);
        double v = 1.0;
        for (int a = 0; a < g.dim; ++a) {
            if (a == g.axis) continue;
            double u = (idx[a] + 0.5) / g.M - 0.5;
            v *= std::abs(u) <= 0.25 ? 1.0 + std::cos(4.0 * M_PI * u) : 0.0;
        }
        psi[i] = v;
    }
    return psi;
}

// Separable convolution with a normalized discrete (1+cos) kernel of radius
// r cells; out-of-range samples are zero (the data already vanishes there).
std::vector<double> mollify(const FaceGrid& g, const std::vector<double>& in, int r) {
    if (r <= 0) return in;
    std::vector<double> kernel(2 * r + 1);
    double ks = 0.0;
    for (int t = -r; t <= r; ++t) {
        kernel[t + r] = 1.0 + std::cos(M_PI * t / (r + 1.0));
        ks += kernel[t + r];
    }
    for (double& k : kernel) k /= ks;

    std::vector<double> cur = in, next(in.size());
    for (int a = 0; a < g.dim; ++a) {
        if (a == g.axis) continue;
        for (long i = 0; i < static_cast<long>(cur.size()); ++i) {
            int idx[kMaxDim];
            decode(g, i, idx);
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                int pos = idx[a] + t;
                if (pos < 0 || pos >= g.M) continue;
                int jdx[kMaxDim];
                for (int x = 0; x < g.dim; ++x) jdx[x] = idx[x];
                jdx[a] = pos;
                acc += kernel[t + r] * cur[encode(g, jdx)];
            }
            next[i] = acc;
        }
        std::swap(cur, next);
    }
    return cur;
}

// Nudge one interior node until the quadrature sum lands on the target.
void force_integral(FaceData& f, double target) {
    const double w = f.grid.weight();
    int idx[kMaxDim];
    for (int a = 0; a < f.grid.dim; ++a) idx[a] = f.grid.M / 2;
    const long center = encode(f.grid, idx);
    for (int it = 0; it < 32; ++it) {
        double cur = f.recompute_integral();
        double res = target - cur;
        if (res == 0.0) break;
        f.samples[center] += res / w;
    }
    f.integral = f.recompute_integral();
}

FaceData smooth_face_impl(const FaceData& g, double mass_budget, double moll_budget,
                          double p, SmoothFaceInfo* info) {
    const FaceGrid& grid = g.grid;
    if (grid.dim < 2) throw std::invalid_argument("no faces to smooth in dimension 1");
    if (grid.M < 8) throw std::runtime_error("face too coarse");

    int b = grid.M / 4;
    while (b > 1 && band_mass(g, b, p) >= mass_budget) b /= 2;
    if (band_mass(g, b, p) >= mass_budget) throw std::runtime_error("face too coarse");

    const double w = grid.weight();
    FaceData out;
    out.grid = grid;
    out.samples = g.samples;
    double discarded = 0.0;
    for (long i = 0; i < static_cast<long>(out.samples.size()); ++i) {
        if (band_depth(grid, i) < b) {
            discarded += out.samples[i] * w;
            out.samples[i] = 0.0;
        }
    }

    std::vector<double> psi = bump_profile(grid);
    double psi_int = 0.0;
    for (double v : psi) psi_int += v * w;
    for (long i = 0; i < static_cast<long>(out.samples.size()); ++i)
        out.samples[i] += discarded * psi[i] / psi_int;

    double premoll_sup = 0.0;
    for (double v : out.samples) premoll_sup = std::max(premoll_sup, std::abs(v));

    int r = std::min(b - 1, b / 2);
    while (r > 0) {
        std::vector<double> conv = mollify(grid, out.samples, r);
        std::vector<double> diff(conv.size());
        for (std::size_t i = 0; i < conv.size(); ++i) diff[i] = conv[i] - out.samples[i];
        if (lp_face(grid, diff, p) <= moll_budget) {
            out.samples = std::move(conv);
            break;
        }
        r /= 2;
    }

    force_integral(out, g.integral);
    if (info) {
        info->band_cells = b;
        info->mollifier_radius_cells = r;
        info->discarded_integral = discarded;
        info->premollify_sup = premoll_sup;
    }
    return out;
}

}  // namespace

FaceData sample_face(const VectorField& V, const FaceGrid& grid) {
    FaceData f;
    f.grid = grid;
    f.samples.resize(grid.count());
    for (long i = 0; i < static_cast<long>(f.samples.size()); ++i)
        f.samples[i] = V.eval_component(grid.node(i), grid.axis);
    f.integral = f.recompute_integral();
    return f;
}

FaceGrid face_grid(const CubicMesh& mesh, const FaceKey& key, int M) {
    FaceGrid g;
    g.dim = mesh.dim;
    g.axis = key.axis;
    g.plane = mesh.plane(key.axis, key.j[key.axis]);
    for (int a = 0; a < mesh.dim; ++a)
        if (a != key.axis) g.lo[a] = mesh.plane(a, key.j[a]);
    g.edge = mesh.epsilon;
    g.M = M;
    return g;
}

FaceData smooth_face(const FaceData& g, double delta, double p, SmoothFaceInfo* info) {
    if (delta <= 0.0 || delta >= g.grid.edge / 4.0)
        throw std::invalid_argument("delta must lie in (0, face_side/4)");
    return smooth_face_impl(g, delta, delta, p, info);
}

std::vector<std::pair<FaceKey, double>> cube_faces(const CubicMesh& mesh,
                                                   const std::array<int, kMaxDim>& j) {
    std::vector<std::pair<FaceKey, double>> out;
    out.reserve(2 * mesh.dim);
    for (int axis = 0; axis < mesh.dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
            FaceKey key;
            key.axis = axis;
            key.j = j;
            key.j[axis] = j[axis] + side;
            out.emplace_back(key, side ? 1.0 : -1.0);
        }
    }
    return out;
}

SkeletonSmoothing smooth_skeleton(const VectorField& V, const CubicMesh& mesh,
                                  const std::vector<CubeRecord>& records, double p,
                                  const WeightedMeasure& mu, const SmoothingOptions& opt) {
    if (records.size() != static_cast<std::size_t>(mesh.cube_count()))
        throw std::invalid_argument("records inconsistent with mesh");
    const int n = mesh.dim;
    const int M = opt.auto_face_M(n, mesh.epsilon);

    SkeletonSmoothing result;
    result.requested_delta = opt.delta;
    std::map<FaceKey, double> face_dev_p;

    const int per = mesh.cubes_per_axis();
    for (int axis = 0; axis < n; ++axis) {
        std::array<int, kMaxDim> j{};
        for (int a = 0; a < n; ++a) j[a] = 1;
        // iterate plane index on `axis` in [1, q_eps], cube indices elsewhere
        bool done = false;
        while (!done) {
            for (int pj = 1; pj <= mesh.q_eps; ++pj) {
                FaceKey key;
                key.axis = axis;
                key.j = j;
                key.j[axis] = pj;
                FaceData data = sample_face(V, face_grid(mesh, key, M));

                double budget = opt.delta;
                if (budget <= 0.0) {
                    // vanishes with epsilon so the skeleton deviation decays,
                    // floored at what discarding a single ring must cost
                    double gnorm = lp_face(data.grid, data.samples, p);
                    budget = std::max({1e-5, 0.1 * mesh.epsilon * gnorm,
                                       1.05 * band_mass(data, 1, p)});
                }
                FaceData smoothed = smooth_face_impl(data, budget, budget, p, nullptr);

                double devp = 0.0;
                const double w = data.grid.weight();
                for (std::size_t i = 0; i < data.samples.size(); ++i)
                    devp += std::pow(std::abs(smoothed.samples[i] - data.samples[i]), p) * w;
                face_dev_p[key] = devp;
                result.faces[key] = std::move(smoothed);
            }
            // advance cross-axis cube indices
            done = true;
            for (int a = n - 1; a >= 0; --a) {
                if (a == axis) continue;
                if (j[a] < per) {
                    ++j[a];
                    done = false;
                    break;
                }
                j[a] = 1;
            }
        }
    }

    double total = 0.0;
    for (const auto& rec : records) {
        auto j = mesh.multi_index(rec.index);
        double fq = mu.density(rec.center, n);
        for (const auto& [key, sign] : cube_faces(mesh, j)) {
            (void)sign;
            total += fq * face_dev_p.at(key);
        }
    }
    result.total_deviation = total;
    return result;
}

}  // namespace fluxforge
