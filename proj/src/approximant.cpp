#include "fluxforge/approximant.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fluxforge/parallel.hpp"

namespace fluxforge {

namespace {

double apow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

Point ApproximantField::eval(const Point& x) const {
    const int n = mesh.dim;
    Point y = x;
    if (alpha != 1.0)
        for (int a = 0; a < n; ++a) y[a] = alpha * x[a];
    long idx = mesh.locate(y);
    Point out{};
    if (idx < 0) return out;

    const CubeRecord& rec = records[idx];
    Cube cube = mesh.cube(mesh.multi_index(idx));
    if (rec.cls == CubeClass::bad) {
        const Point c = cube.center();
        bool at_center = true;
        for (int a = 0; a < n; ++a)
            if (y[a] != c[a]) at_center = false;
        if (!at_center) out = extend_bad(cube, bad.at(idx), y);
    } else {
        out = good.at(idx).eval(cube, y);
        for (int a = 0; a < n; ++a) out[a] += rec.mean[a];
    }
    if (alpha != 1.0) {
        const double s = apow(alpha, n - 1);
        for (int a = 0; a < n; ++a) out[a] *= s;
    }
    return out;
}

ApproximantField assemble(const VectorField& V, double epsilon,
                          const PipelineSettings& settings) {
    const int n = V.dim();
    const WeightedMeasure mu = settings.measure();
    MeshOptions mesh_opt;
    mesh_opt.flux_M = settings.flux_M;

    ApproximantField out;
    out.p = settings.p;
    out.provenance = settings;
    out.mesh = select_shift(V, epsilon, settings.p, mu, settings.shift_candidates,
                            settings.seed, mesh_opt);
    out.records = classify_cubes(V, out.mesh, settings.tolerance, mesh_opt);

    for (auto& rec : out.records) {
        if (rec.cls != CubeClass::non_integral) continue;
        if (!settings.force_round) {
            std::ostringstream msg;
            msg << "non-integral cube at index " << rec.index << ": flux " << rec.flux
                << " deviates from " << rec.degree << " by more than "
                << settings.tolerance << " (rerun with --force-round to round)";
            throw std::runtime_error(msg.str());
        }
        rec.cls = rec.degree == 0 ? CubeClass::good : CubeClass::bad;
    }

    SmoothingOptions sm_opt;
    sm_opt.delta = settings.smooth_delta;
    sm_opt.face_M = settings.face_M;
    SkeletonSmoothing smoothing =
        smooth_skeleton(V, out.mesh, out.records, settings.p, mu, sm_opt);
    out.skeleton_deviation = smoothing.total_deviation;

    const double pprime = settings.p > 1.0 ? settings.p / (settings.p - 1.0)
                                           : static_cast<double>(n + 1);
    const int ext_m = settings.auto_ext_m(n);
    const double face_area = apow(epsilon, n - 1);

    const long count = out.mesh.cube_count();
    std::vector<ExtensionResult> slots(count);
    std::vector<std::exception_ptr> errors(count);

    // outward traces per cube, from the single smoothed copy of each face
    auto outward_faces = [&](long idx) {
        auto j = out.mesh.multi_index(idx);
        std::vector<FaceData> faces(2 * n);
        for (const auto& [key, sign] : cube_faces(out.mesh, j)) {
            const FaceData& shared = smoothing.faces.at(key);
            FaceData f = shared;
            if (sign < 0)
                for (double& v : f.samples) v = -v;
            f.integral = f.recompute_integral();
            faces[key.axis * 2 + (sign > 0 ? 1 : 0)] = std::move(f);
        }
        return faces;
    };

    parallel_for(count, settings.threads, [&](long idx) {
        try {
            const CubeRecord& rec = out.records[idx];
            if (rec.cls != CubeClass::good) return;
            auto j = out.mesh.multi_index(idx);
            NeumannProblem prob;
            prob.cube = out.mesh.cube(j);
            prob.pprime = pprime;
            prob.m = ext_m;
            prob.faces = outward_faces(idx);
            // datum f = (V_eps - (V)_Q) . nu, then projection of the
            // quadrature-level compatibility defect
            for (int axis = 0; axis < n; ++axis) {
                for (int side = 0; side < 2; ++side) {
                    FaceData& f = prob.faces[axis * 2 + side];
                    const double sign = side ? 1.0 : -1.0;
                    for (double& v : f.samples) v -= sign * rec.mean[axis];
                    f.integral = f.recompute_integral();
                }
            }
            double defect = prob.total_boundary_integral();
            double adj = defect / (2 * n * face_area);
            for (auto& f : prob.faces) {
                for (double& v : f.samples) v -= adj;
                f.integral = f.recompute_integral();
            }
            slots[idx] = extend_good(prob, settings.solver);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    });
    for (long idx = 0; idx < count; ++idx)
        if (errors[idx]) std::rethrow_exception(errors[idx]);

    for (long idx = 0; idx < count; ++idx) {
        const CubeRecord& rec = out.records[idx];
        if (rec.cls == CubeClass::good) {
            out.good.emplace(idx, std::move(slots[idx]));
        } else {
            out.bad.emplace(idx, outward_faces(idx));
            out.charges.items.push_back({rec.center, rec.degree});
        }
    }
    return out;
}

double rescale_alpha(const CubicMesh& mesh) {
    double alpha = 1.0;
    for (int a = 0; a < mesh.dim; ++a) {
        alpha = std::min(alpha, -2.0 * mesh.plane(a, 1));
        alpha = std::min(alpha, 2.0 * mesh.plane(a, mesh.q_eps));
    }
    return alpha;
}

ApproximantField rescale(const ApproximantField& tilde) {
    ApproximantField out = tilde;
    const int n = tilde.mesh.dim;
    out.alpha = rescale_alpha(tilde.mesh);
    out.charges.items.clear();
    for (const auto& c : tilde.charges.items) {
        Charge moved = c;
        for (int a = 0; a < n; ++a) moved.pos[a] = c.pos[a] / out.alpha;
        if (inside_unit_cube(moved.pos, n)) out.charges.items.push_back(moved);
    }
    return out;
}

VectorField dilate(const VectorField& V, double alpha) {
    const int n = V.dim();
    // capture by value: the source field backs the callback
    VectorField src = V;
    const double s = apow(alpha, n - 1);
    AnalyticField fn = [src, alpha, s, n](const Point& x, double* out) {
        Point y{};
        for (int a = 0; a < n; ++a) y[a] = alpha * x[a];
        if (!inside_unit_cube(y, n)) {
            for (int a = 0; a < n; ++a) out[a] = 0.0;
            return;
        }
        Point v = src.eval(y);
        for (int a = 0; a < n; ++a) out[a] = s * v[a];
    };
    return VectorField(V.grid(), fn);
}

namespace {

struct TestFunction {
    std::string name;
    std::array<int, kMaxDim> expo{};
    int window_power = 1;

    double window(const Point& x, int n) const {
        double w = 1.0;
        for (int a = 0; a < n; ++a) w *= std::cos(M_PI * x[a]);
        double r = w;
        for (int k = 1; k < window_power; ++k) r *= w;
        return r;
    }
    double poly(const Point& x, int n) const {
        double v = 1.0;
        for (int a = 0; a < n; ++a)
            for (int e = 0; e < expo[a]; ++e) v *= x[a];
        return v;
    }
    double value(const Point& x, int n) const { return window(x, n) * poly(x, n); }

    Point grad(const Point& x, int n) const {
        Point g{};
        const double w = window(x, n);
        const double pv = poly(x, n);
        for (int a = 0; a < n; ++a) {
            // d/da window^k = -k pi tan(pi x_a) window^k
            double dw = -window_power * M_PI * std::tan(M_PI * x[a]) * w;
            double dp = 0.0;
            if (expo[a] > 0) {
                dp = expo[a];
                for (int b = 0; b < n; ++b) {
                    int e = expo[b] - (b == a ? 1 : 0);
                    for (int k = 0; k < e; ++k) dp *= x[b];
                }
            }
            g[a] = dw * pv + w * dp;
        }
        return g;
    }
};

std::vector<TestFunction> test_family(int n) {
    // windowed tensor polynomials: 10 lowest multi-indices x two window
    // powers = 20 functions
    std::vector<std::array<int, kMaxDim>> expos;
    for (int total = 0; total <= 3 && static_cast<int>(expos.size()) < 10; ++total) {
        std::array<int, kMaxDim> e{};
        // enumerate multi-indices of given total degree
        std::function<void(int, int)> rec = [&](int axis, int left) {
            if (static_cast<int>(expos.size()) >= 10) return;
            if (axis == n - 1) {
                e[axis] = left;
                expos.push_back(e);
                return;
            }
            for (int k = left; k >= 0; --k) {
                e[axis] = k;
                rec(axis + 1, left - k);
            }
        };
        rec(0, total);
    }
    std::vector<TestFunction> fam;
    for (int wp = 1; wp <= 2; ++wp) {
        for (const auto& e : expos) {
            TestFunction t;
            t.expo = e;
            t.window_power = wp;
            std::ostringstream name;
            name << "w" << wp << "*x^(";
            for (int a = 0; a < n; ++a) name << e[a] << (a + 1 < n ? "," : ")");
            t.name = name.str();
            fam.push_back(t);
        }
    }
    return fam;
}

}  // namespace

std::vector<ResidualEntry> divergence_residual_of(
    const std::function<Point(const Point&)>& eval, const ChargeSet& charges, int dim,
    int res) {
    const int n = dim;
    auto fam = test_family(n);

    long cells = 1;
    for (int a = 0; a < n; ++a) cells *= res;
    const double h = 1.0 / res;
    const double vol = apow(h, n);

    // evaluate the field once per grid point
    std::vector<double> samples(cells * n);
    std::vector<Point> pts(cells);
    for (long flat = 0; flat < cells; ++flat) {
        Point x{};
        long r = flat;
        for (int a = n - 1; a >= 0; --a) {
            long i = r % res;
            r /= res;
            x[a] = -0.5 + (i + 0.5) * h;
        }
        pts[flat] = x;
        Point v = eval(x);
        for (int a = 0; a < n; ++a) samples[flat * n + a] = v[a];
    }

    std::vector<ResidualEntry> out;
    out.reserve(fam.size());
    for (const auto& t : fam) {
        double pairing = 0.0;
        double gsup = 0.0;
        for (long flat = 0; flat < cells; ++flat) {
            Point g = t.grad(pts[flat], n);
            double dot = 0.0, g2 = 0.0;
            for (int a = 0; a < n; ++a) {
                dot += samples[flat * n + a] * g[a];
                g2 += g[a] * g[a];
            }
            pairing += dot * vol;
            gsup = std::max(gsup, std::sqrt(g2));
        }
        double charge_term = 0.0;
        for (const auto& c : charges.items) charge_term += c.deg * t.value(c.pos, n);
        out.push_back({t.name, std::abs(pairing + charge_term), gsup});
    }
    return out;
}

std::vector<ResidualEntry> divergence_residual(const ApproximantField& field, int res,
                                               const ChargeSet* charges_override) {
    const int n = field.mesh.dim;
    if (res <= 0) res = field.provenance.auto_eval_res(n);
    const ChargeSet& charges = charges_override ? *charges_override : field.charges;
    return divergence_residual_of([&field](const Point& x) { return field.eval(x); },
                                  charges, n, res);
}

double approximation_error(const ApproximantField& A, const VectorField& V, double p,
                           const WeightedMeasure& mu, int res) {
    const int n = V.dim();
    // before rescaling the approximant lives on Omega_eps only
    Cube domain = A.alpha == 1.0 ? A.mesh.omega()
                                 : cube_centered(Point{}, 1.0, n);
    long cells = 1;
    for (int a = 0; a < n; ++a) cells *= res;
    const double step = domain.edge() / res;
    const double vol = apow(step, n);

    double acc = 0.0;
    for (long flat = 0; flat < cells; ++flat) {
        Point x{};
        long r = flat;
        for (int a = n - 1; a >= 0; --a) {
            long i = r % res;
            r /= res;
            x[a] = domain.lo[a] + (i + 0.5) * step;
        }
        Point va = A.eval(x);
        Point vv = V.eval(x);
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
            double d = va[a] - vv[a];
            s += d * d;
        }
        acc += std::pow(std::sqrt(s), p) * mu.density(x, n) * vol;
    }
    return std::pow(acc, 1.0 / p);
}

std::vector<SweepRow> converge_sweep(const VectorField& V, const std::vector<double>& eps_list,
                                     const PipelineSettings& settings) {
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::invalid_argument("epsilon list must be strictly descending");
    for (double e : eps_list)
        if (!(e > 0.0 && e <= 0.25))
            throw std::invalid_argument("epsilon must lie in (0, 1/4)");

    const WeightedMeasure mu = settings.measure();
    std::vector<SweepRow> rows(eps_list.size());
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        SweepRow& row = rows[i];
        row.epsilon = eps_list[i];
        auto t0 = std::chrono::steady_clock::now();
        try {
            ApproximantField tilde = assemble(V, eps_list[i], settings);
            row.alpha = rescale_alpha(tilde.mesh);
            row.bad_count = static_cast<long>(tilde.charges.items.size());
            // the convergence quantity: || tilde V_eps - V ||_{L^p(Omega_eps, mu)}
            row.lp_error = approximation_error(tilde, V, settings.p, mu,
                                               settings.auto_eval_res(V.dim()));
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        row.wallclock_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    return rows;
}

}  // namespace fluxforge
