#include "fluxforge/extension.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

namespace fluxforge {

namespace {

struct FeGrid {
    int dim;
    int m;        // elements per axis
    double h;     // element width
    Cube cube;

    int nodes_per_axis() const { return m + 1; }
    long node_count() const {
        long c = 1;
        for (int i = 0; i < dim; ++i) c *= nodes_per_axis();
        return c;
    }
    long element_count() const {
        long c = 1;
        for (int i = 0; i < dim; ++i) c *= m;
        return c;
    }
    void decode_element(long flat, int idx[kMaxDim]) const {
        for (int a = dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % m);
            flat /= m;
        }
    }
    long node_index(const int idx[kMaxDim]) const {
        long f = 0;
        for (int a = 0; a < dim; ++a) f = f * nodes_per_axis() + idx[a];
        return f;
    }
    double vol() const { return std::pow(h, dim); }
};

// Gradient of the multilinear interpolant at the element center:
// averaged corner differences per axis.
void element_gradient(const FeGrid& g, const std::vector<double>& u, const int ei[kMaxDim],
                      double grad[kMaxDim], double corner_vals[1 << kMaxDim]) {
    const int n = g.dim;
    const int corners = 1 << n;
    const double gf = 1.0 / ((corners / 2) * g.h);
    for (int c = 0; c < corners; ++c) {
        int idx[kMaxDim];
        for (int a = 0; a < n; ++a) idx[a] = ei[a] + ((c >> a) & 1);
        corner_vals[c] = u[g.node_index(idx)];
    }
    for (int a = 0; a < n; ++a) {
        double acc = 0.0;
        for (int c = 0; c < corners; ++c)
            acc += ((c >> a) & 1) ? corner_vals[c] : -corner_vals[c];
        grad[a] = acc * gf;
    }
}

double energy_of(const FeGrid& g, const std::vector<double>& u, double pprime, double reg,
                 const std::vector<double>& b) {
    const int n = g.dim;
    const long elems = g.element_count();
    const double vol = g.vol();
    double acc = 0.0;
    double grad[kMaxDim];
    double corners[1 << kMaxDim];
    int ei[kMaxDim];
    for (long e = 0; e < elems; ++e) {
        g.decode_element(e, ei);
        element_gradient(g, u, ei, grad, corners);
        double g2 = reg * reg;
        for (int a = 0; a < n; ++a) g2 += grad[a] * grad[a];
        acc += std::pow(g2, 0.5 * pprime);
    }
    double lin = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) lin += b[i] * u[i];
    return acc * vol / pprime - lin;
}

void gradient_of(const FeGrid& g, const std::vector<double>& u, double pprime, double reg,
                 const std::vector<double>& b, std::vector<double>& out) {
    const int n = g.dim;
    const long elems = g.element_count();
    const double vol = g.vol();
    const int corners = 1 << n;
    const double gf = 1.0 / ((corners / 2) * g.h);
    std::fill(out.begin(), out.end(), 0.0);
    double grad[kMaxDim];
    double cv[1 << kMaxDim];
    int ei[kMaxDim];
    for (long e = 0; e < elems; ++e) {
        g.decode_element(e, ei);
        element_gradient(g, u, ei, grad, cv);
        double g2 = reg * reg;
        for (int a = 0; a < n; ++a) g2 += grad[a] * grad[a];
        double sigma = std::pow(g2, 0.5 * pprime - 1.0) * vol;
        for (int c = 0; c < corners; ++c) {
            int idx[kMaxDim];
            for (int a = 0; a < n; ++a) idx[a] = ei[a] + ((c >> a) & 1);
            long node = g.node_index(idx);
            double acc = 0.0;
            for (int a = 0; a < n; ++a)
                acc += (((c >> a) & 1) ? 1.0 : -1.0) * grad[a];
            out[node] += sigma * acc * gf;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
}

// Boundary functional: b[node] accumulates quadrature weight x datum x trace
// interpolation weight, so b.u is exactly the face term of the energy.
std::vector<double> boundary_functional(const FeGrid& g, const std::vector<FaceData>& faces) {
    const int n = g.dim;
    std::vector<double> b(g.node_count(), 0.0);
    for (int axis = 0; axis < n; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const FaceData& fd = faces[axis * 2 + side];
            const double w = fd.grid.weight();
            const long count = fd.grid.count();
            for (long s = 0; s < count; ++s) {
                Point y = fd.grid.node(s);
                double fw = fd.samples[s] * w;
                // scatter onto the 2^(n-1) surrounding face nodes
                int base[kMaxDim];
                double t[kMaxDim];
                int cross[kMaxDim];
                int ncross = 0;
                for (int a = 0; a < n; ++a) {
                    if (a == axis) continue;
                    double u = (y[a] - g.cube.lo[a]) / g.h;
                    int i0 = static_cast<int>(std::floor(u));
                    i0 = std::clamp(i0, 0, g.m - 1);
                    base[a] = i0;
                    t[a] = std::clamp(u - i0, 0.0, 1.0);
                    cross[ncross++] = a;
                }
                const int combos = 1 << ncross;
                for (int cbits = 0; cbits < combos; ++cbits) {
                    int idx[kMaxDim];
                    idx[axis] = side * g.m;
                    double ww = 1.0;
                    for (int k = 0; k < ncross; ++k) {
                        int a = cross[k];
                        int bit = (cbits >> k) & 1;
                        idx[a] = base[a] + bit;
                        ww *= bit ? t[a] : (1.0 - t[a]);
                    }
                    if (ww != 0.0) b[g.node_index(idx)] += fw * ww;
                }
            }
        }
    }
    return b;
}

void demean(std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

// Diagonal of the sigma-weighted stiffness at the current iterate; the local
// curvature scale, used as the Jacobi preconditioner.
std::vector<double> stiffness_diagonal(const FeGrid& g, const std::vector<double>& u,
                                       double pprime, double reg) {
    const int n = g.dim;
    const int corners = 1 << n;
    const double gf = 1.0 / ((corners / 2) * g.h);
    const double per_corner = n * gf * gf * g.vol();
    std::vector<double> diag(g.node_count(), 0.0);
    double grad[kMaxDim];
    double cv[1 << kMaxDim];
    int ei[kMaxDim];
    for (long e = 0; e < g.element_count(); ++e) {
        g.decode_element(e, ei);
        element_gradient(g, u, ei, grad, cv);
        double g2 = reg * reg;
        for (int a = 0; a < n; ++a) g2 += grad[a] * grad[a];
        double sigma = std::pow(g2, 0.5 * pprime - 1.0);
        // the (p'-2) term can make the true curvature smaller or larger;
        // sigma alone keeps the preconditioner positive and well-scaled
        double w = sigma * (pprime < 2.0 ? 1.0 : pprime - 1.0);
        for (int c = 0; c < corners; ++c) {
            int idx[kMaxDim];
            for (int a = 0; a < n; ++a) idx[a] = ei[a] + ((c >> a) & 1);
            diag[g.node_index(idx)] += per_corner * w;
        }
    }
    return diag;
}

std::vector<double> solve_direct_p2(const FeGrid& g, const std::vector<double>& b) {
    const int n = g.dim;
    const long NN = g.node_count();
    const int corners = 1 << n;
    const double gf = 1.0 / ((corners / 2) * g.h);
    const double vol = g.vol();

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(g.element_count() * corners * corners);
    int ei[kMaxDim];
    for (long e = 0; e < g.element_count(); ++e) {
        g.decode_element(e, ei);
        long nodes[1 << kMaxDim];
        for (int c = 0; c < corners; ++c) {
            int idx[kMaxDim];
            for (int a = 0; a < n; ++a) idx[a] = ei[a] + ((c >> a) & 1);
            nodes[c] = g.node_index(idx);
        }
        for (int c1 = 0; c1 < corners; ++c1) {
            for (int c2 = 0; c2 < corners; ++c2) {
                double dot = 0.0;
                for (int a = 0; a < n; ++a) {
                    double w1 = ((c1 >> a) & 1) ? 1.0 : -1.0;
                    double w2 = ((c2 >> a) & 1) ? 1.0 : -1.0;
                    dot += w1 * w2;
                }
                double val = dot * gf * gf * vol;
                // pin node 0 to fix the constant mode
                if (nodes[c1] == 0 || nodes[c2] == 0) continue;
                trips.emplace_back(static_cast<int>(nodes[c1] - 1),
                                   static_cast<int>(nodes[c2] - 1), val);
            }
        }
    }
    Eigen::SparseMatrix<double> A(NN - 1, NN - 1);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd rhs(NN - 1);
    for (long i = 1; i < NN; ++i) rhs[i - 1] = b[i];

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("sparse factorization failed");
    Eigen::VectorXd x = solver.solve(rhs);

    std::vector<double> u(NN, 0.0);
    for (long i = 1; i < NN; ++i) u[i] = x[i - 1];
    demean(u);
    return u;
}

}  // namespace

double ExtensionResult::lp_volume_integral(double p, const Cube& cube) const {
    const int n = cube.dim;
    const double h = cube.edge() / m;
    const double vol = std::pow(h, n);
    long elems = static_cast<long>(field.size()) / n;
    double acc = 0.0;
    for (long e = 0; e < elems; ++e) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += field[e * n + a] * field[e * n + a];
        acc += std::pow(std::sqrt(s), p);
    }
    return acc * vol;
}

Point ExtensionResult::eval(const Cube& cube, const Point& x) const {
    const int n = cube.dim;
    const double h = cube.edge() / m;
    int base[kMaxDim];
    double t[kMaxDim];
    for (int a = 0; a < n; ++a) {
        double u = (x[a] - cube.lo[a]) / h - 0.5;
        int i0 = static_cast<int>(std::floor(u));
        i0 = std::clamp(i0, 0, std::max(0, m - 2));
        base[a] = i0;
        t[a] = m > 1 ? std::clamp(u - i0, 0.0, 1.0) : 0.0;
    }
    Point out{};
    const int corners = 1 << n;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        long flat = 0;
        for (int a = 0; a < n; ++a) {
            int bit = (c >> a) & 1;
            int idx = base[a] + (m > 1 ? bit : 0);
            w *= bit ? t[a] : (1.0 - t[a]);
            flat = flat * m + idx;
        }
        if (w == 0.0) continue;
        for (int a = 0; a < n; ++a) out[a] += w * field[flat * n + a];
    }
    return out;
}

ExtensionResult extend_good(const NeumannProblem& problem, const SolverOptions& opt) {
    const int n = problem.cube.dim;
    if (problem.pprime <= 1.0) throw std::invalid_argument("p' must exceed 1");
    if (static_cast<int>(problem.faces.size()) != 2 * n)
        throw std::invalid_argument("need one datum per face");

    const double fl1 = problem.boundary_l1();
    if (std::abs(problem.total_boundary_integral()) > 1e-12 * std::max(1.0, fl1))
        throw std::invalid_argument("non-compatible Neumann datum");

    FeGrid g{n, problem.m, problem.cube.edge() / problem.m, problem.cube};
    std::vector<double> b = boundary_functional(g, problem.faces);
    demean(b);  // exact discrete compatibility

    const double reg = opt.reg_scale * std::max(1.0, fl1);
    const double scale = std::max(1.0, fl1);

    std::vector<double> u(g.node_count(), 0.0);
    int iterations = 0;
    bool converged = true;
    std::vector<double> energy_trace;

    if (fl1 == 0.0) {
        // zero datum: the strictly convex energy is minimized at 0
    } else if (problem.pprime == 2.0 && !opt.force_descent) {
        u = solve_direct_p2(g, b);
        iterations = 1;
    } else {
        u = solve_direct_p2(g, b);  // warm start from the linear problem

        std::vector<double> diag = stiffness_diagonal(g, u, problem.pprime, reg);
        double dmin = *std::max_element(diag.begin(), diag.end()) * 1e-12;
        for (double& d : diag) d = std::max(d, dmin);

        std::vector<double> grad(u.size()), pg(u.size());
        std::vector<double> u_prev, g_prev;
        double E = energy_of(g, u, problem.pprime, reg, b);
        double alpha = 1.0;
        gradient_of(g, u, problem.pprime, reg, b, grad);
        energy_trace.push_back(E);

        for (iterations = 0; iterations < opt.max_iter; ++iterations) {
            double gmax = 0.0;
            for (double v : grad) gmax = std::max(gmax, std::abs(v));
            if (gmax <= opt.tol * scale) break;

            if (iterations > 0 && iterations % 25 == 0) {
                diag = stiffness_diagonal(g, u, problem.pprime, reg);
                double dm = *std::max_element(diag.begin(), diag.end()) * 1e-12;
                for (double& d : diag) d = std::max(d, dm);
            }
            for (std::size_t i = 0; i < u.size(); ++i) pg[i] = grad[i] / diag[i];

            if (!u_prev.empty()) {
                double sy = 0.0, ypy = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    double s = u[i] - u_prev[i];
                    double y = grad[i] - g_prev[i];
                    sy += s * y;
                    ypy += y * y / diag[i];
                }
                if (sy > 0.0 && ypy > 0.0) alpha = sy / ypy;
            }
            alpha = std::clamp(alpha, 1e-14, 1e10);

            double gdotp = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) gdotp += grad[i] * pg[i];

            u_prev = u;
            g_prev = grad;
            double step = alpha;
            double E_new = E;
            bool accepted = false;
            std::vector<double> trial(u.size());
            std::vector<double> best_trial;
            double best_E = E;
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - step * pg[i];
                E_new = energy_of(g, trial, problem.pprime, reg, b);
                if (E_new < best_E) {
                    best_E = E_new;
                    best_trial = trial;
                }
                if (E_new <= E - 1e-4 * step * gdotp) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                // sufficient decrease unattainable: settle for strict decrease
                if (best_trial.empty()) break;  // stalled: keep the iterate
                trial = std::move(best_trial);
                E_new = best_E;
            }
            u = trial;
            demean(u);
            E = E_new;
            energy_trace.push_back(E);
            gradient_of(g, u, problem.pprime, reg, b, grad);
        }
        double gmax = 0.0;
        for (double v : grad) gmax = std::max(gmax, std::abs(v));
        converged = gmax <= 10.0 * opt.tol * scale;
    }

    ExtensionResult res;
    res.m = problem.m;
    res.iterations = iterations;
    res.converged = converged;
    res.energy_trace = std::move(energy_trace);
    res.energy = energy_of(g, u, problem.pprime, reg, b);

    // V = (|grad u|^2 + reg^2)^((p'-2)/2) grad u at element centers
    res.field.resize(g.element_count() * n);
    {
        double grad[kMaxDim];
        double cv[1 << kMaxDim];
        int ei[kMaxDim];
        for (long e = 0; e < g.element_count(); ++e) {
            g.decode_element(e, ei);
            element_gradient(g, u, ei, grad, cv);
            double g2 = reg * reg;
            for (int a = 0; a < n; ++a) g2 += grad[a] * grad[a];
            double sigma = std::pow(g2, 0.5 * problem.pprime - 1.0);
            for (int a = 0; a < n; ++a) res.field[e * n + a] = sigma * grad[a];
        }
    }

    // Weak-divergence residual against polynomials of degree <= 2; their
    // nodal interpolants have element-center gradients equal to the exact
    // ones, so this probes stationarity of the minimized functional.
    {
        const Point c = problem.cube.center();
        const double edge = problem.cube.edge();
        std::vector<std::function<Point(const Point&)>> grads;
        std::vector<std::function<double(const Point&)>> phis;
        phis.emplace_back([](const Point&) { return 1.0; });
        grads.emplace_back([](const Point&) { return Point{}; });
        for (int a = 0; a < n; ++a) {
            phis.emplace_back([a, c](const Point& x) { return x[a] - c[a]; });
            grads.emplace_back([a](const Point&) {
                Point g{};
                g[a] = 1.0;
                return g;
            });
        }
        for (int a = 0; a < n; ++a) {
            for (int bx = a; bx < n; ++bx) {
                phis.emplace_back([a, bx, c, edge](const Point& x) {
                    return (x[a] - c[a]) * (x[bx] - c[bx]) / edge;
                });
                grads.emplace_back([a, bx, c, edge](const Point& x) {
                    Point g{};
                    g[a] += (x[bx] - c[bx]) / edge;
                    g[bx] += (x[a] - c[a]) / edge;
                    return g;
                });
            }
        }

        double worst = 0.0;
        const double vol = g.vol();
        for (std::size_t k = 0; k < phis.size(); ++k) {
            double lhs = 0.0;
            int ei[kMaxDim];
            for (long e = 0; e < g.element_count(); ++e) {
                g.decode_element(e, ei);
                Point xc{};
                for (int a = 0; a < n; ++a) xc[a] = g.cube.lo[a] + (ei[a] + 0.5) * g.h;
                Point gp = grads[k](xc);
                for (int a = 0; a < n; ++a) lhs += res.field[e * n + a] * gp[a] * vol;
            }
            double rhs = 0.0;
            for (long i = 0; i < g.node_count(); ++i) {
                if (b[i] == 0.0) continue;
                long f = i;
                int idx[kMaxDim];
                for (int a = n - 1; a >= 0; --a) {
                    idx[a] = static_cast<int>(f % g.nodes_per_axis());
                    f /= g.nodes_per_axis();
                }
                Point x{};
                for (int a = 0; a < n; ++a) x[a] = g.cube.lo[a] + idx[a] * g.h;
                rhs += b[i] * phis[k](x);
            }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        res.div_residual = worst / std::max(1e-30, fl1);
    }

    // Per-face discrete Neumann balance: the stationarity combination tied to
    // the nodal indicator of each boundary face.
    {
        // The indicator of a wall is multilinear on the adjacent element
        // layer with element-center gradient +-1/h along the normal.
        double worst = 0.0;
        for (int axis = 0; axis < n; ++axis) {
            for (int side = 0; side < 2; ++side) {
                const int wall = side * g.m;
                const double sgn = side == 1 ? 1.0 : -1.0;
                double lhs = 0.0, rhs = 0.0;
                int ei[kMaxDim];
                for (long e = 0; e < g.element_count(); ++e) {
                    g.decode_element(e, ei);
                    if ((side == 0 && ei[axis] != 0) || (side == 1 && ei[axis] != g.m - 1))
                        continue;
                    lhs += res.field[e * n + axis] * sgn / g.h * g.vol();
                }
                for (long i = 0; i < g.node_count(); ++i) {
                    long f = i;
                    int idx[kMaxDim];
                    for (int a = n - 1; a >= 0; --a) {
                        idx[a] = static_cast<int>(f % g.nodes_per_axis());
                        f /= g.nodes_per_axis();
                    }
                    if (idx[axis] == wall) rhs += b[i];
                }
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
        res.neumann_mismatch = worst / std::max(1e-30, fl1);
    }

    return res;
}

namespace {

double face_value(const FaceData& fd, const Point& y) {
    const FaceGrid& g = fd.grid;
    const int n = g.dim;
    const double step = g.edge / g.M;
    int base[kMaxDim];
    double t[kMaxDim];
    for (int a = 0; a < n; ++a) {
        if (a == g.axis) continue;
        double u = (y[a] - g.lo[a]) / step - 0.5;
        int i0 = static_cast<int>(std::floor(u));
        i0 = std::clamp(i0, 0, std::max(0, g.M - 2));
        base[a] = i0;
        t[a] = g.M > 1 ? std::clamp(u - i0, 0.0, 1.0) : 0.0;
    }
    double out = 0.0;
    const int fdim = n - 1;
    const int combos = 1 << fdim;
    for (int c = 0; c < combos; ++c) {
        int idx[kMaxDim];
        double w = 1.0;
        int k = 0;
        for (int a = 0; a < n; ++a) {
            if (a == g.axis) continue;
            int bit = (c >> k) & 1;
            ++k;
            idx[a] = base[a] + (g.M > 1 ? bit : 0);
            w *= bit ? t[a] : (1.0 - t[a]);
        }
        if (w == 0.0) continue;
        long flat = 0;
        for (int a = 0; a < n; ++a) {
            if (a == g.axis) continue;
            flat = flat * g.M + idx[a];
        }
        out += w * fd.samples[flat];
    }
    return out;
}

}  // namespace

Point extend_bad(const Cube& cube, const std::vector<FaceData>& faces, const Point& x) {
    const int n = cube.dim;
    const Point c = cube.center();
    const double eps = cube.edge();

    double d[kMaxDim];
    double r = 0.0;
    int axis = 0;
    for (int a = 0; a < n; ++a) {
        d[a] = x[a] - c[a];
        if (std::abs(d[a]) > r) {
            r = std::abs(d[a]);
            axis = a;
        }
    }
    if (r == 0.0) throw std::invalid_argument("evaluation at singularity");
    int side = d[axis] > 0 ? 1 : 0;

    Point y{};
    for (int a = 0; a < n; ++a) y[a] = c[a] + 0.5 * eps * d[a] / r;
    double f = face_value(faces[axis * 2 + side], y);

    // prefactor (eps/2)^{n-1} makes the normal trace on the cube boundary
    // equal f, so the center charge is exactly the boundary integral of f
    double scale = f * std::pow(0.5 * eps, n - 1) / std::pow(r, n);
    Point out{};
    for (int a = 0; a < n; ++a) out[a] = scale * d[a];
    return out;
}

double bad_cube_lp(const Cube& cube, const std::vector<FaceData>& faces, double p,
                   int shells) {
    const int n = cube.dim;
    if (p < 1.0 || p >= static_cast<double>(n) / (n - 1))
        throw std::invalid_argument("extension not p-integrable");
    const double eps = cube.edge();
    const Point c = cube.center();

    // angular factor: int_{dQ} |f(y)|^p |y-c|^p dH(y) on the native grids
    double angular = 0.0;
    for (const auto& fd : faces) {
        const double w = fd.grid.weight();
        for (long i = 0; i < fd.grid.count(); ++i) {
            Point y = fd.grid.node(i);
            double dist = euclid_dist(y, c, n);
            angular += std::pow(std::abs(fd.samples[i]), p) * std::pow(dist, p) * w;
        }
    }

    // radial factor by midpoint shells over (0, eps/2)
    const double expo = (n - 1) * (1.0 - p);
    const double step = 0.5 * eps / shells;
    double radial = 0.0;
    for (int s = 0; s < shells; ++s) {
        double rho = (s + 0.5) * step;
        radial += std::pow(rho, expo) * step;
    }

    double front = std::pow(0.5 * eps, (n - 1) * p) * std::pow(2.0 / eps, p + n - 1);
    return front * radial * angular;
}

double bad_cube_pairing(const Cube& cube, const std::vector<FaceData>& faces,
                        const std::function<Point(const Point&)>& grad_phi, int shells) {
    const int n = cube.dim;
    const double eps = cube.edge();
    const Point c = cube.center();
    const double step = 0.5 * eps / shells;
    const double front = std::pow(0.5 * eps, n - 1) * std::pow(2.0 / eps, n);

    double acc = 0.0;
    for (const auto& fd : faces) {
        const double w = fd.grid.weight();
        for (long i = 0; i < fd.grid.count(); ++i) {
            Point y = fd.grid.node(i);
            double ydist[kMaxDim];
            for (int a = 0; a < n; ++a) ydist[a] = y[a] - c[a];
            double fy = fd.samples[i];
            if (fy == 0.0) continue;
            double inner = 0.0;
            for (int s = 0; s < shells; ++s) {
                double rho = (s + 0.5) * step;
                Point x{};
                double lam = 2.0 * rho / eps;
                for (int a = 0; a < n; ++a) x[a] = c[a] + lam * ydist[a];
                Point gp = grad_phi(x);
                double dot = 0.0;
                for (int a = 0; a < n; ++a) dot += ydist[a] * gp[a];
                inner += dot * step;
            }
            acc += fy * inner * w;
        }
    }
    return front * acc;
}

double bad_cube_constant(int n, double p) {
    const double s = (n - 1) * (p - 1.0);
    if (s >= 1.0) throw std::invalid_argument("extension not p-integrable");
    double radial = std::pow(0.5, 1.0 - s) / (1.0 - s);
    return std::pow(static_cast<double>(n), 0.5 * p) * std::pow(2.0, -s) * radial;
}

}  // namespace fluxforge
