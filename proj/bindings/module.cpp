#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fluxforge/audit.hpp"
#include "fluxforge/generators.hpp"
#include "fluxforge/io.hpp"
#include "fluxforge/oned.hpp"

namespace py = pybind11;
using namespace fluxforge;

namespace {

Point to_point(const std::vector<double>& v) {
    if (v.size() > kMaxDim) throw std::invalid_argument("too many coordinates");
    Point p{};
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
    return p;
}

std::vector<double> from_point(const Point& p, int dim) {
    return std::vector<double>(p.begin(), p.begin() + dim);
}

ChargeSet to_charges(const std::vector<std::pair<std::vector<double>, long>>& items) {
    ChargeSet cs;
    for (const auto& [pos, deg] : items) cs.items.push_back({to_point(pos), deg});
    return cs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "vector fields with integer topological singularities on the unit cube";

    py::class_<VectorField>(m, "VectorField")
        .def_property_readonly("dim", &VectorField::dim)
        .def_property_readonly("cells", [](const VectorField& v) { return v.grid().cells; })
        .def_property_readonly("values",
                               [](const VectorField& v) { return v.values(); })
        .def("eval", [](const VectorField& v, const std::vector<double>& x) {
            return from_point(v.eval(to_point(x)), v.dim());
        });

    py::class_<FluxSample>(m, "FluxSample")
        .def_readonly("rho", &FluxSample::rho)
        .def_readonly("flux", &FluxSample::flux)
        .def_readonly("nearest", &FluxSample::nearest)
        .def_readonly("deviation", &FluxSample::deviation)
        .def_readonly("skipped", &FluxSample::skipped);

    py::class_<FluxAuditReport>(m, "FluxAuditReport")
        .def_readonly("samples", &FluxAuditReport::samples)
        .def_readonly("pass_fraction", &FluxAuditReport::pass_fraction)
        .def_readonly("max_deviation", &FluxAuditReport::max_deviation)
        .def_readonly("n_skipped", &FluxAuditReport::n_skipped)
        .def_property_readonly("verdict", [](const FluxAuditReport& r) {
            return to_string(r.verdict);
        });

    py::class_<CubeRecord>(m, "CubeRecord")
        .def_readonly("index", &CubeRecord::index)
        .def_readonly("flux", &CubeRecord::flux)
        .def_readonly("degree", &CubeRecord::degree)
        .def_property_readonly("center", [](const CubeRecord& r) {
            return std::vector<double>(r.center.begin(), r.center.end());
        })
        .def_property_readonly("cls", [](const CubeRecord& r) {
            return r.cls == CubeClass::good ? "good"
                   : r.cls == CubeClass::bad ? "bad"
                                             : "non-integral";
        });

    py::class_<StepFunction>(m, "StepFunction")
        .def_readonly("breakpoints", &StepFunction::breakpoints)
        .def_readonly("values", &StepFunction::values)
        .def_readonly("offset", &StepFunction::offset)
        .def("__call__", &StepFunction::eval);

    m.def(
        "gen_vortex",
        [](const std::vector<std::pair<std::vector<double>, long>>& charges, int n, int N) {
            return gen_vortex(to_charges(charges), n, N);
        },
        py::arg("charges"), py::arg("n") = 2, py::arg("N") = 128);

    m.def(
        "gen_circle_map_current",
        [](const std::vector<std::pair<std::vector<double>, long>>& charges, int N) {
            return gen_circle_map_current(to_charges(charges), N);
        },
        py::arg("charges"), py::arg("N") = 128);

    m.def(
        "gen_divfree",
        [](std::uint64_t seed, int n, int N) { return gen_divfree(seed, n, N); },
        py::arg("seed") = 42, py::arg("n") = 2, py::arg("N") = 128);

    m.def(
        "lp_norm",
        [](const VectorField& V, double p, double q) {
            return lp_norm(V, p, WeightedMeasure(q));
        },
        py::arg("field"), py::arg("p") = 2.0, py::arg("q") = 0.0);

    m.def(
        "boundary_flux",
        [](const VectorField& V, const std::vector<double>& center, double edge, int M) {
            return boundary_flux(V, cube_centered(to_point(center), edge, V.dim()), M);
        },
        py::arg("field"), py::arg("center"), py::arg("edge"), py::arg("M") = 256);

    m.def(
        "integer_flux_scan",
        [](const VectorField& V, double tol, int centers, int radii, std::uint64_t seed,
           int M) {
            AuditOptions opt;
            opt.tolerance = tol;
            opt.n_centers = centers;
            opt.n_radii = radii;
            opt.seed = seed;
            opt.quadrature_M = M;
            return integer_flux_scan(V, opt);
        },
        py::arg("field"), py::arg("tol") = 1e-2, py::arg("centers") = 50,
        py::arg("radii") = 20, py::arg("seed") = 42, py::arg("M") = 256);

    m.def(
        "classify_cubes",
        [](const VectorField& V, double epsilon, double p, double q, int candidates,
           std::uint64_t seed, double tol) {
            CubicMesh mesh =
                select_shift(V, epsilon, p, WeightedMeasure(q), candidates, seed);
            return classify_cubes(V, mesh, tol);
        },
        py::arg("field"), py::arg("epsilon"), py::arg("p") = 1.5, py::arg("q") = 0.0,
        py::arg("candidates") = 32, py::arg("seed") = 42, py::arg("tol") = 1e-2);

    m.def(
        "approximate",
        [](const VectorField& V, double epsilon, double p, double q, std::uint64_t seed,
           bool force_round, int threads) {
            PipelineSettings s;
            s.p = p;
            s.q = q;
            s.seed = seed;
            s.force_round = force_round;
            s.threads = threads;
            ApproximantField tilde = assemble(V, epsilon, s);
            ApproximantField bar = rescale(tilde);
            double err = approximation_error(tilde, V, p, s.measure(),
                                             s.auto_eval_res(V.dim()));
            py::dict out;
            out["alpha"] = bar.alpha;
            out["lp_error"] = err;
            out["skeleton_deviation"] = tilde.skeleton_deviation;
            py::list charges;
            for (const auto& c : bar.charges.items) {
                py::dict ch;
                ch["pos"] = from_point(c.pos, V.dim());
                ch["deg"] = c.deg;
                charges.append(ch);
            }
            out["charges"] = charges;
            return out;
        },
        py::arg("field"), py::arg("epsilon"), py::arg("p") = 1.5, py::arg("q") = 0.0,
        py::arg("seed") = 42, py::arg("force_round") = false, py::arg("threads") = 1);

    m.def(
        "converge_sweep",
        [](const VectorField& V, const std::vector<double>& eps, double p, double q,
           std::uint64_t seed, int threads) {
            PipelineSettings s;
            s.p = p;
            s.q = q;
            s.seed = seed;
            s.threads = threads;
            py::list rows;
            for (const auto& r : converge_sweep(V, eps, s)) {
                py::dict row;
                row["epsilon"] = r.epsilon;
                row["lp_error"] = r.lp_error;
                row["bad_count"] = r.bad_count;
                row["alpha"] = r.alpha;
                row["error"] = r.error;
                rows.append(row);
            }
            return rows;
        },
        py::arg("field"), py::arg("eps"), py::arg("p") = 1.5, py::arg("q") = 0.0,
        py::arg("seed") = 42, py::arg("threads") = 1);

    m.def(
        "greedy_connection",
        [](const std::vector<std::pair<std::vector<double>, long>>& charges, int dim,
           std::optional<std::vector<double>> boundary_point) {
            std::optional<Point> bp;
            if (boundary_point) bp = to_point(*boundary_point);
            OneCurrent cur = greedy_connection(to_charges(charges), dim, bp);
            py::list segs;
            for (const auto& s : cur.segments) {
                py::dict seg;
                seg["a"] = from_point(s.a, dim);
                seg["b"] = from_point(s.b, dim);
                seg["mult"] = s.mult;
                segs.append(seg);
            }
            return segs;
        },
        py::arg("charges"), py::arg("dim") = 2, py::arg("boundary_point") = py::none());

    m.def(
        "minimal_connection",
        [](const std::vector<std::pair<std::vector<double>, long>>& charges, int dim) {
            MinimalConnection mc = minimal_connection(to_charges(charges), dim);
            py::dict out;
            out["mass"] = mc.mass;
            py::list segs;
            for (const auto& s : mc.current.segments) {
                py::dict seg;
                seg["a"] = from_point(s.a, dim);
                seg["b"] = from_point(s.b, dim);
                seg["mult"] = s.mult;
                segs.append(seg);
            }
            out["segments"] = segs;
            return out;
        },
        py::arg("charges"), py::arg("dim") = 2);

    m.def(
        "dual_value",
        [](const std::vector<std::pair<std::vector<double>, long>>& charges, int dim,
           int grid_res) {
            DualCertificate cert = dual_value(to_charges(charges), dim, grid_res);
            py::dict out;
            out["value"] = cert.value;
            out["feasibility_residual"] = cert.feasibility_residual;
            return out;
        },
        py::arg("charges"), py::arg("dim") = 2, py::arg("grid_res") = 128);

    m.def("integer_step_projection", &integer_step_projection, py::arg("samples"),
          py::arg("K") = 16, py::arg("tol") = 1e-2, py::arg("p") = 2.0);

    m.def(
        "weak_approx_sequence",
        [](const std::function<double(double)>& f, int levels) {
            return weak_approx_sequence(f, levels);
        },
        py::arg("f"), py::arg("levels"));

    m.def("write_ffld", &write_ffld, py::arg("path"), py::arg("field"), py::arg("q") = 0.0);
    m.def("read_ffld", [](const std::string& path) {
        auto [V, q] = read_ffld(path);
        return py::make_tuple(V, q);
    });
}
