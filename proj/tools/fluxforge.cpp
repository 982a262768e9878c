// fluxforge: build, audit and approximate vector fields with integer point
// singularities on the unit cube; solve minimal connections for their charges.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fluxforge/audit.hpp"
#include "fluxforge/generators.hpp"
#include "fluxforge/io.hpp"
#include "fluxforge/parallel.hpp"

using namespace fluxforge;
using nlohmann::json;

namespace {

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("FLUXFORGE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return default_threads();
}

std::vector<double> parse_eps_list(const std::string& spec) {
    std::vector<double> eps;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        eps.push_back(std::stod(tok));
    }
    if (eps.empty()) throw std::invalid_argument("empty epsilon list");
    return eps;
}

std::vector<double> read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<double> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            samples.push_back(std::stod(tok));
        }
    }
    if (samples.empty()) throw std::runtime_error("no samples in " + path);
    return samples;
}

void emit(const json& j, const std::string& out_path, bool to_stdout) {
    if (!out_path.empty()) save_json(out_path, j);
    if (to_stdout || out_path.empty()) std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vector fields with integer topological singularities on Q_1(0)"};
    app.require_subcommand(1);

    int threads_flag = 0;
    app.add_option("--threads", threads_flag, "worker threads (default: cores)");
    bool json_out = false;
    app.add_flag("--json", json_out, "mirror results as JSON on stdout");

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a field file");
    gen->require_subcommand(1);
    std::string gen_charges, gen_out = "field.ffld";
    int gen_n = 2, gen_N = 128;
    double gen_q = 0.0;
    std::uint64_t gen_seed = 42;

    auto* gv = gen->add_subcommand("vortex", "superposition of fundamental solutions");
    gv->add_option("--charges", gen_charges, "charge set JSON")->required();
    gv->add_option("--n", gen_n, "dimension (2 or 3)");
    gv->add_option("--N", gen_N, "cells per axis");
    gv->add_option("--q", gen_q, "measure exponent stored in the file");
    gv->add_option("--out", gen_out, "output FFLD path");

    auto* gc = gen->add_subcommand("circle-map", "S^1-product map current (n = 2)");
    gc->add_option("--charges", gen_charges, "charge set JSON, degrees +-1")->required();
    gc->add_option("--N", gen_N, "cells per axis");
    gc->add_option("--q", gen_q, "measure exponent stored in the file");
    gc->add_option("--out", gen_out, "output FFLD path");

    auto* gd = gen->add_subcommand("divfree", "seeded divergence-free field");
    gd->add_option("--seed", gen_seed, "generator seed");
    gd->add_option("--n", gen_n, "dimension");
    gd->add_option("--N", gen_N, "cells per axis");
    gd->add_option("--q", gen_q, "measure exponent stored in the file");
    gd->add_option("--out", gen_out, "output FFLD path");

    // ---- audit --------------------------------------------------------
    auto* audit = app.add_subcommand("audit", "integer-flux audit of a field file");
    std::string audit_in, audit_out;
    AuditOptions audit_opt;
    audit->add_option("--in", audit_in, "input FFLD")->required();
    audit->add_option("--tol", audit_opt.tolerance, "integrality tolerance");
    audit->add_option("--centers", audit_opt.n_centers, "sample centers");
    audit->add_option("--radii", audit_opt.n_radii, "radii per center");
    audit->add_option("--seed", audit_opt.seed, "sampling seed");
    audit->add_option("--M", audit_opt.quadrature_M, "face quadrature nodes");
    audit->add_option("--out", audit_out, "report JSON path");

    // ---- decompose ----------------------------------------------------
    auto* dec = app.add_subcommand("decompose", "shifted cubic decomposition + classes");
    std::string dec_in, dec_out;
    double dec_eps = 0.125, dec_tol = 1e-2, dec_p = 1.5;
    int dec_cand = 32;
    std::uint64_t dec_seed = 42;
    dec->add_option("--in", dec_in, "input FFLD")->required();
    dec->add_option("--epsilon", dec_eps, "mesh thickness")->required();
    dec->add_option("--candidates", dec_cand, "shift candidates");
    dec->add_option("--seed", dec_seed, "shift sampling seed");
    dec->add_option("--tol", dec_tol, "good/bad tolerance");
    dec->add_option("--p", dec_p, "exponent for the shift selection");
    dec->add_option("--out", dec_out, "mesh + records JSON path");

    // ---- approximate ---------------------------------------------------
    auto* approx = app.add_subcommand("approximate", "assemble the approximant at one epsilon");
    std::string ap_in, ap_out = "approx.json";
    double ap_eps = 0.125, ap_p = 1.5, ap_q = std::nan("");
    PipelineSettings ap_settings;
    approx->add_option("--in", ap_in, "input FFLD")->required();
    approx->add_option("--epsilon", ap_eps, "mesh thickness")->required();
    approx->add_option("--p", ap_p, "integrability exponent");
    approx->add_option("--q", ap_q, "measure exponent (default: from the file)");
    approx->add_option("--seed", ap_settings.seed, "shift sampling seed");
    approx->add_option("--candidates", ap_settings.shift_candidates, "shift candidates");
    approx->add_option("--tol", ap_settings.tolerance, "good/bad tolerance");
    approx->add_option("--smooth-delta", ap_settings.smooth_delta,
                       "per-face smoothing budget (default: auto)");
    approx->add_option("--ext-m", ap_settings.ext_m, "extension grid resolution");
    approx->add_flag("--force-round", ap_settings.force_round,
                     "round non-integral cube fluxes instead of aborting");
    approx->add_option("--out", ap_out, "output JSON path");

    // ---- converge -----------------------------------------------------
    auto* conv = app.add_subcommand("converge", "epsilon sweep with CSV output");
    std::string cv_in, cv_eps = "0.25,0.125,0.0625", cv_csv = "sweep.csv";
    double cv_p = 1.5, cv_q = std::nan("");
    PipelineSettings cv_settings;
    conv->add_option("--in", cv_in, "input FFLD")->required();
    conv->add_option("--eps", cv_eps, "comma-separated epsilon list, descending");
    conv->add_option("--p", cv_p, "integrability exponent");
    conv->add_option("--q", cv_q, "measure exponent (default: from the file)");
    conv->add_option("--seed", cv_settings.seed, "shift sampling seed");
    conv->add_option("--candidates", cv_settings.shift_candidates, "shift candidates");
    conv->add_option("--tol", cv_settings.tolerance, "good/bad tolerance");
    conv->add_option("--csv", cv_csv, "output CSV path");

    // ---- connect ------------------------------------------------------
    auto* connect = app.add_subcommand("connect", "minimal connection for a charge set");
    std::string cn_charges, cn_out;
    int cn_dual_res = 128, cn_dim = 2;
    connect->add_option("--charges", cn_charges, "charge set JSON")->required();
    connect->add_option("--dim", cn_dim, "ambient dimension");
    connect->add_option("--dual-res", cn_dual_res, "dual certificate grid resolution");
    connect->add_option("--out", cn_out, "current JSON path");

    // ---- oned ---------------------------------------------------------
    auto* oned = app.add_subcommand("oned", "the exact one-dimensional theory");
    oned->require_subcommand(1);
    std::string od_in, od_out;
    long od_K = 16;
    double od_tol = 1e-2;
    int od_levels = 4;
    auto* odp = oned->add_subcommand("project", "integer step projection of samples");
    odp->add_option("--in", od_in, "samples CSV (one value per line)")->required();
    odp->add_option("--K", od_K, "level truncation");
    odp->add_option("--tol", od_tol, "L^p acceptance tolerance");
    odp->add_option("--out", od_out, "step function JSON path");
    auto* odw = oned->add_subcommand("weak", "dyadic weak-approximation construction");
    odw->add_option("--in", od_in, "samples CSV, interpolated linearly")->required();
    odw->add_option("--levels", od_levels, "dyadic level");
    odw->add_option("--out", od_out, "step function JSON path");

    // let --threads / --json appear after subcommand arguments
    for (auto* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands(nullptr)) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            json config = {{"command", "gen"}, {"n", gen_n}, {"N", gen_N},
                           {"q", gen_q}, {"out", gen_out}};
            VectorField V;
            if (*gv) {
                ChargeSet cs = read_charges(gen_charges, gen_n);
                V = gen_vortex(cs, gen_n, gen_N);
                config["kind"] = "vortex";
                config["charges"] = gen_charges;
            } else if (*gc) {
                ChargeSet cs = read_charges(gen_charges, 2);
                V = gen_circle_map_current(cs, gen_N);
                config["kind"] = "circle-map";
                config["charges"] = gen_charges;
            } else {
                V = gen_divfree(gen_seed, gen_n, gen_N);
                config["kind"] = "divfree";
                config["seed"] = gen_seed;
            }
            write_ffld(gen_out, V, gen_q);
            if (json_out)
                std::cout << json{{"config", config}, {"written", gen_out}}.dump(2) << "\n";
            else
                std::cout << "wrote " << gen_out << "\n";
            return 0;
        }

        if (*audit) {
            auto [V, q] = read_ffld(audit_in);
            FluxAuditReport rep = integer_flux_scan(V, audit_opt);
            json j = report_to_json(rep);
            j["config"] = {{"command", "audit"},      {"in", audit_in},
                           {"tol", audit_opt.tolerance}, {"centers", audit_opt.n_centers},
                           {"radii", audit_opt.n_radii}, {"seed", audit_opt.seed},
                           {"M", audit_opt.quadrature_M}, {"q", q}};
            if (!audit_out.empty()) save_json(audit_out, j);
            if (json_out)
                std::cout << j.dump(2) << "\n";
            else
                std::cout << "verdict: " << to_string(rep.verdict) << " (pass fraction "
                          << rep.pass_fraction << ", max deviation " << rep.max_deviation
                          << ")\n";
            return rep.verdict == Verdict::integral ? 0 : 1;
        }

        if (*dec) {
            auto [V, q] = read_ffld(dec_in);
            CubicMesh mesh = select_shift(V, dec_eps, dec_p, WeightedMeasure(q), dec_cand,
                                          dec_seed);
            auto records = classify_cubes(V, mesh, dec_tol);
            auto [bad_count, weighted] = bad_cube_stats(records, mesh, WeightedMeasure(q));
            json j = records_to_json(mesh, records);
            j["bad_count"] = bad_count;
            j["bad_weighted_volume"] = weighted;
            j["config"] = {{"command", "decompose"}, {"in", dec_in},
                           {"epsilon", dec_eps},     {"candidates", dec_cand},
                           {"seed", dec_seed},       {"tol", dec_tol},
                           {"p", dec_p},             {"q", q}};
            emit(j, dec_out, json_out);
            if (!json_out && !dec_out.empty())
                std::cout << "wrote " << dec_out << " (" << bad_count << " bad cubes)\n";
            return 0;
        }

        if (*approx) {
            auto [V, file_q] = read_ffld(ap_in);
            ap_settings.p = ap_p;
            ap_settings.q = std::isnan(ap_q) ? file_q : ap_q;
            ap_settings.threads = resolve_threads(threads_flag);
            ApproximantField tilde = assemble(V, ap_eps, ap_settings);
            ApproximantField bar = rescale(tilde);
            double err = approximation_error(tilde, V, ap_settings.p,
                                             ap_settings.measure(),
                                             ap_settings.auto_eval_res(V.dim()));

            json j = records_to_json(tilde.mesh, tilde.records);
            j["alpha"] = bar.alpha;
            j["lp_error"] = err;
            j["skeleton_deviation"] = tilde.skeleton_deviation;
            j["charges"] = charges_to_json(bar.charges, V.dim());
            json diag = json::array();
            for (const auto& [idx, ext] : tilde.good)
                diag.push_back({{"cube", idx},
                                {"iterations", ext.iterations},
                                {"converged", ext.converged},
                                {"energy", ext.energy},
                                {"div_residual", ext.div_residual},
                                {"neumann_mismatch", ext.neumann_mismatch}});
            j["solver"] = diag;
            j["config"] = {{"command", "approximate"},
                           {"in", ap_in},
                           {"epsilon", ap_eps},
                           {"p", ap_settings.p},
                           {"q", ap_settings.q},
                           {"seed", ap_settings.seed},
                           {"candidates", ap_settings.shift_candidates},
                           {"tol", ap_settings.tolerance},
                           {"smooth_delta", ap_settings.smooth_delta},
                           {"force_round", ap_settings.force_round}};
            emit(j, ap_out, json_out);
            if (!json_out)
                std::cout << "wrote " << ap_out << " (" << bar.charges.items.size()
                          << " charges, lp_error " << err << ")\n";
            return 0;
        }

        if (*conv) {
            auto [V, file_q] = read_ffld(cv_in);
            cv_settings.p = cv_p;
            cv_settings.q = std::isnan(cv_q) ? file_q : cv_q;
            cv_settings.threads = resolve_threads(threads_flag);
            std::vector<double> eps = parse_eps_list(cv_eps);
            auto rows = converge_sweep(V, eps, cv_settings);

            json config = {{"command", "converge"}, {"in", cv_in},   {"eps", cv_eps},
                           {"p", cv_settings.p},    {"q", cv_settings.q},
                           {"seed", cv_settings.seed}, {"tol", cv_settings.tolerance},
                           {"candidates", cv_settings.shift_candidates}};
            std::ofstream csv(cv_csv);
            if (!csv) throw std::runtime_error("cannot open for writing: " + cv_csv);
            csv << "# config=" << config.dump() << "\n";
            csv << "epsilon,lp_error,bad_count,alpha,wallclock_ms\n";
            csv.precision(17);
            bool ok = true;
            for (const auto& r : rows) {
                if (!r.error.empty()) {
                    ok = false;
                    csv << r.epsilon << ",error: " << r.error << ",,,\n";
                    continue;
                }
                csv << r.epsilon << "," << r.lp_error << "," << r.bad_count << ","
                    << r.alpha << "," << r.wallclock_ms << "\n";
            }
            csv.close();
            if (json_out) {
                json j = {{"config", config}, {"rows", sweep_to_json(rows)}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "wrote " << cv_csv << " (" << rows.size() << " rows)\n";
            }
            return ok ? 0 : 1;
        }

        if (*connect) {
            ChargeSet cs = read_charges(cn_charges, cn_dim);
            MinimalConnection mc = minimal_connection(cs, cn_dim);
            DualCertificate cert = dual_value(cs, cn_dim, cn_dual_res);
            json j = current_to_json(mc.current);
            j["mass"] = mc.mass;
            j["dual_value"] = cert.value;
            j["dual_feasibility_residual"] = cert.feasibility_residual;
            j["config"] = {{"command", "connect"},
                           {"charges", cn_charges},
                           {"dim", cn_dim},
                           {"dual_res", cn_dual_res}};
            emit(j, cn_out, json_out);
            return 0;
        }

        if (*oned) {
            std::vector<double> samples = read_samples_csv(od_in);
            StepFunction s;
            json config = {{"command", "oned"}, {"in", od_in}};
            if (*odp) {
                s = integer_step_projection(samples, od_K, od_tol);
                config["mode"] = "project";
                config["K"] = od_K;
                config["tol"] = od_tol;
            } else {
                auto f = [&samples](double x) {
                    if (samples.size() == 1) return samples[0];
                    double u = x * samples.size() - 0.5;
                    long i0 = std::clamp<long>(static_cast<long>(std::floor(u)), 0,
                                               static_cast<long>(samples.size()) - 2);
                    double t = std::clamp(u - i0, 0.0, 1.0);
                    return (1.0 - t) * samples[i0] + t * samples[i0 + 1];
                };
                s = weak_approx_sequence(f, od_levels);
                config["mode"] = "weak";
                config["levels"] = od_levels;
            }
            json j = step_to_json(s);
            j["config"] = config;
            emit(j, od_out, json_out);
            return 0;
        }
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
