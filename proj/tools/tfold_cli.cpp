// tfold: command-line front end for locating Turing-fold points, AB coefficients,
// Busse rasters and the simulation experiments. Every command writes a manifest.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "tfold/absystem.hpp"
#include "tfold/bifurcation.hpp"
#include "tfold/experiments.hpp"
#include "tfold/fieldsolver.hpp"
#include "tfold/io.hpp"

using namespace tfold;
using io::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAudit = 3;

struct Globals {
    std::string out_dir = ".";
    unsigned long long seed = 1;
    int threads = 1;
    std::vector<std::string> argv;
};

struct Range {
    double lo = 0.0, hi = 0.0, step = 0.0;
};

Range parse_range(const std::string& s) {
    Range r;
    std::vector<double> parts;
    std::size_t pos = 0;
    while (true) {
        const auto c = s.find(':', pos);
        const std::string tok = s.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw io::InputError("bad range '" + s + "' (expected lo:hi or lo:hi:step)");
        }
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) throw io::InputError("bad range '" + s + "' (expected lo:hi or lo:hi:step)");
    r.lo = parts[0], r.hi = parts[1];
    if (parts.size() == 3) r.step = parts[2];
    return r;
}

std::vector<double> range_values(const Range& r) {
    if (!(r.step > 0.0)) throw io::InputError("range needs a positive step");
    const long n = std::lround((r.hi - r.lo) / r.step);
    std::vector<double> v;
    for (long i = 0; i <= n; ++i) v.push_back(r.lo + r.step * i);
    return v;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, double> out;
    for (const auto& s : kv) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw io::InputError("--param expects key=value, got '" + s + "'");
        try {
            out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
            throw io::InputError("--param value is not a number: '" + s + "'");
        }
    }
    return out;
}

std::string out_path(const Globals& g, const std::string& name) { return (fs::path(g.out_dir) / name).string(); }

void write_manifest(const Globals& g, const std::string& cmd, const json& config, const std::vector<std::string>& outputs) {
    io::write_json(out_path(g, cmd + "_manifest.json"), io::make_manifest(cmd, g.argv, g.seed, g.threads, config, outputs));
}

Boundary parse_bc(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "neumann") return Boundary::neumann;
    throw io::InputError("--bc must be periodic or neumann");
}

// ---------------------------------------------------------------- commands

struct LocateArgs {
    std::string model, out = "report.json";
    std::vector<std::string> params;
    std::optional<double> nu_seed, mu_seed;
    bool strict = false;
};

int cmd_locate(const Globals& g, const LocateArgs& a) {
    const auto m = io::load_model(a.model, parse_params(a.params));
    const double nu0 = a.nu_seed ? *a.nu_seed : m.nu_seed.value_or(1.0);
    const double mu0 = a.mu_seed ? *a.mu_seed : m.mu_seed.value_or(-1.0);
    const auto rep = locate_turing_fold(m.spec, nu0, mu0);
    const auto path = out_path(g, a.out);
    io::write_json(path, io::to_json(rep));
    write_manifest(g, "locate", {{"model", m.source}, {"nu_seed", nu0}, {"mu_seed", mu0}}, {a.out});
    std::printf("mu* = %s  nu* = %s  k* = %s  audit %s\n", io::fmt(rep.mu_star).c_str(), io::fmt(rep.nu_star).c_str(),
                io::fmt(rep.k_star).c_str(), rep.audit_passed() ? "passed" : "FAILED");
    for (const auto& f : rep.failures()) std::printf("  audit failure: %s\n", f.c_str());
    return a.strict && !rep.audit_passed() ? kExitAudit : 0;
}

struct CoeffsArgs {
    std::string report, model, out = "coeffs.json";
    std::vector<std::string> params;
    std::optional<double> delta;
};

int cmd_coeffs(const Globals& g, const CoeffsArgs& a) {
    const auto rep = io::report_from_json(io::read_json(a.report));
    const auto m = io::load_model(a.model, parse_params(a.params));
    const auto ab = ab_coefficients(rep, m.spec);
    json j = io::to_json(ab);
    if (a.delta) j["landau"] = io::to_json(landau_coefficient(rep, m.spec, *a.delta));
    io::write_json(out_path(g, a.out), j);
    write_manifest(g, "coeffs", {{"report", a.report}, {"model", m.source}, {"delta", a.delta ? json(*a.delta) : json()}},
                   {a.out});
    std::printf("alpha = %s  d = %s  beta = %s\n", io::fmt(ab.alpha).c_str(), io::fmt(ab.d).c_str(),
                io::fmt(ab.beta).c_str());
    return 0;
}

struct BusseArgs {
    double alpha = 0.5, d = 0.5, beta = 8.0;
    std::string K = "-1.2:1.2", R = "-0.5:3";
    int nK = 200, nR = 200;
    bool no_scan = false;
    std::string out = "raster.csv", boundaries = "boundaries.csv";
};

int cmd_busse(const Globals& g, const BusseArgs& a) {
    const auto kr = parse_range(a.K), rr = parse_range(a.R);
    BusseOptions opt;
    opt.brute = !a.no_scan;
    opt.parallel = g.threads > 1;
    const auto r = busse_map(a.alpha, a.d, a.beta, kr.lo, kr.hi, a.nK, rr.lo, rr.hi, a.nR, opt);
    {
        io::CsvWriter w(out_path(g, a.out), {"K", "R", "class", "max_growth", "scan_class"});
        for (int j = 0; j < r.nR(); ++j)
            for (int i = 0; i < r.nK(); ++i) {
                const std::size_t c = static_cast<std::size_t>(j) * r.nK() + i;
                w << r.K[i] << r.R[j] << to_string(r.closed[c]) << r.max_growth[c]
                  << (opt.brute ? to_string(r.brute[c]) : std::string("-"));
                w.end_row();
            }
    }
    {
        io::CsvWriter w(out_path(g, a.boundaries), {"curve", "K", "R"});
        const CanonicalAB ab(a.alpha, a.d, a.beta);
        const int n = 4 * a.nK;
        for (int i = 0; i < n; ++i) {
            const double K = kr.lo + (kr.hi - kr.lo) * i / (n - 1);
            const auto b = boundary_curves(ab, K);
            w << std::string("R_e") << K << b.R_e;
            w.end_row();
            w << std::string("R_s") << K << b.R_s;
            w.end_row();
            if (b.R_t) {
                w << std::string("R_t") << K << *b.R_t;
                w.end_row();
            }
        }
    }
    json cfg = {{"alpha", a.alpha}, {"d", a.d}, {"beta", a.beta}, {"K", a.K}, {"R", a.R}, {"nK", a.nK}, {"nR", a.nR},
                {"scan", opt.brute}};
    if (opt.brute) {
        const auto agr = compare_raster(r);
        cfg["disagree"] = agr.disagree;
        cfg["disagree_off_boundary"] = agr.disagree_off_boundary;
        std::printf("cells %d  closed/scan disagreement %d  (off boundary %d)\n", agr.cells, agr.disagree,
                    agr.disagree_off_boundary);
    }
    write_manifest(g, "busse", cfg, {a.out, a.boundaries});
    return 0;
}

struct SimulateArgs {
    std::string mode;
    // ab
    double alpha = 0.5, d = 0.5, beta = 8.0, R = 2.0, K0 = 1.01;
    // pde
    std::string model;
    std::vector<std::string> params;
    // shared
    std::optional<double> L;
    int N = 1024;
    double dt = 0.05, t_end = 500.0, noise = 1e-6, snapshot_every = 0.0, sample_every = 1.0;
    std::string bc = "periodic";
};

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
    const Boundary bc = parse_bc(a.bc);
    std::vector<std::string> outputs{"simulate_norm.csv"};
    if (a.snapshot_every > 0.0) outputs.push_back("simulate_snapshots.csv");
    io::CsvWriter norm(out_path(g, outputs[0]), {"t", "rms"});
    std::unique_ptr<io::CsvWriter> snap;
    if (a.snapshot_every > 0.0)
        snap = std::make_unique<io::CsvWriter>(out_path(g, outputs[1]),
                                               a.mode == "ab" ? std::vector<std::string>{"tau", "xi", "ReA", "ImA", "B"}
                                                              : std::vector<std::string>{"t", "x", "U"});
    json cfg = {{"mode", a.mode}, {"N", a.N}, {"dt", a.dt}, {"t_end", a.t_end}, {"noise", a.noise}, {"bc", a.bc}};
    RunOptions opt;
    opt.t_end = a.t_end;
    opt.sample_every = a.snapshot_every > 0.0 ? std::min(a.sample_every, a.snapshot_every) : a.sample_every;
    opt.steady_window = a.t_end + 1.0;
    const long snap_stride = a.snapshot_every > 0.0 ? std::max(1L, std::lround(a.snapshot_every / opt.sample_every)) : 0;
    long sample_no = 0;

    if (a.mode == "ab") {
        const CanonicalAB ab(a.alpha, a.d, a.beta, a.R);
        const Grid1D grid{a.L.value_or(bc == Boundary::periodic ? 600.0 * M_PI / a.K0 : 20.0 * M_PI), a.N, bc};
        ABSolver solver(ABRaw::canonical(ab), grid, a.dt);
        solver.set_state(perturbed_plane_wave(ab, a.K0, grid, a.noise, g.seed));
        const auto x = grid.nodes();
        opt.on_sample = [&](double t) {
            const auto s = solver.state();
            double acc = 0.0;
            for (auto v : s.A) acc += std::norm(v);
            norm << t << std::sqrt(acc / s.A.size());
            norm.end_row();
            if (snap && sample_no % snap_stride == 0)
                for (int i = 0; i < grid.N; ++i) {
                    *snap << t << x[i] << s.A[i].real() << s.A[i].imag() << s.B[i];
                    snap->end_row();
                }
            ++sample_no;
            return true;
        };
        const auto res = solver.run(opt);
        const auto end = solver.state();
        const double Kend = dominant_wavenumber(end, grid);
        const auto cls = classify(ab, Kend);
        cfg.update({{"alpha", a.alpha}, {"d", a.d}, {"beta", a.beta}, {"R", a.R}, {"K0", a.K0}, {"L", grid.L},
                    {"status", to_string(res.status)}, {"K_end", Kend}, {"end_class", to_string(cls.cls)},
                    {"end_scan_class", to_string(cls.brute)}});
        std::printf("status %s  K_end = %s  class %s (scan %s)\n", to_string(res.status).c_str(), io::fmt(Kend).c_str(),
                    to_string(cls.cls).c_str(), to_string(cls.brute).c_str());
    } else if (a.mode == "pde") {
        if (a.model.empty()) throw io::InputError("simulate pde needs --model");
        const auto m = io::load_model(a.model, parse_params(a.params));
        GeneralScalarModel gm;
        if (const auto* s = std::get_if<ScalarSixthOrder>(&m.spec))
            gm = to_general(*s);
        else if (const auto* gs = std::get_if<GeneralScalarModel>(&m.spec))
            gm = *gs;
        else
            throw io::InputError("simulate pde supports scalar models");
        const Grid1D grid{a.L.value_or(4.0 * M_PI), a.N, bc};
        ScalarSolver solver(gm, grid, a.dt);
        double u0 = 0.0;
        for (const auto& h : homogeneous_states(m.spec, gm.mu, gm.nu))
            if (h.ode_stable) u0 = std::max(u0, h.u(0));
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        const auto x = grid.nodes();
        std::vector<double> U(grid.N);
        // random low modes on top of the largest ODE-stable state
        for (int j = 1; j <= 8; ++j) {
            const double c = ud(rng), s = ud(rng), k = M_PI * j * (bc == Boundary::periodic ? 2.0 : 1.0) / grid.L;
            for (int i = 0; i < grid.N; ++i)
                U[i] += a.noise / 8.0 * (c * std::cos(k * x[i]) + (bc == Boundary::periodic ? s * std::sin(k * x[i]) : 0.0));
        }
        for (double& v : U) v += u0;
        solver.set_state({U, 0.0});
        opt.on_sample = [&](double t) {
            const auto s = solver.state();
            norm << t << rms(s.U);
            norm.end_row();
            if (snap && sample_no % snap_stride == 0)
                for (int i = 0; i < grid.N; ++i) {
                    *snap << t << x[i] << s.U[i];
                    snap->end_row();
                }
            ++sample_no;
            return true;
        };
        const auto res = solver.run(opt);
        cfg.update({{"model", m.source}, {"L", grid.L}, {"u0", u0}, {"status", to_string(res.status)}});
        std::printf("status %s  t = %s\n", to_string(res.status).c_str(), io::fmt(res.t).c_str());
    } else {
        throw io::InputError("simulate expects 'ab' or 'pde'");
    }
    write_manifest(g, "simulate", cfg, outputs);
    return 0;
}

struct ConvergeArgs {
    double K = 0.0, r = 4.0, eta = 2.0;
    std::string deltas = "0.02:0.20:0.02";
    int N = 64;
    double dt = 0.01, t_max = 10000.0;
    std::string out = "converge.csv";
};

int cmd_converge(const Globals& g, const ConvergeArgs& a) {
    ConvergenceConfig c;
    c.K = a.K, c.r = a.r, c.eta = a.eta, c.N = a.N, c.dt = a.dt, c.t_max = a.t_max;
    c.deltas = range_values(parse_range(a.deltas));
    const auto rows = run_convergence(c);
    io::CsvWriter w(out_path(g, a.out), {"delta", "norm", "exponent", "outcome", "t_end"});
    for (const auto& r : rows) {
        w << r.delta << r.norm_diff << r.exponent << r.outcome << r.t_end;
        w.end_row();
        std::printf("%-6s %-14s %-8s %s\n", io::fmt(r.delta).c_str(), io::fmt(r.norm_diff).c_str(),
                    io::fmt(std::round(r.exponent * 1000) / 1000).c_str(), r.outcome.c_str());
    }
    write_manifest(g, "converge",
                   {{"K", a.K}, {"r", a.r}, {"eta", a.eta}, {"deltas", c.deltas}, {"N", a.N}, {"dt", a.dt}, {"t_max", a.t_max}},
                   {a.out});
    return 0;
}

struct TipArgs {
    TippingConfig c;
    std::string out = "tip.csv";
};

int cmd_tip(const Globals& g, TipArgs a) {
    a.c.seed = g.seed;
    const auto tr = run_tipping(a.c);
    io::CsvWriter w(out_path(g, a.out), {"mu", "l2_per_length"});
    for (const auto& [mu, n] : tr.samples) {
        w << mu << n;
        w.end_row();
    }
    json cfg = {{"eta", a.c.eta},       {"gamma", a.c.gamma}, {"delta", a.c.delta}, {"mu0", a.c.mu0},
                {"rate", a.c.rate.value_or(a.c.delta * a.c.delta / 4000.0)},    {"t_end", a.c.t_end},
                {"L", a.c.L},           {"N", a.c.N},         {"dt", a.c.dt},       {"noise", a.c.noise},
                {"background", a.c.background},               {"ode", a.c.ode},     {"outcome", tr.outcome},
                {"collapse_mu", tr.collapse_mu ? json(*tr.collapse_mu) : json()}};
    write_manifest(g, "tip", cfg, {a.out});
    std::printf("outcome %s", tr.outcome.c_str());
    if (tr.collapse_mu) std::printf("  collapse at mu = %s", io::fmt(*tr.collapse_mu).c_str());
    std::printf("\n");
    return 0;
}

struct RegimeArgs {
    RegimeConfig c;
    std::string alphas = "0.8,0.7745,0.758,0.756,0.7";
    std::string out = "regimes.csv", traces = "regime_traces.csv";
    std::string bc = "periodic";
};

int cmd_regime(const Globals& g, RegimeArgs a) {
    a.c.alphas.clear();
    std::size_t pos = 0;
    while (pos <= a.alphas.size()) {
        const auto c = a.alphas.find(',', pos);
        const auto tok = a.alphas.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
        try {
            a.c.alphas.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw io::InputError("--alphas expects a comma-separated list of numbers");
        }
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    a.c.bc = parse_bc(a.bc);
    a.c.seed = g.seed;
    const auto res = run_regime_scan(a.c);
    io::CsvWriter w(out_path(g, a.out), {"alpha", "tag", "variance", "periodic_fraction", "spatial_peaks",
                                         "amplitude_spread", "K_end"});
    io::CsvWriter t(out_path(g, a.traces), {"alpha", "tau", "norm_A"});
    for (const auto& r : res) {
        w << r.alpha << to_string(r.tag) << r.diag.variance << r.diag.periodic_fraction
          << static_cast<double>(r.diag.spatial_peaks) << r.diag.amplitude_spread << r.diag.K_end;
        w.end_row();
        for (const auto& [tau, n] : r.norm_trace) {
            t << r.alpha << tau << n;
            t.end_row();
        }
        std::printf("alpha %-8s %s\n", io::fmt(r.alpha).c_str(), to_string(r.tag).c_str());
    }
    write_manifest(g, "regime-scan",
                   {{"alphas", a.c.alphas}, {"d", a.c.d}, {"beta", a.c.beta}, {"K0", a.c.K0}, {"R_offset", a.c.R_offset},
                    {"N", a.c.N}, {"dt", a.c.dt}, {"t_max", a.c.t_max}, {"noise", a.c.noise}, {"bc", a.bc}},
                   {a.out, a.traces});
    return 0;
}

struct GLArgs {
    std::string model, out = "gl_embed.csv";
    std::vector<std::string> params;
    double delta = 0.01, R = 0.05;
};

int cmd_gl(const Globals& g, const GLArgs& a) {
    const auto m = io::load_model(a.model, parse_params(a.params));
    const auto rep = locate_turing_fold(m.spec, m.nu_seed.value_or(1.0), m.mu_seed.value_or(-1.0));
    const auto r = run_gl_embedding(rep, m.spec, a.delta, a.R);
    io::CsvWriter w(out_path(g, a.out),
                    {"delta", "R", "amplitude_ab", "amplitude_ab_closed", "amplitude_gl", "deviation", "landau"});
    w << r.delta << r.R << r.amplitude_ab << r.amplitude_ab_closed << r.amplitude_gl << r.deviation << r.landau;
    w.end_row();
    write_manifest(g, "gl-embed", {{"model", m.source}, {"delta", a.delta}, {"R", a.R}}, {a.out});
    std::printf("AB amplitude %s  GL amplitude %s  relative deviation %s\n", io::fmt(r.amplitude_ab).c_str(),
                io::fmt(r.amplitude_gl).c_str(), io::fmt(r.deviation).c_str());
    return 0;
}

struct ChaosArgs {
    ChaosPairConfig c;
    std::string traces = "chaos_traces.csv", final_ = "chaos_final.csv";
};

int cmd_chaos(const Globals& g, const ChaosArgs& a) {
    const auto r = run_underlying_chaos(a.c);
    {
        io::CsvWriter w(out_path(g, a.traces), {"tau", "ab_norm", "pde_norm"});
        for (std::size_t i = 0; i < std::min(r.ab_trace.size(), r.pde_trace.size()); ++i) {
            w << r.ab_trace[i].first << r.ab_trace[i].second << r.pde_trace[i].second;
            w.end_row();
        }
    }
    {
        io::CsvWriter w(out_path(g, a.final_), {"x", "U_pde", "U_ab"});
        const auto x = r.pde_grid.nodes();
        for (std::size_t i = 0; i < x.size(); ++i) {
            w << x[i] << r.pde_final.U[i] << r.u_ab_final[i];
            w.end_row();
        }
    }
    write_manifest(g, "chaos-pair",
                   {{"alpha", a.c.alpha}, {"beta", a.c.beta}, {"delta", a.c.delta}, {"gamma", r.gamma}, {"eta", r.eta},
                    {"d", r.d}, {"nu", r.nu}, {"mu", r.mu}, {"tau_max", a.c.tau_max}, {"N_ab", a.c.N_ab},
                    {"N_pde", a.c.N_pde}, {"ab_status", to_string(r.ab_status)}, {"pde_status", to_string(r.pde_status)}},
                   {a.traces, a.final_});
    std::printf("gamma = %s  eta = %s  d = %s  AB %s  PDE %s\n", io::fmt(r.gamma).c_str(), io::fmt(r.eta).c_str(),
                io::fmt(r.d).c_str(), to_string(r.ab_status).c_str(), to_string(r.pde_status).c_str());
    return 0;
}

int run(int argc, char** argv);

int cmd_replay(const std::string& manifest) {
    const auto j = io::read_json(manifest);
    if (!j.contains("schema") || j["schema"] != io::kManifestSchema) throw io::InputError("not a manifest: " + manifest);
    auto args = j.at("argv").get<std::vector<std::string>>();
    std::vector<char*> ptrs;
    for (auto& s : args) ptrs.push_back(s.data());
    return run(static_cast<int>(ptrs.size()), ptrs.data());
}

int run(int argc, char** argv) {
    CLI::App app{"Turing-fold toolkit: locate, coefficients, Busse balloons and AB/PDE experiments"};
    app.require_subcommand(1);
    Globals g;
    g.argv.assign(argv, argv + argc);
    app.add_option("--out-dir", g.out_dir, "directory for outputs and manifests");
    app.add_option("--seed", g.seed, "seed of the noise generator");
    app.add_option("--threads", g.threads, "OpenMP threads (1 gives bit-identical replays)")->check(CLI::PositiveNumber);

    LocateArgs la;
    auto* loc = app.add_subcommand("locate", "find the Turing-fold point of a model and audit it");
    loc->add_option("--model", la.model, "model file")->required();
    loc->add_option("--param", la.params, "override key=value");
    loc->add_option("--nu-seed", la.nu_seed);
    loc->add_option("--mu-seed", la.mu_seed);
    loc->add_option("--out", la.out);
    loc->add_flag("--strict", la.strict, "exit 3 when an audit item fails");

    CoeffsArgs ca;
    auto* co = app.add_subcommand("coeffs", "AB coefficients from a located report");
    co->add_option("--report", ca.report)->required();
    co->add_option("--model", ca.model)->required();
    co->add_option("--param", ca.params);
    co->add_option("--delta", ca.delta, "also compute the Landau coefficient at this delta");
    co->add_option("--out", ca.out);

    BusseArgs ba;
    auto* bu = app.add_subcommand("busse", "plane-wave stability raster in the (K, R) plane");
    bu->add_option("--alpha", ba.alpha);
    bu->add_option("--d", ba.d);
    bu->add_option("--beta", ba.beta);
    bu->add_option("--K", ba.K, "lo:hi");
    bu->add_option("--R", ba.R, "lo:hi");
    bu->add_option("--nK", ba.nK);
    bu->add_option("--nR", ba.nR);
    bu->add_flag("--no-scan", ba.no_scan, "closed-form classes only");
    bu->add_option("--out", ba.out);
    bu->add_option("--boundaries", ba.boundaries);

    SimulateArgs sa;
    auto* si = app.add_subcommand("simulate", "integrate the AB system or a scalar PDE");
    si->add_option("mode", sa.mode, "ab or pde")->required();
    si->add_option("--alpha", sa.alpha);
    si->add_option("--d", sa.d);
    si->add_option("--beta", sa.beta);
    si->add_option("--R", sa.R);
    si->add_option("--K0", sa.K0);
    si->add_option("--model", sa.model);
    si->add_option("--param", sa.params);
    si->add_option("--L", sa.L);
    si->add_option("--N", sa.N);
    si->add_option("--dt", sa.dt);
    si->add_option("--t-end", sa.t_end);
    si->add_option("--noise", sa.noise);
    si->add_option("--bc", sa.bc);
    si->add_option("--sample-every", sa.sample_every);
    si->add_option("--snapshot-every", sa.snapshot_every);

    ConvergeArgs cv;
    auto* cg = app.add_subcommand("converge", "PDE vs AB plane-wave convergence table");
    cg->add_option("--K", cv.K);
    cg->add_option("--r", cv.r);
    cg->add_option("--eta", cv.eta);
    cg->add_option("--deltas", cv.deltas, "lo:hi:step");
    cg->add_option("--N", cv.N);
    cg->add_option("--dt", cv.dt);
    cg->add_option("--t-max", cv.t_max);
    cg->add_option("--out", cv.out);

    TipArgs ta;
    double rate = -1.0;
    auto* tp = app.add_subcommand("tip", "slow ramp of mu through the fold");
    tp->add_option("--eta", ta.c.eta);
    tp->add_option("--gamma", ta.c.gamma);
    tp->add_option("--delta", ta.c.delta);
    tp->add_option("--mu0", ta.c.mu0);
    tp->add_option("--rate", rate, "ramp speed (default delta^2/4000)");
    tp->add_option("--t-end", ta.c.t_end);
    tp->add_option("--L", ta.c.L);
    tp->add_option("--N", ta.c.N);
    tp->add_option("--dt", ta.c.dt);
    tp->add_option("--noise", ta.c.noise);
    tp->add_option("--background", ta.c.background);
    tp->add_option("--sample-every", ta.c.sample_every);
    tp->add_flag("--ode", ta.c.ode, "homogeneous ODE instead of the PDE");
    tp->add_option("--out", ta.out);

    RegimeArgs ra;
    auto* rs = app.add_subcommand("regime-scan", "tag AB dynamics past the Turing boundary for a list of alphas");
    rs->add_option("--alphas", ra.alphas, "comma-separated");
    rs->add_option("--d", ra.c.d);
    rs->add_option("--beta", ra.c.beta);
    rs->add_option("--K0", ra.c.K0);
    rs->add_option("--R-offset", ra.c.R_offset);
    rs->add_option("--L", ra.c.L);
    rs->add_option("--N", ra.c.N);
    rs->add_option("--dt", ra.c.dt);
    rs->add_option("--t-max", ra.c.t_max);
    rs->add_option("--noise", ra.c.noise);
    rs->add_option("--bc", ra.bc);
    rs->add_option("--out", ra.out);
    rs->add_option("--traces", ra.traces);

    GLArgs gla;
    auto* gl = app.add_subcommand("gl-embed", "compare the AB Stokes amplitude with the GL fixed point");
    gl->add_option("--model", gla.model)->required();
    gl->add_option("--param", gla.params);
    gl->add_option("--delta", gla.delta);
    gl->add_option("--R", gla.R);
    gl->add_option("--out", gla.out);

    ChaosArgs cha;
    auto* ch = app.add_subcommand("chaos-pair", "AB system next to the extended scalar PDE it embeds into");
    ch->add_option("--alpha", cha.c.alpha);
    ch->add_option("--beta", cha.c.beta);
    ch->add_option("--delta", cha.c.delta);
    ch->add_option("--K", cha.c.K);
    ch->add_option("--R-offset", cha.c.R_offset);
    ch->add_option("--L-xi", cha.c.L_xi);
    ch->add_option("--N-ab", cha.c.N_ab);
    ch->add_option("--N-pde", cha.c.N_pde);
    ch->add_option("--dt-ab", cha.c.dt_ab);
    ch->add_option("--dt-pde", cha.c.dt_pde);
    ch->add_option("--tau-max", cha.c.tau_max);
    ch->add_option("--traces", cha.traces);
    ch->add_option("--final", cha.final_);

    std::string manifest;
    auto* rp = app.add_subcommand("replay", "rerun the command recorded in a manifest");
    rp->add_option("manifest", manifest)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    omp_set_num_threads(g.threads);
    fs::create_directories(g.out_dir);
    if (rate > 0.0) ta.c.rate = rate;

    if (*loc) return cmd_locate(g, la);
    if (*co) return cmd_coeffs(g, ca);
    if (*bu) return cmd_busse(g, ba);
    if (*si) return cmd_simulate(g, sa);
    if (*cg) return cmd_converge(g, cv);
    if (*tp) return cmd_tip(g, ta);
    if (*rs) return cmd_regime(g, ra);
    if (*gl) return cmd_gl(g, gla);
    if (*ch) return cmd_chaos(g, cha);
    if (*rp) return cmd_replay(manifest);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const io::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ABError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
