// commands.hpp: the command-line surface.
//
//   simulate  --config F    Picard solve, snapshots in <output>/
//   monitor   --config F    certification chain, <output>/verdict.jsonl
//   hm        --gamma G     closed form against walk-on-spheres, CSV
//   constants --config F    calibrated ledger, <output>/constants.txt
//   scan      --snapshot F  sparseness scan of a stored field, CSV
//
// Exit status: 0 on a completed run (whatever the verdict), 1 on a module
// error, 2 on bad usage or configuration.
#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhdlab/calibration.hpp"
#include "mhdlab/harmonic_measure.hpp"
#include "mhdlab/io/config.hpp"
#include "mhdlab/io/initial_data.hpp"
#include "mhdlab/io/snapshot.hpp"
#include "mhdlab/io/verdict_log.hpp"
#include "mhdlab/monitor.hpp"
#include "mhdlab/sparseness.hpp"

namespace mhdlab {

namespace detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Initial pair followed by random solenoidal pairs of comparable size.
inline std::vector<std::pair<VectorField, VectorField>> calibration_sample(const RunConfig& cfg, const VectorField& u0,
                                                                           const VectorField& b0) {
    std::vector<std::pair<VectorField, VectorField>> out{{u0, b0}};
    const Grid g = cfg.grid();
    const double au = std::max(sup_norm(u0), 1e-3);
    const double ab = sup_norm(b0);
    for (int i = 0; i < cfg.calibration_samples; ++i) {
        const std::uint64_t s = cfg.seed + 1000003ULL * (i + 1);
        auto u = random_divergence_free(g, s, 2.0, au);
        auto b = ab > 0.0 ? random_divergence_free(g, s + 1, 2.0, ab) : VectorField::zero(g);
        out.emplace_back(std::move(u), std::move(b));
    }
    return out;
}

inline ConstantsLedger resolve_ledger(const RunConfig& cfg, const VectorField& u0, const VectorField& b0) {
    if (!cfg.calibrate) return cfg.ledger();
    CalibrationOptions co;
    co.n_max = cfg.n_max;
    co.tol = cfg.tol;
    return calibrate_constants(calibration_sample(cfg, u0, b0), cfg.solver(), co);
}

/// Resolved config plus the constants actually used.
inline std::string provenance_text(const RunConfig& cfg, const ConstantsLedger& l) {
    std::ostringstream os;
    os << cfg.resolved_text();
    for (int i = 1; i <= 4; ++i) os << "# resolved C" << i << "=" << shortest(l.get(i)) << " (" << to_string(l.provenance(i)) << ")\n";
    return os.str();
}

inline void comment_lines(std::ostream& os, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) os << "# " << line << '\n';
}

inline std::string snapshot_name(int i) {
    std::ostringstream os;
    os << "snapshot_" << std::setw(4) << std::setfill('0') << i << ".mhds";
    return os.str();
}

inline int cmd_simulate(const std::string& path, std::ostream& out) {
    const auto cfg = parse_config(read_text_file(path));
    const Grid g = cfg.grid();
    const auto [u0, b0] = generate_initial(cfg.initial, g);
    const auto ledger = resolve_ledger(cfg, u0, b0);
    const std::string prov = provenance_text(cfg, ledger);
    std::filesystem::create_directories(cfg.output);
    const std::filesystem::path dir(cfg.output);

    int written = 0;
    const auto emit = [&](double t, const VectorField& u, const VectorField& b, const ScalarField& pi) {
        const auto name = snapshot_name(written++);
        write_snapshot_file((dir / name).string(), Snapshot{g, t, u, b, pi, prov});
        out << std::setprecision(10) << name << " t=" << t << " |U|=" << sup_norm(u) << " |B|=" << sup_norm(b)
            << '\n';
    };
    emit(0.0, u0, b0, solve_total_pressure(u0, b0));

    // Restarted solves on segments of at most T2/2, one snapshot per segment end.
    VectorField u = u0, b = b0;
    double t = 0.0;
    while (t < cfg.horizon) {
        const auto times = existence_times(sup_norm(u), sup_norm(b), ledger);
        double len = cfg.horizon - t;
        if (!times.unbounded) len = std::min(len, 0.5 * times.t2);
        const auto r = picard_solve(u, b, cfg.solver(), len, cfg.n_max, cfg.tol, ledger);
        if (!r.solution.converged())
            throw PreconditionError("simulate: Picard diverged at t = " + std::to_string(t) + ": " +
                                    r.solution.diagnostic);
        u = r.solution.u.back();
        b = r.solution.b.back();
        t = len == cfg.horizon - t ? cfg.horizon : t + len;
        emit(t, u, b, r.solution.pi.back());
    }
    return 0;
}

inline int cmd_monitor(const std::string& path, std::ostream& out) {
    const auto cfg = parse_config(read_text_file(path));
    const auto [u0, b0] = generate_initial(cfg.initial, cfg.grid());
    const auto ledger = resolve_ledger(cfg, u0, b0);
    const auto cp = cfg.criterion_params(ledger);
    cp.validate();
    const auto opt = cfg.monitor_options();
    const auto verdict = certify_interval(u0, b0, cfg.horizon, cfg.epsilon, cp, opt);
    std::filesystem::create_directories(cfg.output);
    const auto log_path = (std::filesystem::path(cfg.output) / "verdict.jsonl").string();
    std::ofstream log(log_path);
    if (!log) throw Error("cannot open " + log_path);
    write_verdict_log(log, verdict, cp, opt, provenance_text(cfg, ledger));
    out << "status: " << to_string(verdict.status) << "\nsteps: " << verdict.steps.size() << '\n';
    for (const auto& s : verdict.steps)
        out << "  step " << s.index << " t0=" << s.t0 << " t=" << s.t << " A=" << s.a << " -> "
            << to_string(s.result) << '\n';
    if (!verdict.diagnostic.empty()) out << "diagnostic: " << verdict.diagnostic << '\n';
    if (!verdict.note.empty()) out << "note: " << verdict.note << '\n';
    out << "log: " << log_path << '\n';
    return 0;
}

struct HmArgs {
    std::vector<double> gammas;
    std::uint64_t walks = 1000000;
    std::uint64_t seed = 1;
    double radius = 1.0;
    double step = 0.0;
    unsigned workers = 0;
    std::string output;
};

inline void write_hm_csv(std::ostream& os, const HmArgs& a) {
    os << "# hm: extremal slits [-r,-(1-gamma)r] u [(1-gamma)r,r], walk-on-spheres from the centre\n";
    os << "# radius=" << a.radius << " step=" << (a.step > 0.0 ? a.step : a.radius * 1e-4) << " walks=" << a.walks
       << " seed=" << a.seed << '\n';
    os << "gamma,closed_form,mc_mean,mc_se,walks,seed\n";
    os << std::setprecision(12);
    for (double gamma : a.gammas) {
        const auto est = mc_harmonic_measure(extremal_slits(gamma, a.radius),
                                             {.walks = a.walks, .step = a.step, .seed = a.seed, .workers = a.workers});
        os << gamma << ',' << solynin_lower_bound(gamma) << ',' << est.mean << ',' << est.standard_error << ','
           << est.walks << ',' << est.seed << '\n';
    }
}

inline int cmd_hm(const HmArgs& a, std::ostream& out) {
    if (a.output.empty()) {
        write_hm_csv(out, a);
    } else {
        std::ofstream os(a.output);
        if (!os) throw Error("cannot open " + a.output);
        write_hm_csv(os, a);
        out << "wrote " << a.output << '\n';
    }
    return 0;
}

inline int cmd_constants(const std::string& path, std::ostream& out) {
    auto cfg = parse_config(read_text_file(path));
    const auto [u0, b0] = generate_initial(cfg.initial, cfg.grid());
    CalibrationOptions co;
    co.n_max = cfg.n_max;
    co.tol = cfg.tol;
    const auto ledger = calibrate_constants(calibration_sample(cfg, u0, b0), cfg.solver(), co);
    std::filesystem::create_directories(cfg.output);
    const auto file = (std::filesystem::path(cfg.output) / "constants.txt").string();
    std::ofstream os(file);
    if (!os) throw Error("cannot open " + file);
    comment_lines(os, cfg.resolved_text());
    for (int i = 1; i <= 4; ++i) {
        os << 'c' << i << '=' << shortest(ledger.get(i)) << '\n';
        out << 'C' << i << " = " << ledger.get(i) << " (" << to_string(ledger.provenance(i)) << ")\n";
    }
    out << "wrote " << file << '\n';
    return 0;
}

struct ScanArgs {
    std::string snapshot;
    std::string field = "both";
    double threshold = 0.0;
    double delta = 0.5;
    double r_cap = 0.0;
    int stride = 1;
    ScanResolution res;
    std::string output;
};

inline void write_scan_csv(std::ostream& os, const ScanArgs& a, const Snapshot& s, const ScanSummary& sum) {
    const int dim = s.grid.dim();
    os << "# scan of " << a.snapshot << " at t=" << shortest(s.t) << '\n';
    os << "# field=" << a.field << " threshold=" << a.threshold << " delta=" << a.delta << " r_cap=" << a.r_cap
       << " stride=" << a.stride << " dir_count=" << (a.res.dir_count > 0 ? a.res.dir_count : default_dir_count(dim))
       << " scale_count=" << a.res.scale_count << " samples=" << a.res.samples << '\n';
    os << "# snapshot config:\n";
    comment_lines(os, s.config);
    os << "# points=" << sum.points << " failures=" << sum.failures << " worst_ratio=" << sum.worst_ratio << '\n';
    os << "x,y" << (dim == 3 ? ",z" : "") << ",sparse,ratio,scale,d1,d2" << (dim == 3 ? ",d3" : "") << '\n';
    os << std::setprecision(10);
    for (const auto& r : sum.reports) {
        for (int i = 0; i < dim; ++i) os << r.x0[i] << ',';
        os << (r.sparse ? 1 : 0) << ',' << r.ratio << ',' << r.scale;
        for (int i = 0; i < dim; ++i) os << ',' << r.direction[i];
        os << '\n';
    }
}

inline int cmd_scan(ScanArgs a, std::ostream& out) {
    const auto s = read_snapshot_file(a.snapshot);
    if (a.r_cap <= 0.0) a.r_cap = s.grid.length() / 4.0;
    if (a.r_cap > s.grid.length() / 2.0) throw ScaleError("scan: r_cap exceeds half the box length");
    const auto need = [&](const std::optional<VectorField>& f, const char* name) -> const VectorField& {
        if (!f) throw SnapshotError(std::string("scan: snapshot has no ") + name + " field");
        return *f;
    };
    ScanSummary sum;
    if (a.field == "u") {
        sum = global_sparseness_scan(super_level_set(need(s.u, "U"), a.threshold, s.t), a.delta, a.r_cap, a.stride,
                                     a.res);
    } else if (a.field == "b") {
        sum = global_sparseness_scan(super_level_set(need(s.b, "B"), a.threshold, s.t), a.delta, a.r_cap, a.stride,
                                     a.res);
    } else {
        const LevelSetIntersection both({super_level_set(need(s.u, "U"), a.threshold, s.t),
                                         super_level_set(need(s.b, "B"), a.threshold, s.t)});
        sum = global_sparseness_scan(both, a.delta, a.r_cap, a.stride, a.res);
    }
    if (a.output.empty()) {
        write_scan_csv(out, a, s, sum);
    } else {
        std::ofstream os(a.output);
        if (!os) throw Error("cannot open " + a.output);
        write_scan_csv(os, a, s, sum);
        out << "points=" << sum.points << " failures=" << sum.failures << " worst_ratio=" << sum.worst_ratio
            << "\nwrote " << a.output << '\n';
    }
    return 0;
}

} // namespace detail

/// Parses argv and runs one subcommand; see the header comment for exit codes.
inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"mhdlab: regularity criteria experiments for incompressible MHD", "mhdlab"};
    app.require_subcommand(1);

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "Picard solve from the configured data; writes snapshots");
    sim->add_option("--config", config_path, "config file")->required();
    auto* mon = app.add_subcommand("monitor", "certification chain over [T - epsilon, T]; writes verdict.jsonl");
    mon->add_option("--config", config_path, "config file")->required();
    auto* cst = app.add_subcommand("constants", "calibrate C1..C4 on the configured sample");
    cst->add_option("--config", config_path, "config file")->required();

    detail::HmArgs hm;
    auto* hmc = app.add_subcommand("hm", "closed-form harmonic measure against walk-on-spheres");
    hmc->add_option("--gamma", hm.gammas, "slit fraction(s) in (0,1)")->required()->expected(1, -1);
    hmc->add_option("--walks", hm.walks, "walks per gamma")->capture_default_str();
    hmc->add_option("--seed", hm.seed, "master seed")->capture_default_str();
    hmc->add_option("--radius", hm.radius, "disc radius")->capture_default_str();
    hmc->add_option("--step", hm.step, "absorption tolerance (0: radius * 1e-4)")->capture_default_str();
    hmc->add_option("--workers", hm.workers, "threads (0: hardware)")->capture_default_str();
    hmc->add_option("--output", hm.output, "CSV path (default stdout)");

    detail::ScanArgs sc;
    auto* scc = app.add_subcommand("scan", "sparseness scan of a snapshot's super-level set");
    scc->add_option("--snapshot", sc.snapshot, "snapshot file")->required();
    scc->add_option("--threshold", sc.threshold, "level M")->required();
    scc->add_option("--field", sc.field, "u, b or both (intersection)")
        ->check(CLI::IsMember({"u", "b", "both"}))
        ->capture_default_str();
    scc->add_option("--delta", sc.delta, "sparseness ratio")->capture_default_str();
    scc->add_option("--r-cap", sc.r_cap, "largest scale (0: L/4)")->capture_default_str();
    scc->add_option("--stride", sc.stride, "grid stride")->capture_default_str();
    scc->add_option("--dir-count", sc.res.dir_count, "directions (0: default)")->capture_default_str();
    scc->add_option("--scale-count", sc.res.scale_count, "dyadic scales")->capture_default_str();
    scc->add_option("--samples", sc.res.samples, "samples per segment")->capture_default_str();
    scc->add_option("--output", sc.output, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return detail::cmd_simulate(config_path, out);
        if (mon->parsed()) return detail::cmd_monitor(config_path, out);
        if (cst->parsed()) return detail::cmd_constants(config_path, out);
        if (hmc->parsed()) return detail::cmd_hm(hm, out);
        if (scc->parsed()) return detail::cmd_scan(sc, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        err << "inadmissible parameters: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"mhdlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace mhdlab
