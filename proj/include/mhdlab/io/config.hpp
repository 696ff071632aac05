// config.hpp: line-oriented key=value run configuration.
//
//   # comment
//   dim = 2
//   n = 64
//   initial = bump(amplitude=0.5, width=0.3)
//
// Unknown keys, duplicates, out-of-range values and missing required keys are
// rejected with the offending line number.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mhdlab/io/initial_data.hpp"
#include "mhdlab/monitor.hpp"

namespace mhdlab {

namespace detail {

/// Shortest text that parses back to the same double.
inline std::string shortest(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace detail

struct RunConfig {
    int dim = 0;
    int n = 0;
    double length = 2.0 * std::numbers::pi;
    double nu = 1.0;
    double mu = 1.0;
    int substeps = 16;
    double tol = 1e-10;
    int n_max = 60;
    bool dealias = true;
    bool calibrate = false;
    double c[4] = {1.0, 1.0, 1.0, 1.0};
    int calibration_samples = 4;
    Criterion criterion = Criterion::Thm11;
    double delta = 0.5;
    std::optional<double> alpha;
    double gamma = 0.5;
    double beta = 0.75;
    double horizon = 1.0;
    double epsilon = 0.5;
    int dir_count = 0;
    int scale_count = 8;
    int samples = 128;
    int stride = 1;
    int candidates = 8;
    std::uint64_t walks = 100000;
    double mc_step = 0.0;
    std::uint64_t seed = 1;
    int mc_points = 4;
    InitialSpec initial;
    std::string output = ".";

    Grid grid() const { return Grid(dim, n, length); }

    SolverParams solver() const {
        SolverParams p{grid()};
        p.nu = nu;
        p.mu = mu;
        p.substeps = substeps;
        p.dealias = dealias;
        return p;
    }

    ConstantsLedger ledger() const { return ConstantsLedger(c[0], c[1], c[2], c[3]); }

    CriterionParams criterion_params(const ConstantsLedger& l) const {
        CriterionParams p;
        p.criterion = criterion;
        p.delta = delta;
        p.alpha = alpha;
        p.gamma = gamma;
        p.beta = beta;
        p.ledger = l;
        return p;
    }

    MonitorOptions monitor_options() const {
        MonitorOptions o{solver()};
        o.n_max = n_max;
        o.tol = tol;
        o.candidates = candidates;
        o.stride = stride;
        o.scan = {dir_count, scale_count, samples};
        o.mc_points = mc_points;
        o.walks = walks;
        o.mc_step = mc_step;
        o.seed = seed;
        return o;
    }

    /// Every key with its resolved value, one per line, in a fixed order.
    std::string resolved_text() const {
        std::ostringstream os;
        const auto d = [](double v) { return detail::shortest(v); };
        os << "dim=" << dim << "\nn=" << n << "\nlength=" << d(length) << "\nnu=" << d(nu) << "\nmu=" << d(mu)
           << "\nsubsteps=" << substeps << "\ntol=" << d(tol) << "\nn_max=" << n_max
           << "\ndealias=" << (dealias ? "true" : "false") << "\nconstants=" << (calibrate ? "calibrate" : "default");
        if (!calibrate)
            for (int i = 0; i < 4; ++i) os << "\nc" << i + 1 << "=" << d(c[i]);
        os << "\ncalibration_samples=" << calibration_samples << "\ncriterion=" << to_string(criterion)
           << "\ndelta=" << d(delta);
        if (alpha) os << "\nalpha=" << d(*alpha);
        os << "\ngamma=" << d(gamma) << "\nbeta=" << d(beta) << "\nhorizon=" << d(horizon) << "\nepsilon=" << d(epsilon)
           << "\ndir_count=" << dir_count << "\nscale_count=" << scale_count << "\nsamples=" << samples
           << "\nstride=" << stride << "\ncandidates=" << candidates << "\nwalks=" << walks << "\nmc_step=" << d(mc_step)
           << "\nseed=" << seed << "\nmc_points=" << mc_points << "\ninitial=" << initial.text << "\noutput=" << output
           << "\n";
        return os.str();
    }
};

namespace detail {

struct ConfigEntry {
    std::string value;
    int line = 0;
};

inline double config_double(const ConfigEntry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size() || !std::isfinite(v)) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a finite number, got '" + e.value + "'", e.line);
    }
}

inline long long config_int(const ConfigEntry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + e.value + "'", e.line);
    }
}

inline bool config_bool(const ConfigEntry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + e.value + "'", e.line);
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    static const std::vector<std::string> known = {
        "dim", "n", "length", "nu", "mu", "substeps", "tol", "n_max", "dealias", "constants", "c1", "c2", "c3",
        "c4", "calibration_samples", "criterion", "delta", "alpha", "gamma", "beta", "horizon", "epsilon",
        "dir_count", "scale_count", "samples", "stride", "candidates", "walks", "mc_step", "seed", "mc_points",
        "initial", "output"};
    std::map<std::string, detail::ConfigEntry> kv;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = detail::trim(raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + body + "'", line);
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown key '" + key + "'", line);
        if (auto it = kv.find(key); it != kv.end())
            throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) +
                                  ", again on line " + std::to_string(line) + ")",
                              line);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
        kv[key] = {value, line};
    }
    const int end_line = line + 1;

    RunConfig cfg;
    const auto has = [&](const std::string& k) { return kv.count(k) > 0; };
    const auto at = [&](const std::string& k) -> const detail::ConfigEntry& { return kv.at(k); };
    const auto require = [&](const std::string& k) {
        if (!has(k)) throw ConfigError("missing required key '" + k + "' (end of input)", end_line);
    };
    const auto get_int = [&](const std::string& k, auto& out, long long lo, long long hi, const std::string& range) {
        if (!has(k)) return;
        const long long v = detail::config_int(at(k), k);
        if (v < lo || v > hi) throw ConfigError(k + " = " + at(k).value + " out of range: " + range, at(k).line);
        out = static_cast<std::remove_reference_t<decltype(out)>>(v);
    };
    const auto get_double = [&](const std::string& k, double& out, auto ok, const std::string& range) {
        if (!has(k)) return;
        const double v = detail::config_double(at(k), k);
        if (!ok(v)) throw ConfigError(k + " = " + at(k).value + " out of range: " + range, at(k).line);
        out = v;
    };
    const auto positive = [](double v) { return v > 0.0; };

    require("dim");
    require("n");
    require("initial");
    get_int("dim", cfg.dim, 2, 3, "dimension must be 2 or 3");
    get_int("n", cfg.n, 8, 1 << 12, "grid size must be a power of two >= 8");
    if ((cfg.n & (cfg.n - 1)) != 0) throw ConfigError("n = " + at("n").value + " is not a power of two", at("n").line);
    get_double("length", cfg.length, positive, "box length must be positive");
    get_double("nu", cfg.nu, positive, "viscosity must be positive");
    get_double("mu", cfg.mu, positive, "magnetic diffusivity must be positive");
    get_int("substeps", cfg.substeps, 4, 1 << 20, "substeps must be >= 4");
    get_double("tol", cfg.tol, positive, "tolerance must be positive");
    get_int("n_max", cfg.n_max, 1, 100000, "n_max must be >= 1");
    if (has("dealias")) cfg.dealias = detail::config_bool(at("dealias"), "dealias");
    if (has("constants")) {
        const auto& e = at("constants");
        if (e.value == "calibrate") cfg.calibrate = true;
        else if (e.value != "default") throw ConfigError("constants must be 'default' or 'calibrate'", e.line);
    }
    for (int i = 0; i < 4; ++i) {
        const std::string k = "c" + std::to_string(i + 1);
        if (has(k) && cfg.calibrate)
            throw ConfigError(k + " given together with constants=calibrate", at(k).line);
        get_double(k, cfg.c[i], [](double v) { return v >= 1.0; }, "constants are >= 1");
    }
    get_int("calibration_samples", cfg.calibration_samples, 0, 1000, "0 to 1000");
    if (has("criterion")) {
        try {
            cfg.criterion = parse_criterion(at("criterion").value);
        } catch (const ParameterError& e) {
            throw ConfigError(e.what(), at("criterion").line);
        }
    }
    get_double("delta", cfg.delta, [](double v) { return v > 0.0 && v < 1.0; },
               "the sparseness ratio delta must lie in the open interval (0,1)");
    if (has("alpha")) {
        double a = 0.0;
        get_double("alpha", a, [](double v) { return v >= 0.0; }, "alpha must be nonnegative");
        cfg.alpha = a;
    }
    get_double("gamma", cfg.gamma, [](double v) { return v > 0.0 && v < 1.0; }, "gamma must lie in (0,1)");
    get_double("beta", cfg.beta, [](double v) { return v > 0.5 && v < 1.0; }, "beta must lie in (1/2,1)");
    get_double("horizon", cfg.horizon, positive, "horizon must be positive");
    get_double("epsilon", cfg.epsilon, positive, "epsilon must be positive");
    if (!(cfg.epsilon < cfg.horizon)) {
        const int l = has("epsilon") ? at("epsilon").line : (has("horizon") ? at("horizon").line : end_line);
        throw ConfigError("epsilon must lie in (0, horizon)", l);
    }
    get_int("dir_count", cfg.dir_count, 0, 100000, "dir_count must be >= 0 (0 selects the default)");
    get_int("scale_count", cfg.scale_count, 1, 64, "1 to 64");
    get_int("samples", cfg.samples, 64, 1 << 20, "segment samples must be >= 64");
    get_int("stride", cfg.stride, 1, 1 << 12, "stride must be >= 1");
    if (cfg.n % cfg.stride != 0)
        throw ConfigError("stride " + std::to_string(cfg.stride) + " does not divide n", at("stride").line);
    get_int("candidates", cfg.candidates, 2, 1000, "2 to 1000");
    get_int("walks", cfg.walks, 10000, 1LL << 40, "walks must be >= 10000");
    get_double("mc_step", cfg.mc_step, [](double v) { return v >= 0.0; }, "mc_step must be >= 0 (0 selects r*1e-4)");
    get_int("seed", cfg.seed, 0, (1LL << 62), "seed must be nonnegative");
    get_int("mc_points", cfg.mc_points, 0, 100000, "mc_points must be >= 0");
    try {
        cfg.initial = parse_initial_spec(at("initial").value);
        if (cfg.initial.kind == InitialKind::OrszagTang && cfg.dim != 2)
            throw ParameterError("orszag-tang initial data needs dim = 2");
    } catch (const ParameterError& e) {
        throw ConfigError(e.what(), at("initial").line);
    }
    if (has("output")) cfg.output = at("output").value;
    try {
        cfg.criterion_params(cfg.calibrate ? ConstantsLedger{} : cfg.ledger()).validate();
    } catch (const ParameterError& e) {
        int l = end_line;
        for (const char* k : {"alpha", "beta", "gamma", "delta", "criterion"})
            if (has(k)) {
                l = at(k).line;
                break;
            }
        throw ConfigError(e.what(), l);
    }
    return cfg;
}

} // namespace mhdlab
