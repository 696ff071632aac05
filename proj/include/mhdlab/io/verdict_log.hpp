// verdict_log.hpp: JSON-lines records for monitor verdicts.
//
// Line 1 is {"record":"config",...}; one {"record":"step",...} per StepVerdict;
// a final {"record":"verdict",...}. No wall-clock fields, so identical inputs
// give byte-identical logs.
#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "mhdlab/monitor.hpp"

namespace mhdlab {

inline nlohmann::json point_json(const Point& p, int dim) {
    auto a = nlohmann::json::array();
    for (int i = 0; i < dim; ++i) a.push_back(p[i]);
    return a;
}

inline nlohmann::json to_json(const HarmonicWitness& w, int dim) {
    return {{"set", w.set},
            {"x0", point_json(w.x0, dim)},
            {"direction", point_json(w.direction, dim)},
            {"scale", w.scale},
            {"k_fraction", w.k_measure},
            {"omega_hat", w.omega_hat},
            {"standard_error", w.standard_error},
            {"seed", w.seed},
            {"pass", w.pass}};
}

inline nlohmann::json to_json(const StepVerdict& v, int dim) {
    nlohmann::json j = {{"record", "step"},
                        {"index", v.index},
                        {"t0", v.t0},
                        {"tau", v.tau},
                        {"t", v.t},
                        {"case", to_string(v.result)},
                        {"A", v.a},
                        {"u_norm_t0", v.u_norm_t0},
                        {"b_norm_t0", v.b_norm_t0},
                        {"u_norm_t", v.u_norm},
                        {"b_norm_t", v.b_norm},
                        {"measured", v.measured},
                        {"thresholds", v.thresholds},
                        {"r_cap", v.r_cap},
                        {"worst_ratio", v.worst_ratio},
                        {"scanned_points", v.scanned_points},
                        {"candidates_tried", v.candidates_tried},
                        {"interpolation_bound", v.interpolation_bound},
                        {"strip_measured", v.strip_measured},
                        {"strip_bound", v.strip_bound},
                        {"corollary6_ok", v.corollary6_ok},
                        {"magnetic_condition", v.magnetic_condition},
                        {"diagnostic", v.diagnostic}};
    auto w = nlohmann::json::array();
    for (const auto& x : v.witnesses) w.push_back(to_json(x, dim));
    j["witnesses"] = w;
    return j;
}

inline nlohmann::json resolution_json(const CriterionParams& cp, const MonitorOptions& opt) {
    const int dim = opt.solver.grid.dim();
    return {{"criterion", to_string(cp.criterion)},
            {"delta", cp.delta},
            {"h", cp.h()},
            {"alpha", cp.alpha_value()},
            {"gamma", cp.gamma},
            {"beta", cp.beta},
            {"C1", cp.ledger.c1()},
            {"C2", cp.ledger.c2()},
            {"C3", cp.ledger.c3()},
            {"C4", cp.ledger.c4()},
            {"provenance",
             {std::string(to_string(cp.ledger.provenance(1))), std::string(to_string(cp.ledger.provenance(2))),
              std::string(to_string(cp.ledger.provenance(3))), std::string(to_string(cp.ledger.provenance(4)))}},
            {"candidates", opt.candidates},
            {"stride", opt.stride},
            {"dir_count", opt.scan.dir_count > 0 ? opt.scan.dir_count : default_dir_count(dim)},
            {"scale_count", opt.scan.scale_count},
            {"samples", opt.scan.samples},
            {"mc_points", opt.mc_points},
            {"walks", opt.walks},
            {"seed", opt.seed}};
}

/// Writes the whole verdict as JSON lines. `config_text` is the resolved config.
inline void write_verdict_log(std::ostream& os, const MonitorVerdict& v, const CriterionParams& cp,
                              const MonitorOptions& opt, const std::string& config_text) {
    const int dim = opt.solver.grid.dim();
    nlohmann::json head = {{"record", "config"}, {"config", config_text}, {"resolution", resolution_json(cp, opt)}};
    if (!v.note.empty()) head["note"] = v.note;
    os << head.dump() << '\n';
    for (const auto& s : v.steps) os << to_json(s, dim).dump() << '\n';
    nlohmann::json tail = {{"record", "verdict"},
                           {"status", to_string(v.status)},
                           {"horizon", v.horizon},
                           {"epsilon", v.epsilon},
                           {"steps", v.steps.size()},
                           {"diagnostic", v.diagnostic}};
    os << tail.dump() << '\n';
}

} // namespace mhdlab
