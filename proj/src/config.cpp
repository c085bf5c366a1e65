#include "halfspec/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "halfspec/errors.hpp"

namespace halfspec {

namespace {

using nlohmann::json;

[[noreturn]] void rethrow_with_position(const std::string& text,
                                        const json::parse_error& err) {
    // err.byte is a 1-based offset into the input
    int line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    std::ostringstream msg;
    msg << "config parse error at line " << line << ", column " << column << ": "
        << err.what();
    throw parse_error(msg.str(), line, column);
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const auto& a : allowed) {
            if (key == a) ok = true;
        }
        if (!ok) throw config_error("unknown key '" + key + "' in " + where);
    }
}

}  // namespace

ConfigFile parse_config_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        rethrow_with_position(text, err);
    }
    if (!j.is_object()) throw config_error("config root must be a JSON object");

    reject_unknown_keys(
        j,
        {"params", "init", "freeze", "sites", "pad_factor", "probes", "seed", "tolerance",
         "max_iterations", "initial_radius", "max_radius", "n_lags", "n_reps", "n_tapers",
         "time_delta",
         "n_time", "pairs", "grad_params", "knot_decay", "nu_s_below", "nu_s_above"},
        "config");

    ConfigFile cfg;
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw config_error("'params' must be an object");
        for (const auto& [key, value] : j["params"].items()) {
            const Param p = param_from_name(key);  // throws on unknown names
            if (!value.is_number()) throw config_error("parameter '" + key + "' must be a number");
            cfg.params.set(p, value.get<double>());
            cfg.any_param_given = true;
        }
    }
    if (j.contains("init")) {
        const auto mode = j["init"].get<std::string>();
        if (mode == "heuristic") {
            cfg.heuristic_init = true;
        } else if (mode != "explicit") {
            throw config_error("'init' must be \"explicit\" or \"heuristic\"");
        }
    }
    if (j.contains("freeze")) {
        for (const auto& name : j["freeze"]) {
            cfg.freeze.push_back(name.get<std::string>());
            param_from_name(cfg.freeze.back());
        }
    }
    if (j.contains("sites")) {
        cfg.sites = j["sites"].get<std::vector<double>>();
    }
    if (j.contains("pad_factor")) cfg.pad_factor = j["pad_factor"].get<int>();
    if (j.contains("time_delta")) cfg.time_delta = j["time_delta"].get<double>();
    if (j.contains("probes")) cfg.probes = j["probes"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerance")) cfg.tolerance = j["tolerance"].get<double>();
    if (j.contains("max_iterations")) cfg.max_iterations = j["max_iterations"].get<int>();
    if (j.contains("initial_radius")) cfg.initial_radius = j["initial_radius"].get<double>();
    if (j.contains("max_radius")) cfg.max_radius = j["max_radius"].get<double>();
    if (j.contains("n_lags")) cfg.n_lags = j["n_lags"].get<int>();
    if (j.contains("n_reps")) cfg.n_reps = j["n_reps"].get<int>();
    if (j.contains("n_tapers")) cfg.n_tapers = j["n_tapers"].get<int>();
    if (j.contains("n_time")) cfg.n_time = j["n_time"].get<std::int64_t>();
    if (j.contains("pairs")) {
        for (const auto& pr : j["pairs"]) {
            if (!pr.is_array() || pr.size() != 2) {
                throw config_error("'pairs' entries must be [i, j] site index pairs");
            }
            cfg.pairs.emplace_back(pr[0].get<int>(), pr[1].get<int>());
        }
    }
    if (j.contains("grad_params")) {
        for (const auto& name : j["grad_params"]) {
            cfg.grad_params.push_back(name.get<std::string>());
            param_from_name(cfg.grad_params.back());
        }
    }
    if (j.contains("knot_decay")) cfg.params.knot_decay = j["knot_decay"].get<double>();
    if (j.contains("nu_s_below")) cfg.params.nu_s_below = j["nu_s_below"].get<double>();
    if (j.contains("nu_s_above")) cfg.params.nu_s_above = j["nu_s_above"].get<double>();

    if (cfg.pad_factor < 1) throw config_error("pad_factor must be >= 1");
    return cfg;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_string(buf.str());
}

}  // namespace halfspec
