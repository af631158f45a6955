#include "nsk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nsk {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
    }
    if (used != v.size()) {
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    }
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long x = 0;
    try {
        x = std::stol(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
    }
    if (used != v.size()) {
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    }
    return x;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double("list", item));
    }
    return out;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.raw_text = text;

    const std::map<std::string, std::function<void(const std::string&, const std::string&)>>
        setters = {
            {"gamma", [&](auto& k, auto& v) { cfg.gamma = to_double(k, v); }},
            {"alpha", [&](auto& k, auto& v) { cfg.alpha = to_double(k, v); }},
            {"c", [&](auto& k, auto& v) { cfg.c = to_double(k, v); }},
            {"eps", [&](auto& k, auto& v) { cfg.eps = to_double(k, v); }},
            {"v_minus", [&](auto& k, auto& v) { cfg.v_minus = to_double(k, v); }},
            {"u_minus", [&](auto& k, auto& v) { cfg.u_minus = to_double(k, v); }},
            {"family", [&](auto& k, auto& v) { cfg.family = static_cast<int>(to_long(k, v)); }},
            {"lambda", [&](auto& k, auto& v) { cfg.lambda = to_double(k, v); }},
            {"delta0", [&](auto& k, auto& v) { cfg.delta0 = to_double(k, v); }},
            {"delta3", [&](auto& k, auto& v) { cfg.delta3 = to_double(k, v); }},
            {"L", [&](auto& k, auto& v) { cfg.L = to_double(k, v); }},
            {"n", [&](auto& k, auto& v) { cfg.n = static_cast<int>(to_long(k, v)); }},
            {"t_end", [&](auto& k, auto& v) { cfg.t_end = to_double(k, v); }},
            {"cfl", [&](auto& k, auto& v) { cfg.cfl = to_double(k, v); }},
            {"v_floor", [&](auto& k, auto& v) { cfg.v_floor = to_double(k, v); }},
            {"out_stride", [&](auto& k, auto& v) { cfg.out_stride = to_double(k, v); }},
            {"nu", [&](auto& k, auto& v) { cfg.nu = to_double(k, v); }},
            {"pert_kind", [&](auto&, auto& v) { cfg.pert_kind = v; }},
            {"pert_amp_v", [&](auto& k, auto& v) { cfg.pert_amp_v = to_double(k, v); }},
            {"pert_amp_h", [&](auto& k, auto& v) { cfg.pert_amp_h = to_double(k, v); }},
            {"pert_width", [&](auto& k, auto& v) { cfg.pert_width = to_double(k, v); }},
            {"pert_center", [&](auto& k, auto& v) { cfg.pert_center = to_double(k, v); }},
            {"npi_c1", [&](auto& k, auto& v) { cfg.npi_c1 = to_double(k, v); }},
            {"npi_deltas", [&](auto&, auto& v) { cfg.npi_deltas = v; }},
            {"npi_samples", [&](auto& k, auto& v) { cfg.npi_samples = static_cast<int>(to_long(k, v)); }},
            {"npi_nodes", [&](auto& k, auto& v) { cfg.npi_nodes = static_cast<int>(to_long(k, v)); }},
            {"nu_ladder", [&](auto&, auto& v) { cfg.nu_ladder = v; }},
            {"window", [&](auto& k, auto& v) { cfg.window = to_double(k, v); }},
            {"horizon", [&](auto& k, auto& v) { cfg.horizon = to_double(k, v); }},
            {"macro_n", [&](auto& k, auto& v) { cfg.macro_n = static_cast<int>(to_long(k, v)); }},
            {"wp_kind", [&](auto&, auto& v) { cfg.wp_kind = v; }},
            {"omega", [&](auto& k, auto& v) { cfg.omega = to_double(k, v); }},
            {"sweep_target", [&](auto&, auto& v) { cfg.sweep_target = v; }},
            {"sweep_key", [&](auto&, auto& v) { cfg.sweep_key = v; }},
            {"sweep_values", [&](auto&, auto& v) { cfg.sweep_values = v; }},
            {"seed", [&](auto& k, auto& v) { cfg.seed = static_cast<std::uint64_t>(to_long(k, v)); }},
            {"threads", [&](auto& k, auto& v) { cfg.threads = static_cast<int>(to_long(k, v)); }},
        };

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (!cfg.provided.insert(key).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        it->second(key, value);
    }

    // Constraint validation, naming the violated inequality.
    if (cfg.has("gamma") && (cfg.gamma < 1.0 || cfg.gamma > 1.25)) {
        throw ConfigError("gamma must satisfy 1 <= gamma <= 5/4, got " + std::to_string(cfg.gamma));
    }
    if (cfg.has("gamma") && (cfg.alpha < 0.0 || cfg.alpha > cfg.gamma)) {
        throw ConfigError("alpha must satisfy 0 <= alpha <= gamma, got alpha = " +
                          std::to_string(cfg.alpha) + ", gamma = " + std::to_string(cfg.gamma));
    }
    if (cfg.has("gamma") &&
        (cfg.gamma - cfg.alpha < 0.0 || cfg.gamma - cfg.alpha > 1.0)) {
        throw ConfigError("beta = gamma - alpha must lie in [0, 1], got " +
                          std::to_string(cfg.gamma - cfg.alpha));
    }
    if (cfg.has("gamma") && cfg.gamma > 1.0 + cfg.alpha / 3.0) {
        cfg.warnings.push_back("gamma > 1 + alpha/3; the sharp decay analysis needs "
                               "alpha >= 3(gamma - 1)");
    }
    if (cfg.c < 0.0 || cfg.c > 0.09) {
        throw ConfigError("c must satisfy 0 <= c <= 9/100, got " + std::to_string(cfg.c));
    }
    if (cfg.has("eps") && !(cfg.eps > 0.0)) {
        throw ConfigError("eps must be positive, got " + std::to_string(cfg.eps));
    }
    if (cfg.eps > 0.3) {
        cfg.warnings.push_back("eps = " + std::to_string(cfg.eps) +
                               " exceeds 0.3; the small-amplitude theory is stretched");
    }
    if (cfg.family != 1 && cfg.family != 2) {
        throw ConfigError("family must be 1 or 2, got " + std::to_string(cfg.family));
    }
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.5)) {
        throw ConfigError("cfl must lie in (0, 0.5], got " + std::to_string(cfg.cfl));
    }
    if (!(cfg.v_floor > 0.0)) throw ConfigError("v_floor must be positive");
    if (cfg.n < 16) throw ConfigError("n must be at least 16");
    if (!(cfg.delta3 > 0.0 && cfg.delta3 < 0.5)) {
        throw ConfigError("delta3 must lie in (0, 0.5), got " + std::to_string(cfg.delta3));
    }
    if (!(cfg.delta0 > 0.0 && cfg.delta0 < 0.5)) {
        throw ConfigError("delta0 must lie in (0, 0.5), got " + std::to_string(cfg.delta0));
    }
    if (cfg.has("nu") && !(cfg.nu > 0.0)) throw ConfigError("nu must be positive");
    if (cfg.pert_kind != "none" && cfg.pert_kind != "gaussian") {
        throw ConfigError("pert_kind must be 'none' or 'gaussian', got '" + cfg.pert_kind + "'");
    }
    if (cfg.has("pert_width") && !(cfg.pert_width > 0.0)) {
        throw ConfigError("pert_width must be positive");
    }
    if (cfg.wp_kind != "profile" && cfg.wp_kind != "mollified") {
        throw ConfigError("wp_kind must be 'profile' or 'mollified', got '" + cfg.wp_kind + "'");
    }
    if (!(cfg.window > 0.0)) throw ConfigError("window must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (cfg.macro_n < 16) throw ConfigError("macro_n must be at least 16");
    if (!(cfg.omega > 0.0)) throw ConfigError("omega must be positive");
    if (cfg.npi_samples < 1) throw ConfigError("npi_samples must be at least 1");
    if (!(cfg.out_stride > 0.0)) throw ConfigError("out_stride must be positive");
    if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
    return cfg;
}

void RunConfig::resolve_defaults() {
    require("eps");
    if (!has("lambda") || lambda == 0.0) {
        lambda = std::clamp(std::sqrt(eps), eps / delta0, delta0);
    } else if (lambda < eps / delta0 || lambda > delta0) {
        warnings.push_back("lambda = " + std::to_string(lambda) +
                           " lies outside the admissible band (eps/delta0, delta0)");
    }
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!has("L") || L == 0.0) L = 12.0 / eps;
    if (!(L > 0.0)) throw ConfigError("L must be positive");
}

void RunConfig::require(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing required key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace nsk
