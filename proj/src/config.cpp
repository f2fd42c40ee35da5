#include "atomarray/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace atomarray::config {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& v) {
    std::vector<int> out;
    for (double d : parse_double_list(v)) out.push_back(static_cast<int>(d));
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean value '" + v + "'");
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical_text); }

double RunConfig::waist_lambda() const {
    if (beam_waist_unit == "lambda") return beam_waist;
    if (beam_waist_unit == "a") return beam_waist * lattice_a;
    if (beam_waist_unit == "L_a") return beam_waist * lattice_a * lattice_n_side;
    throw ConfigError("config: beam.waist_unit must be a, lambda or L_a");
}

RunConfig parse_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = value;
    }

    RunConfig cfg;
    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return "";
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    try {
        if (auto v = take("schema_version"); !v.empty()) cfg.schema_version = std::stoi(v);
        if (cfg.schema_version != 1)
            throw ConfigError("config: unsupported schema_version");
        if (auto v = take("lattice.a"); !v.empty()) cfg.lattice_a = std::stod(v);
        if (auto v = take("lattice.n_side"); !v.empty()) cfg.lattice_n_side = std::stoi(v);
        if (auto v = take("lattice.n_z"); !v.empty()) cfg.lattice_n_z = std::stoi(v);
        if (auto v = take("lattice.a_z"); !v.empty()) cfg.lattice_a_z = std::stod(v);
        if (auto v = take("lattice.e_d"); !v.empty()) cfg.lattice_e_d = v;
        if (auto v = take("beam.waist"); !v.empty()) cfg.beam_waist = std::stod(v);
        if (auto v = take("beam.waist_unit"); !v.empty()) cfg.beam_waist_unit = v;
        if (auto v = take("beam.plane_distance"); !v.empty())
            cfg.beam_plane_distance = std::stod(v);
        if (auto v = take("grid.half_width_waists"); !v.empty())
            cfg.grid_half_width_waists = std::stod(v);
        if (auto v = take("grid.spacing"); !v.empty()) cfg.grid_spacing = std::stod(v);
        if (auto v = take("disorder.sigmas"); !v.empty()) cfg.disorder_sigmas = parse_double_list(v);
        if (auto v = take("disorder.realizations"); !v.empty())
            cfg.disorder_realizations = std::stoi(v);
        if (auto v = take("disorder.base_seed"); !v.empty())
            cfg.disorder_base_seed = std::stoull(v);
        if (auto v = take("scan.min"); !v.empty()) cfg.scan_min = std::stod(v);
        if (auto v = take("scan.max"); !v.empty()) cfg.scan_max = std::stod(v);
        if (auto v = take("scan.steps"); !v.empty()) cfg.scan_steps = std::stoi(v);
        if (auto v = take("scan.relative_to_delta0"); !v.empty())
            cfg.scan_relative_to_delta0 = parse_bool(v);
        if (auto v = take("scan.refine_points"); !v.empty())
            cfg.scan_refine_points = std::stoi(v);
        if (auto v = take("sweep.n_sides"); !v.empty()) cfg.sweep_n_sides = parse_int_list(v);
        if (auto v = take("layers.a_min"); !v.empty()) cfg.layers_a_min = std::stod(v);
        if (auto v = take("layers.a_max"); !v.empty()) cfg.layers_a_max = std::stod(v);
        if (auto v = take("layers.a_steps"); !v.empty()) cfg.layers_a_steps = std::stoi(v);
        if (auto v = take("layers.delta_half_span"); !v.empty())
            cfg.layers_delta_half_span = std::stod(v);
        if (auto v = take("layers.delta_steps"); !v.empty())
            cfg.layers_delta_steps = std::stoi(v);
        if (auto v = take("layers.gamma_s_over_gamma0"); !v.empty())
            cfg.layers_gamma_s_over_gamma0 = std::stod(v);
        if (auto v = take("layers.eta"); !v.empty()) cfg.layers_eta = std::stod(v);
        if (auto v = take("memory.pulse_file"); !v.empty()) cfg.memory_pulse_file = v;
        if (auto v = take("memory.cooperativity"); !v.empty())
            cfg.memory_cooperativity = std::stod(v);
        if (auto v = take("memory.clamp"); !v.empty()) cfg.memory_clamp = std::stod(v);
        if (auto v = take("memory.dt"); !v.empty()) cfg.memory_dt = std::stod(v);
        if (auto v = take("memory.hold"); !v.empty()) cfg.memory_hold = std::stod(v);
        if (auto v = take("memory.mode"); !v.empty()) cfg.memory_mode = v;
        if (auto v = take("output.formats"); !v.empty()) cfg.output_formats = v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: bad value: ") + e.what());
    }

    if (!kv.empty()) {
        std::string keys;
        for (const auto& [k, _] : kv) keys += (keys.empty() ? "" : ", ") + k;
        throw ConfigError("config: unknown keys: " + keys);
    }

    if (!(cfg.lattice_a > 0.0)) throw ConfigError("config: lattice.a must be positive");
    if (cfg.lattice_n_side < 1) throw ConfigError("config: lattice.n_side must be >= 1");
    if (cfg.lattice_n_z < 1) throw ConfigError("config: lattice.n_z must be >= 1");
    if (cfg.lattice_e_d != "x" && cfg.lattice_e_d != "y")
        throw ConfigError("config: lattice.e_d must be x or y");
    if (!(cfg.beam_waist > 0.0)) throw ConfigError("config: beam.waist must be positive");
    if (cfg.disorder_realizations < 1)
        throw ConfigError("config: disorder.realizations must be >= 1");
    if (cfg.scan_steps < 3) throw ConfigError("config: scan.steps must be >= 3");
    if (cfg.memory_mode != "model1d" && cfg.memory_mode != "subradiant")
        throw ConfigError("config: memory.mode must be model1d or subradiant");

    // Canonical form: the original assignments, sorted by key.
    std::istringstream again(text);
    std::vector<std::string> lines;
    while (std::getline(again, line)) {
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        lines.push_back(trim(line.substr(0, eq)) + " = " + trim(line.substr(eq + 1)));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) cfg.canonical_text += l + "\n";
    return cfg;
}

RunConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

}  // namespace atomarray::config
