#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace atomarray::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key-path = value run configuration (schema version 1).  Unknown keys
// are rejected so typos cannot silently change an experiment.
struct RunConfig {
    int schema_version = 1;

    double lattice_a = 0.6;  // lambda units
    int lattice_n_side = 30;
    int lattice_n_z = 1;
    double lattice_a_z = 1.0;
    std::string lattice_e_d = "x";  // x | y

    double beam_waist = 8.0;
    std::string beam_waist_unit = "a";  // a | lambda | L_a
    double beam_plane_distance = 5.0;   // projection plane offset, lambda
    double grid_half_width_waists = 4.0;
    double grid_spacing = 0.25;

    std::vector<double> disorder_sigmas;  // lambda units
    int disorder_realizations = 1;
    std::uint64_t disorder_base_seed = 1;

    double scan_min = -5.0;
    double scan_max = 5.0;
    int scan_steps = 81;
    bool scan_relative_to_delta0 = true;  // offsets from the collective shift
    int scan_refine_points = 16;

    std::vector<int> sweep_n_sides;

    double layers_a_min = 0.55;
    double layers_a_max = 0.95;
    int layers_a_steps = 41;
    double layers_delta_half_span = 2.0;  // units of Gamma_0
    int layers_delta_steps = 121;
    double layers_gamma_s_over_gamma0 = 0.05;
    double layers_eta = 1.0;

    std::string memory_pulse_file;
    double memory_cooperativity = 10.0;
    double memory_clamp = 1e3;
    double memory_dt = 0.0;  // 0 = auto
    double memory_hold = 0.0;
    std::string memory_mode = "model1d";  // model1d | subradiant

    std::string output_formats = "csv,json";

    std::string canonical_text;  // sorted "key = value" lines
    std::uint64_t hash() const;

    double waist_lambda() const;  // resolved beam waist in lambda units
};

RunConfig parse_text(const std::string& text);
RunConfig parse_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace atomarray::config
