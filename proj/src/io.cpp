#include "atomarray/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace atomarray::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_spectrum_csv(std::ostream& out, const scattering::SpectrumScan& scan,
                        const std::string& provenance) {
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "delta_p,R,T,L\n";
    for (size_t i = 0; i < scan.detunings.size(); ++i)
        out << format_double(scan.detunings[i]) << ',' << format_double(scan.R[i]) << ','
            << format_double(scan.T[i]) << ',' << format_double(scan.L[i]) << "\n";
}

nlohmann::json fit_to_json(const fitting::ResonanceFit& fit) {
    return nlohmann::json{{"r0", fit.r0},
                          {"cooperativity", fit.cooperativity},
                          {"inv_cooperativity", (1.0 - fit.r0) / fit.r0},
                          {"delta_res", fit.delta_res},
                          {"linewidth", fit.linewidth},
                          {"points_used", fit.points_used}};
}

nlohmann::json array_to_json(const geometry::ArrayRealization& arr) {
    nlohmann::json j;
    j["lattice"] = {{"a", arr.lattice.a},
                    {"a_z", arr.lattice.a_z},
                    {"e_d", {arr.lattice.orientation.e_d[0].real(),
                             arr.lattice.orientation.e_d[1].real(),
                             arr.lattice.orientation.e_d[2].real()}}};
    j["seed"] = arr.seed;
    j["n_side"] = arr.n_side;
    j["n_layers"] = arr.n_layers;
    auto& pos = j["positions"] = nlohmann::json::array();
    for (const auto& r : arr.positions) pos.push_back({r.x(), r.y(), r.z()});
    j["detunings"] = arr.detunings;
    j["noncollective_rates"] = arr.noncollective_rates;
    j["layer_index"] = arr.layer_index;
    auto& idx = j["lattice_index"] = nlohmann::json::array();
    for (const auto& i : arr.lattice_index) idx.push_back({i.x(), i.y()});
    return j;
}

geometry::ArrayRealization array_from_json(const nlohmann::json& j) {
    geometry::ArrayRealization arr;
    arr.lattice.a = j.at("lattice").at("a").get<double>();
    arr.lattice.a_z = j.at("lattice").at("a_z").get<double>();
    const auto ed = j.at("lattice").at("e_d");
    arr.lattice.orientation = greens::DipoleOrientation(
        Eigen::Vector3cd(ed.at(0).get<double>(), ed.at(1).get<double>(),
                         ed.at(2).get<double>()));
    arr.seed = j.at("seed").get<std::uint64_t>();
    arr.n_side = j.at("n_side").get<int>();
    arr.n_layers = j.at("n_layers").get<int>();
    for (const auto& p : j.at("positions"))
        arr.positions.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(),
                                   p.at(2).get<double>());
    arr.detunings = j.at("detunings").get<std::vector<double>>();
    arr.noncollective_rates = j.at("noncollective_rates").get<std::vector<double>>();
    arr.layer_index = j.at("layer_index").get<std::vector<int>>();
    for (const auto& i : j.at("lattice_index"))
        arr.lattice_index.emplace_back(i.at(0).get<int>(), i.at(1).get<int>());
    arr.validate();
    return arr;
}

void write_trajectory_csv(std::ostream& out, const dynamics::Trajectory& traj,
                          const std::string& provenance) {
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "t,re_P0,im_P0,re_PM,im_PM,total_excitation,emitted_target_energy\n";
    for (size_t i = 0; i < traj.t.size(); ++i)
        out << format_double(traj.t[i]) << ',' << format_double(traj.P0[i].real()) << ','
            << format_double(traj.P0[i].imag()) << ',' << format_double(traj.PM[i].real())
            << ',' << format_double(traj.PM[i].imag()) << ','
            << format_double(traj.total_excitation[i]) << ','
            << format_double(traj.emitted_target_energy[i]) << "\n";
}

void write_memory_run_csv(std::ostream& out, const memory::MemoryRun& run,
                          const std::string& provenance) {
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "t,re_P,im_P,re_S,im_S,abs_control\n";
    for (size_t i = 0; i < run.t.size(); ++i)
        out << format_double(run.t[i]) << ',' << format_double(run.P[i].real()) << ','
            << format_double(run.P[i].imag()) << ',' << format_double(run.S[i].real())
            << ',' << format_double(run.S[i].imag()) << ','
            << format_double(std::abs(run.control.at(run.t[i]))) << "\n";
}

}  // namespace atomarray::io
