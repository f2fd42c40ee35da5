#pragma once

#include <iosfwd>
#include <string>

#include "atomarray/dynamics.hpp"
#include "atomarray/geometry.hpp"
#include "atomarray/memory.hpp"
#include "atomarray/scattering.hpp"
#include "json.hpp"

namespace atomarray::io {

// Fixed 17-significant-digit formatting keeps reruns byte-identical.
std::string format_double(double v);

// SpectrumScan CSV: delta_p,R,T,L with '#' provenance comments on top.
void write_spectrum_csv(std::ostream& out, const scattering::SpectrumScan& scan,
                        const std::string& provenance);

nlohmann::json fit_to_json(const fitting::ResonanceFit& fit);

// ArrayRealization round-trips through JSON for run archival.
nlohmann::json array_to_json(const geometry::ArrayRealization& arr);
geometry::ArrayRealization array_from_json(const nlohmann::json& j);

// Trajectory CSV: t, Re/Im P0, Re/Im PM, total excitation, emitted energy.
void write_trajectory_csv(std::ostream& out, const dynamics::Trajectory& traj,
                          const std::string& provenance);

// MemoryRun CSV: t, Re/Im P, Re/Im S, |Omega|.
void write_memory_run_csv(std::ostream& out, const memory::MemoryRun& run,
                          const std::string& provenance);

}  // namespace atomarray::io
