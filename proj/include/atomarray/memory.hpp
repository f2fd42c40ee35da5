#pragma once

#include <complex>
#include <vector>

#include "atomarray/model1d.hpp"
#include "atomarray/pulse.hpp"

namespace atomarray::memory {

using model1d::InterfaceParams;

// One storage or retrieval run of the three-level 1D model.
struct MemoryRun {
    std::vector<double> t;
    std::vector<std::complex<double>> P;  // dipole trajectory
    std::vector<std::complex<double>> S;  // spin trajectory
    PulseShape input;
    PulseShape control;
    double stored_excitation = 0.0;  // |S(T)|^2
    double efficiency = 0.0;         // e_s or e_r
};

// Control pulse that maximizes the storage efficiency of the input shape h0,
// evaluated in closed form.  The cumulative-integral denominator diverges at
// t -> 0 when h0(0) != 0; |Omega| is clamped at clamp_factor*(Gamma+gamma_loss)
// and the denominator is floored at its value at t = 1e-3 * T.
PulseShape optimal_storage_control(const PulseShape& h0, const InterfaceParams& p,
                                   double delta_p, double clamp_factor = 1e3);

// Integrates the classical means of the three-level model with E0(t) = h0(t)
// and the given control, from t = 0 to the end of h0.  Returns the run with
// e_s = |S(T)|^2 / int |h0|^2.  Fixed-step 4th-order integration; a
// step-halving audit throws if e_s moves by more than 1e-4.
MemoryRun simulate_storage(const PulseShape& h0, const PulseShape& control,
                           const InterfaceParams& p, double delta_p, double dt);

// Integrates the model from the start of the control with S = S0, P = 0 and
// vacuum input, accumulating the emitted target-mode energy
// int |E_out|^2 dt with E_out = i sqrt(Gamma) P.  Returns e_r = energy/|S0|^2.
MemoryRun simulate_retrieval(std::complex<double> S0, const PulseShape& control,
                             const InterfaceParams& p, double delta_p, double dt);

// Conjugate time reverse Omega*(T - t) on the reversed grid; an involution.
PulseShape time_reverse_control(const PulseShape& control);

// int Gamma_S(t) dt for a given control (adiabatic-elimination width).
double integrated_two_photon_width(const PulseShape& control, const InterfaceParams& p,
                                   double delta_p);

}  // namespace atomarray::memory
