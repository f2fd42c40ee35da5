#pragma once

#include <complex>

namespace atomarray::model1d {

using ComplexAmplitude = std::complex<double>;

// Parameter set of the generic 1D interface: a collective dipole coupled to
// a single propagating target mode at rate gamma_target and to everything
// else at gamma_loss.  Rates and frequencies in units of the single-atom
// decay gamma; the probe detuning delta_p enters per operation.
struct InterfaceParams {
    double gamma_target = 1.0;      // Gamma, emission rate into the target mode
    double gamma_loss = 0.0;        // emission rate into undesired modes
    double collective_shift = 0.0;  // Delta, shift of the collective dipole
    double two_photon_detuning = 0.0;          // delta_2
    ComplexAmplitude control_amplitude = 0.0;  // Omega, |g>-|s> coupling field

    double total_linewidth() const { return gamma_target + gamma_loss; }
    // Throws std::invalid_argument on non-finite or negative rates.
    void validate() const;
};

// C = Gamma / gamma_loss; throws std::domain_error when gamma_loss == 0.
double cooperativity(const InterfaceParams& p);

// r0 = C / (C + 1).
double resonant_reflectivity(double cooperativity);

// r(delta_p) = -Gamma / (Gamma + gamma_loss + 2i (Delta - delta_p)).
// The transmission amplitude is 1 + r.
ComplexAmplitude reflection_amplitude(const InterfaceParams& p, double delta_p);

// Energy fraction radiated into the target mode by an initially excited
// dipole, integrated numerically on a uniform grid over [0, t_max].
// Converges to Gamma / (Gamma + gamma_loss); convergence is confirmed
// internally by doubling t_max.  Throws on too-coarse dt
// (dt > 0.1 / (Gamma + gamma_loss)) or failed convergence.
double radiated_fraction(const InterfaceParams& p, double t_max, double dt);

// Steady-state fraction of CW input power dissipated on the dipole,
// Gamma * A / (2 (A^2 + (delta_p - Delta)^2)) with A = (Gamma + gamma_loss)/2.
double absorbed_fraction(const InterfaceParams& p, double delta_p);

// Equal-time correlation of transmitted light at double resonance under
// single-excitation truncation: |1 - r0^2|^2.
double g2_zero(double r0);

// Effective width and shift of the collective two-photon transition obtained
// by adiabatic elimination of the dipole:
// Gamma_S/2 + i Delta_S = |Omega|^2 / ((Gamma+gamma_loss)/2 + i (Delta - delta_p)).
struct TwoPhotonParams {
    double gamma_s = 0.0;  // Gamma_S
    double delta_s = 0.0;  // Delta_S
};
TwoPhotonParams two_photon_params(const InterfaceParams& p, double delta_p);

}  // namespace atomarray::model1d
