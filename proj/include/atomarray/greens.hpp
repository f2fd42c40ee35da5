#pragma once

#include <Eigen/Core>
#include <complex>

namespace atomarray::greens {

// Unit transition-dipole orientation (may be complex for circular dipoles).
struct DipoleOrientation {
    Eigen::Vector3cd e_d{1.0, 0.0, 0.0};

    DipoleOrientation() = default;
    explicit DipoleOrientation(const Eigen::Vector3cd& e);
    static DipoleOrientation x() { return DipoleOrientation{}; }
    static DipoleOrientation y();
};

struct LatticeParams {
    double a = 0.6;     // in-plane lattice constant, units of lambda
    double a_z = 1.0;   // inter-layer spacing, units of lambda
    DipoleOrientation orientation;
};

// Free-space dyadic Green's function at the carrier wavenumber, projected
// onto the dipole orientation: e_d* . G(r) . e_d with the e^{ikr}/(4 pi r)
// normalization.  Throws std::domain_error at r = 0.
std::complex<double> projected_green(const Eigen::Vector3d& r,
                                     const DipoleOrientation& orientation);

// Dipole-dipole kernel entry D(r) = -1.5 i * projected_green(r) in gamma = 1,
// lambda = 1 units; its r -> 0 limit has Re -> gamma/2.  The kernel enters
// the dipole equation as
//   d sigma_n/dt = (i delta_p - D_nn) sigma_n - sum_{m != n} D_nm sigma_m + i drive_n,
// which fixes the sign convention used by every other module.
std::complex<double> kernel_entry(const Eigen::Vector3d& r,
                                  const DipoleOrientation& orientation);

// Gamma_0 = (3/4pi) (lambda/a)^2 gamma, collective emission rate of a
// uniformly excited infinite 2D array.
double collective_rate_2d(const LatticeParams& lat);

// Regularized on-site lattice sum gamma/2 + sum_{n != 0} D(r_n) over a disc of
// the given radius with a Gaussian convergence window.  Its real part
// reproduces Gamma_0/2, its imaginary part is the collective shift Delta_0.
std::complex<double> lattice_sum_onsite(const LatticeParams& lat, double cutoff_radius);

// Delta_0 from the windowed lattice sum, with a convergence audit performed
// by doubling the cutoff.  Throws std::runtime_error when doubling moves the
// result by more than tolerance (absolute, units of gamma).  The doubling
// difference is reported through error_estimate when non-null.
double collective_shift_2d(const LatticeParams& lat, double cutoff_radius,
                           double tolerance = 1e-2, double* error_estimate = nullptr);

// Total emission rate into diffraction orders beyond (0,0),
//   gamma_diff = Gamma_0 * sum_LC (1 - (lambda/a)^2 |m.e_d|^2) / sqrt(1 - (lambda/a)^2 |m|^2),
// summed over integer orders inside the light cone.  Zero for a < lambda.
// Warns on stderr when an order is within 1e-9 of grazing.
double diffraction_loss(const LatticeParams& lat);

// Effective inter-layer dipole-dipole kernel D_{nz,mz} for layer separation
// dn, summed over all diffraction orders with imaginary longitudinal
// wavenumbers for evanescent ones.  Evanescent orders are truncated once
// their decay length drops below a_z|dn|/20; the magnitude of the first
// excluded term is reported through truncation_estimate when non-null.
std::complex<double> interlayer_kernel(const LatticeParams& lat, int dn,
                                       double* truncation_estimate = nullptr);

// Real evanescent part epsilon_{nz,mz} of the inter-layer kernel (a < lambda
// only): the deviation from the purely 1D inter-layer picture.
double evanescent_correction(const LatticeParams& lat, int dn,
                             double* truncation_estimate = nullptr);

// First-order collective shift of the phase-matched multilayer mode,
//   Delta' = 1/N_z sum_{nz != mz} e^{i k_p a_z (nz-mz)} epsilon_{nz,mz}.
// Requires 2 a_z/lambda integer; asserts the imaginary residue is < 1e-8.
double phase_matched_shift(const LatticeParams& lat, int Nz);

}  // namespace atomarray::greens
