#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "atomarray/fitting.hpp"
#include "atomarray/geometry.hpp"

namespace atomarray::scattering {

using fitting::ResonanceFit;
using geometry::ArrayRealization;
using geometry::GaussianBeam;

// N x N complex symmetric system M sigma = i * drive with
//   M_nn = gamma/2 + gamma_s,n/2 - i (delta_p + delta_n),
//   M_nm = D_nm (dipole-dipole kernel, module greens sign convention).
struct InteractionMatrix {
    Eigen::MatrixXcd m;
    double delta_p = 0.0;

    int size() const { return static_cast<int>(m.rows()); }
};

InteractionMatrix build_matrix(const ArrayRealization& arr, double delta_p);

// Incident-beam drive, entry n = u(r_perp_n) e^{i direction k_p z_n} in
// drive-normalized units (unit amplitude at the beam center).  direction is
// +1 or -1; warns when the waist is under 2a.
Eigen::VectorXcd drive_vector(const ArrayRealization& arr, const GaussianBeam& beam,
                              int direction);

struct SteadyStateSolution {
    Eigen::VectorXcd dipoles;
    Eigen::VectorXcd drive;
    double residual_norm = 0.0;  // ||M sigma - i drive|| / ||drive||
};

// Dense LU solve of M sigma = i drive; throws std::runtime_error with a
// condition estimate when the relative residual exceeds 1e-10.
SteadyStateSolution solve_steady_state(const InteractionMatrix& m,
                                       const Eigen::VectorXcd& drive);

struct GridSpec {
    double half_width = 0.0;  // 0 means auto (4 waists)
    double spacing = 0.25;    // lambda units; warn above lambda/4
};

// Complex field samples on a transverse plane.
struct FieldMap {
    double plane_z = 0.0;
    double half_width = 0.0;
    double spacing = 0.0;
    int points_per_side = 0;
    std::vector<std::complex<double>> samples;  // row-major, y outer

    double coord(int i) const { return -half_width + spacing * i; }
    std::complex<double>& at(int ix, int iy) { return samples[iy * points_per_side + ix]; }
    const std::complex<double>& at(int ix, int iy) const {
        return samples[iy * points_per_side + ix];
    }
};

// Scattered field sum_n 1.5 * g(r - r_n) sigma_n (drive-normalized units) on
// a plane outside the atom slab.  Add incident_field for the total field.
FieldMap scattered_field(const SteadyStateSolution& sol, const ArrayRealization& arr,
                         double plane_z, const GridSpec& grid,
                         const greens::DipoleOrientation& orientation);

FieldMap incident_field(const GaussianBeam& beam, double plane_z, const GridSpec& grid,
                        int direction);

// Trapezoidal overlap integral_field(r_perp) u*(r_perp) d^2r with the
// plane-wave reference phase e^{i direction k_p plane_z} removed.
std::complex<double> project_onto_mode(const FieldMap& field, const GaussianBeam& beam,
                                       int direction);

// Quadrature weights for projecting a dipole configuration straight onto the
// target mode at a plane: amplitude(sigma) = weights . sigma / input_norm.
// Precomputing them makes a detuning scan cost one linear solve per point.
struct ModeProjector {
    Eigen::VectorXcd weights;
    std::complex<double> input_norm{1.0, 0.0};
    double plane_z = 0.0;
    int direction = +1;
};

ModeProjector make_projector(const ArrayRealization& arr, const GaussianBeam& beam,
                             double plane_z, int direction, const GridSpec& grid);

std::complex<double> projected_amplitude(const ModeProjector& proj,
                                         const Eigen::VectorXcd& sigma);

// Paraxial closed-form backward projection i (3/(8 pi)) u(0) sum_n u*(r_n)
// e^{i k_p z_n} sigma_n / input_norm; cross-check for the grid quadrature.
std::complex<double> paraxial_reflection_amplitude(const ArrayRealization& arr,
                                                   const GaussianBeam& beam,
                                                   const Eigen::VectorXcd& sigma);

struct SpectrumScan {
    std::vector<double> detunings;
    std::vector<double> R, T, L;
    ResonanceFit fit;
    bool fitted = false;
};

struct SpectrumOptions {
    double plane_distance = 5.0;  // |z| of the projection planes past the slab
    GridSpec grid;
    int direction = +1;  // illumination direction
    bool fit = true;
    int workers = 1;
};

// Classical reflectivity scan: per detuning build, solve, project backward
// (reflection) and forward with the incident field added (transmission).
SpectrumScan reflectivity_spectrum(const ArrayRealization& arr, const GaussianBeam& beam,
                                   const std::vector<double>& scan,
                                   const SpectrumOptions& opt = {});

// Coarse scan across center +- half_span then a refinement pass across the
// detected peak; returns the refined scan with fit.
SpectrumScan find_resonance(const ArrayRealization& arr, const GaussianBeam& beam,
                            double center, double half_span, const SpectrumOptions& opt = {},
                            int coarse_points = 81, int refine_points = 16);

// Full non-Hermitian eigendecomposition of the kernel part K = M + i delta_p.
// Eigenvectors are normalized under the complex-symmetric bilinear form
// sum_n v_n^2 = 1; modes where that form vanishes (exceptional points) are
// flagged and left Hermitian-normalized.
struct EigenmodeSet {
    Eigen::VectorXcd kernel_eigenvalues;  // D_l
    Eigen::MatrixXcd vectors;             // columns v_l
    std::vector<double> decay_rates;      // 2 Re D_l
    std::vector<double> shifts;           // Im D_l
    std::vector<bool> normalization_ok;
};

EigenmodeSet eigenmodes(const InteractionMatrix& m);

// |sum_n v_{l,n} t_n|^2 per mode, with t normalized to sum t^2 = 1.
Eigen::VectorXd mode_overlaps(const EigenmodeSet& modes, const Eigen::VectorXcd& target);

// Layer-collective multilayer model: N_z x N_z system with the full
// inter-layer kernel.  Detunings are measured relative to the single-layer
// collective shift Delta_0 (the kernel's self-term).
struct MultilayerSystem {
    greens::LatticeParams lat;
    int n_layers = 1;
    double eta = 1.0;      // beam-array overlap
    double gamma_s = 0.0;  // non-collective loss per layer dipole
};

SpectrumScan multilayer_effective_solve(const MultilayerSystem& sys,
                                        const std::vector<double>& detunings,
                                        bool do_fit = true);

// Convenience wrapper deriving the layer count from the realization and eta
// from the beam overlap with the layer footprint.
SpectrumScan multilayer_effective_solve(const ArrayRealization& arr,
                                        const GaussianBeam& beam,
                                        const std::vector<double>& detunings);

}  // namespace atomarray::scattering
