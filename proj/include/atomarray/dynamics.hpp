#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <vector>

#include "atomarray/geometry.hpp"
#include "atomarray/model1d.hpp"
#include "atomarray/pulse.hpp"
#include "atomarray/scattering.hpp"

namespace atomarray::dynamics {

using geometry::ArrayRealization;
using geometry::GaussianBeam;

// Time-dependent drive for an N-atom integration: beam pulse envelope h0(t),
// checkerboard detuning modulation V(t), and the global probe detuning.
// Empty pulses mean zero.
struct DriveSchedule {
    double duration = 0.0;
    double delta_p = 0.0;
    PulseShape input;         // h0(t); the physical drive on atom n is
                              // i a sqrt(Gamma_0) u(r_n) h0(t) so that the
                              // effective 1D input amplitude is exactly h0
    PulseShape checkerboard;  // V(t), detunings delta_n = V(t) (-1)^(nx+ny)
};

// Collective observables along one integration.
struct Trajectory {
    std::vector<double> t;
    std::vector<std::complex<double>> P0;  // beam-weighted symmetric dipole
    std::vector<std::complex<double>> PM;  // beam-weighted M-point dipole
    std::vector<double> total_excitation;  // sum_n |sigma_n|^2
    std::vector<double> emitted_target_energy;  // cumulative int |E_out|^2 dt
};

enum class Method {
    split_step,  // exact collective propagation in the kernel eigenbasis,
                 // Strang splitting for V(t); step size limited only by the
                 // schedule's smoothness
    rk4          // direct fixed-step integration, for cross-validation
};

// Diagonalized collective kernel at fixed delta_p, reused across phases of a
// protocol.  Construction performs one dense eigendecomposition.
class CollectiveDynamics {
public:
    CollectiveDynamics(const ArrayRealization& arr, const GaussianBeam& beam,
                       double delta_p);

    int size() const { return static_cast<int>(checker_.size()); }
    double eta() const { return eta_; }
    double collective_rate() const { return rate_; }

    std::complex<double> collective_P0(const Eigen::VectorXcd& sigma) const;
    std::complex<double> collective_PM(const Eigen::VectorXcd& sigma) const;
    std::complex<double> output_amplitude(const Eigen::VectorXcd& sigma,
                                          std::complex<double> input) const;

    // Advances sigma in place across [t0, t0 + steps*dt].  When record is
    // non-null, observables are appended every sample_every steps.  energy
    // accumulates int |E_out|^2 dt.
    void advance(Eigen::VectorXcd& sigma, double t0, double dt, long steps,
                 const PulseShape* input, const PulseShape* checkerboard,
                 Method method, Trajectory* record, double* energy,
                 int sample_every = 1) const;

    // Exact free evolution over `duration` (no drive, no modulation).
    void free_evolve(Eigen::VectorXcd& sigma, double duration) const;

    // Dipole patterns for impulsive excitation tests.
    Eigen::VectorXcd beam_pattern() const;         // u(r_n), bilinear-normalized
    Eigen::VectorXcd m_point_pattern() const;      // u(r_n) (-1)^(nx+ny)

    // Decay rate and shift of the eigenmode with maximal overlap with a
    // pattern (kernel eigenvalue, delta_p removed).
    struct ModeInfo {
        double decay = 0.0;
        double shift = 0.0;
        double overlap = 0.0;
    };
    ModeInfo dominant_mode(const Eigen::VectorXcd& pattern) const;

    // Bilinear projection coefficient v^T sigma onto the eigenmode with
    // maximal M-pattern overlap (the stable spin of the protocol).
    std::complex<double> m_mode_amplitude(const Eigen::VectorXcd& sigma) const;
    ModeInfo m_mode_info() const { return m_mode_info_; }

private:
    Eigen::VectorXcd rhs(double t, const Eigen::VectorXcd& sigma,
                         const PulseShape* input, const PulseShape* checkerboard) const;

    Eigen::MatrixXcd vectors_, inverse_;
    Eigen::VectorXcd evals_;       // eigenvalues of M0 (delta_p included)
    Eigen::MatrixXcd m0_;          // kept for the rk4 path
    Eigen::VectorXd checker_;      // (-1)^(nx+ny)
    Eigen::VectorXd beam_weights_; // u(r_n)
    Eigen::VectorXcd drive_dir_;   // a sqrt(Gamma_0) u(r_n)
    double eta_ = 1.0;
    double rate_ = 0.0;            // Gamma_0
    double delta_p_ = 0.0;
    Eigen::VectorXcd m_mode_vector_;  // dominant M eigenmode, sum v^2 = 1
    ModeInfo m_mode_info_;
    double collective_weight_ = 0.0;  // a / sqrt(eta)
    double norm_bound_ = 0.0;      // infinity norm of M0, rk4 step guard
};

// Integrates d sigma/dt = -M(t) sigma + i drive(t) from sigma = 0 and
// returns the trajectory.  A step-halving audit on the final observables
// throws std::runtime_error on disagreement above 1e-4.
Trajectory integrate(const ArrayRealization& arr, const GaussianBeam& beam,
                     const DriveSchedule& schedule, double dt,
                     Method method = Method::split_step,
                     const Eigen::VectorXcd* initial = nullptr);

struct SubradiantMemoryResult {
    double e_s = 0.0;             // |P_M|^2-based stored fraction
    double e_r = 0.0;             // emitted target energy / stored excitation
    double hold_decay_rate = 0.0; // measured M-mode intensity decay in the hold
    double output_overlap = 0.0;  // |<emitted shape | h0*(T-t)>|^2, reported only
    double stored_excitation_total = 0.0;  // sum |sigma|^2 at the end of storage
    Eigen::VectorXcd state_after_storage;
    Trajectory trajectory;
};

// Three-phase protocol: storage (beam pulse h0 + checkerboard V_pulse), hold
// (V = 0), retrieval (time-reversed V_pulse).  Requires a < lambda/sqrt(2).
SubradiantMemoryResult subradiant_memory_run(const ArrayRealization& arr,
                                             const GaussianBeam& beam,
                                             const PulseShape& h0,
                                             const PulseShape& V_pulse, double hold,
                                             double dt, double delta_p);

// Effective 1D-model parameters of the subradiant-memory mapping.
struct SubradiantMapping {
    model1d::InterfaceParams params;  // Gamma = eta Gamma_0, gamma_loss, Delta = Delta_0
    double delta_M = 0.0;             // M-mode collective shift
    double eta = 0.0;
    double gamma_0 = 0.0;
    double delta_0 = 0.0;
};

// Throws std::range_error when a >= lambda/sqrt(2) (the M point radiates).
SubradiantMapping mapping_params_subradiant(const ArrayRealization& arr,
                                            const GaussianBeam& beam);

}  // namespace atomarray::dynamics
