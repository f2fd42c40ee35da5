#include "atomarray/dynamics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "atomarray/greens.hpp"
#include "atomarray/memory.hpp"
#include "atomarray/units.hpp"

namespace atomarray::dynamics {

namespace {
using Cd = std::complex<double>;
constexpr Cd kI{0.0, 1.0};

// phi1(z) = (e^z - 1)/z, stable near zero.
Cd phi1(Cd z) {
    if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z / 6.0);
    return (std::exp(z) - 1.0) / z;
}
}  // namespace

CollectiveDynamics::CollectiveDynamics(const ArrayRealization& arr,
                                       const GaussianBeam& beam, double delta_p)
    : delta_p_(delta_p) {
    const int n = arr.size();
    if (arr.lattice_index.size() != static_cast<size_t>(n))
        throw std::invalid_argument("CollectiveDynamics: lattice indices required");

    const scattering::InteractionMatrix m0 = scattering::build_matrix(arr, delta_p);
    m0_ = m0.m;
    norm_bound_ = 0.0;
    for (int i = 0; i < n; ++i) norm_bound_ = std::max(norm_bound_, m0_.row(i).cwiseAbs().sum());

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m0_, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("CollectiveDynamics: eigendecomposition failed");
    evals_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
    inverse_ = vectors_.partialPivLu().inverse();

    rate_ = greens::collective_rate_2d(arr.lattice);
    eta_ = geometry::mode_overlap_eta(beam, arr.lattice.a * arr.n_side);
    collective_weight_ = arr.lattice.a / std::sqrt(eta_);

    checker_.resize(n);
    beam_weights_.resize(n);
    drive_dir_.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto& idx = arr.lattice_index[i];
        checker_(i) = ((idx.x() + idx.y()) % 2 == 0) ? 1.0 : -1.0;
        const auto& r = arr.positions[i];
        beam_weights_(i) = beam.amplitude(r.x(), r.y());
        drive_dir_(i) = arr.lattice.a * std::sqrt(rate_) * beam_weights_(i);
    }

    // Locate the stable spin of the subradiant protocol: the eigenmode with
    // maximal M-pattern overlap, bilinear-normalized.
    const Eigen::VectorXcd m_pattern = m_point_pattern();
    int best = -1;
    double best_ov = 0.0;
    for (int l = 0; l < n; ++l) {
        const Eigen::VectorXcd& v = vectors_.col(l);
        const Cd vnorm = v.cwiseProduct(v).sum();
        if (std::abs(vnorm) < 1e-12) continue;
        const double ov = std::norm(v.cwiseProduct(m_pattern).sum()) / std::abs(vnorm);
        if (ov > best_ov) {
            best_ov = ov;
            best = l;
        }
    }
    if (best >= 0) {
        m_mode_vector_ = vectors_.col(best);
        m_mode_vector_ /= std::sqrt(m_mode_vector_.cwiseProduct(m_mode_vector_).sum());
        m_mode_info_.decay = 2.0 * evals_(best).real();
        m_mode_info_.shift = evals_(best).imag() + delta_p_;
        m_mode_info_.overlap = best_ov;
    }
}

std::complex<double> CollectiveDynamics::m_mode_amplitude(
    const Eigen::VectorXcd& sigma) const {
    return m_mode_vector_.cwiseProduct(sigma).sum();
}

std::complex<double> CollectiveDynamics::collective_P0(const Eigen::VectorXcd& sigma) const {
    return collective_weight_ * beam_weights_.cast<Cd>().cwiseProduct(sigma).sum();
}

std::complex<double> CollectiveDynamics::collective_PM(const Eigen::VectorXcd& sigma) const {
    return collective_weight_ *
           (beam_weights_.cwiseProduct(checker_)).cast<Cd>().cwiseProduct(sigma).sum();
}

std::complex<double> CollectiveDynamics::output_amplitude(const Eigen::VectorXcd& sigma,
                                                          std::complex<double> input) const {
    return input + kI * std::sqrt(eta_ * rate_) * collective_P0(sigma);
}

Eigen::VectorXcd CollectiveDynamics::rhs(double t, const Eigen::VectorXcd& sigma,
                                         const PulseShape* input,
                                         const PulseShape* checkerboard) const {
    Eigen::VectorXcd d = -(m0_ * sigma);
    if (checkerboard) {
        const Cd v = checkerboard->at(t);
        d += kI * v * checker_.cast<Cd>().cwiseProduct(sigma);
    }
    if (input) d += kI * input->at(t) * drive_dir_;
    return d;
}

void CollectiveDynamics::advance(Eigen::VectorXcd& sigma, double t0, double dt,
                                 long steps, const PulseShape* input,
                                 const PulseShape* checkerboard, Method method,
                                 Trajectory* record, double* energy,
                                 int sample_every) const {
    if (method == Method::rk4 && dt > 0.02 / norm_bound_)
        throw std::invalid_argument("advance: dt exceeds 0.02/||M|| for the rk4 path");

    auto input_at = [&](double t) { return input ? input->at(t) : Cd{0.0, 0.0}; };
    auto record_sample = [&](double t) {
        if (!record) return;
        record->t.push_back(t);
        record->P0.push_back(collective_P0(sigma));
        record->PM.push_back(collective_PM(sigma));
        record->total_excitation.push_back(sigma.squaredNorm());
        record->emitted_target_energy.push_back(energy ? *energy : 0.0);
    };

    double flux_prev = std::norm(output_amplitude(sigma, input_at(t0)));
    if (record && record->t.empty()) record_sample(t0);

    // Scratch vectors sized once.
    Eigen::VectorXcd modal(sigma.size()), kick(sigma.size());

    for (long k = 0; k < steps; ++k) {
        const double t = t0 + k * dt;
        if (method == Method::split_step) {
            // Strang: half checkerboard kick, drift + drive in the kernel
            // eigenbasis (exact for the kernel), half kick.
            if (checkerboard) {
                const Cd v1 = checkerboard->at(t + 0.25 * dt);
                for (int i = 0; i < sigma.size(); ++i)
                    sigma(i) *= std::exp(kI * v1 * checker_(i) * (0.5 * dt));
            }
            modal.noalias() = inverse_ * sigma;
            const Cd h_mid = input_at(t + 0.5 * dt);
            if (input && h_mid != Cd{0.0, 0.0}) {
                kick.noalias() = inverse_ * drive_dir_;
                for (int l = 0; l < modal.size(); ++l) {
                    const Cd z = -evals_(l) * dt;
                    modal(l) = std::exp(z) * modal(l) +
                               dt * phi1(z) * (kI * h_mid * kick(l));
                }
            } else {
                for (int l = 0; l < modal.size(); ++l)
                    modal(l) *= std::exp(-evals_(l) * dt);
            }
            sigma.noalias() = vectors_ * modal;
            if (checkerboard) {
                const Cd v2 = checkerboard->at(t + 0.75 * dt);
                for (int i = 0; i < sigma.size(); ++i)
                    sigma(i) *= std::exp(kI * v2 * checker_(i) * (0.5 * dt));
            }
        } else {
            const Eigen::VectorXcd k1 = rhs(t, sigma, input, checkerboard);
            const Eigen::VectorXcd k2 =
                rhs(t + 0.5 * dt, sigma + 0.5 * dt * k1, input, checkerboard);
            const Eigen::VectorXcd k3 =
                rhs(t + 0.5 * dt, sigma + 0.5 * dt * k2, input, checkerboard);
            const Eigen::VectorXcd k4 = rhs(t + dt, sigma + dt * k3, input, checkerboard);
            sigma += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }

        const double flux = std::norm(output_amplitude(sigma, input_at(t + dt)));
        if (energy) *energy += 0.5 * dt * (flux_prev + flux);
        flux_prev = flux;
        if (record && ((k + 1) % sample_every == 0 || k + 1 == steps))
            record_sample(t + dt);
    }
}

void CollectiveDynamics::free_evolve(Eigen::VectorXcd& sigma, double duration) const {
    Eigen::VectorXcd modal = inverse_ * sigma;
    for (int l = 0; l < modal.size(); ++l) modal(l) *= std::exp(-evals_(l) * duration);
    sigma.noalias() = vectors_ * modal;
}

Eigen::VectorXcd CollectiveDynamics::beam_pattern() const {
    Eigen::VectorXcd v = beam_weights_.cast<Cd>();
    return v / std::sqrt(v.cwiseProduct(v).sum());
}

Eigen::VectorXcd CollectiveDynamics::m_point_pattern() const {
    Eigen::VectorXcd v = beam_weights_.cwiseProduct(checker_).cast<Cd>();
    return v / std::sqrt(v.cwiseProduct(v).sum());
}

CollectiveDynamics::ModeInfo CollectiveDynamics::dominant_mode(
    const Eigen::VectorXcd& pattern) const {
    const Cd norm = pattern.cwiseProduct(pattern).sum();
    const Eigen::VectorXcd t = pattern / std::sqrt(norm);
    ModeInfo best;
    for (int l = 0; l < evals_.size(); ++l) {
        Eigen::VectorXcd v = vectors_.col(l);
        const Cd vnorm = v.cwiseProduct(v).sum();
        if (std::abs(vnorm) < 1e-12) continue;
        v /= std::sqrt(vnorm);
        const double ov = std::norm(v.cwiseProduct(t).sum());
        if (ov > best.overlap) {
            best.overlap = ov;
            best.decay = 2.0 * evals_(l).real();
            best.shift = evals_(l).imag() + delta_p_;
        }
    }
    return best;
}

namespace {

Trajectory run_once(const CollectiveDynamics& dyn, const DriveSchedule& schedule,
                    double dt, Method method, const Eigen::VectorXcd* initial,
                    Eigen::VectorXcd* final_state, double* final_energy) {
    Eigen::VectorXcd sigma =
        initial ? *initial : Eigen::VectorXcd::Zero(dyn.size()).eval();
    const long steps = std::max(1L, static_cast<long>(std::ceil(schedule.duration / dt)));
    const double h = schedule.duration / static_cast<double>(steps);
    Trajectory traj;
    double energy = 0.0;
    const int sample_every = std::max(1L, steps / 2000);
    dyn.advance(sigma, 0.0, h, steps,
                schedule.input.empty() ? nullptr : &schedule.input,
                schedule.checkerboard.empty() ? nullptr : &schedule.checkerboard, method,
                &traj, &energy, static_cast<int>(sample_every));
    if (final_state) *final_state = sigma;
    if (final_energy) *final_energy = energy;
    return traj;
}

}  // namespace

Trajectory integrate(const ArrayRealization& arr, const GaussianBeam& beam,
                     const DriveSchedule& schedule, double dt, Method method,
                     const Eigen::VectorXcd* initial) {
    if (!(schedule.duration > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("integrate: need positive duration and dt");
    const CollectiveDynamics dyn(arr, beam, schedule.delta_p);

    Eigen::VectorXcd final_coarse, final_fine;
    Trajectory traj = run_once(dyn, schedule, dt, method, initial, &final_coarse, nullptr);
    run_once(dyn, schedule, 0.5 * dt, method, initial, &final_fine, nullptr);
    const double p0_diff =
        std::abs(dyn.collective_P0(final_coarse) - dyn.collective_P0(final_fine));
    const double pm_diff =
        std::abs(dyn.collective_PM(final_coarse) - dyn.collective_PM(final_fine));
    if (std::max(p0_diff, pm_diff) > 1e-4)
        throw std::runtime_error("integrate: step-halving check failed; reduce dt");
    return traj;
}

SubradiantMemoryResult subradiant_memory_run(const ArrayRealization& arr,
                                             const GaussianBeam& beam,
                                             const PulseShape& h0,
                                             const PulseShape& V_pulse, double hold,
                                             double dt, double delta_p) {
    if (!(arr.lattice.a < 1.0 / std::numbers::sqrt2))
        throw std::range_error("subradiant_memory_run: requires a < lambda/sqrt(2)");
    const double input_norm = h0.norm2();
    if (!(input_norm > 0.0))
        throw std::invalid_argument("subradiant_memory_run: empty input pulse");

    const CollectiveDynamics dyn(arr, beam, delta_p);

    auto run_protocol = [&](double step, Trajectory* record, double* out_es,
                            double* out_er, double* out_hold_rate,
                            std::vector<Cd>* out_shape, std::vector<double>* out_times,
                            Eigen::VectorXcd* out_stored) {
        Eigen::VectorXcd sigma = Eigen::VectorXcd::Zero(dyn.size());

        // Storage.
        const double T = h0.end();
        long steps = std::max(1L, static_cast<long>(std::ceil((T - h0.t0) / step)));
        double h = (T - h0.t0) / steps;
        double energy = 0.0;
        dyn.advance(sigma, h0.t0, h, steps, &h0, &V_pulse, Method::split_step, record,
                    &energy, std::max(1L, steps / 600));
        *out_es = std::norm(dyn.collective_PM(sigma)) / input_norm;
        if (out_stored) *out_stored = sigma;

        // Hold: dark evolution.  The decay of the stable spin is read off the
        // dominant M eigenmode's projection; the beam-weighted P_M also
        // carries interference from satellite envelope modes.
        const double spin_before_hold = std::norm(dyn.m_mode_amplitude(sigma));
        if (hold > 0.0) {
            const int hold_samples = 32;
            const double hop = hold / hold_samples;
            for (int i = 0; i < hold_samples; ++i) {
                dyn.free_evolve(sigma, hop);
                if (record) {
                    record->t.push_back(T + (i + 1) * hop);
                    record->P0.push_back(dyn.collective_P0(sigma));
                    record->PM.push_back(dyn.collective_PM(sigma));
                    record->total_excitation.push_back(sigma.squaredNorm());
                    record->emitted_target_energy.push_back(energy);
                }
            }
        }
        const double spin_after_hold = std::norm(dyn.m_mode_amplitude(sigma));
        *out_hold_rate =
            hold > 0.0 ? -std::log(spin_after_hold / spin_before_hold) / hold : 0.0;

        // Retrieval with the conjugate time-reversed control.
        PulseShape v_rev = memory::time_reverse_control(V_pulse);
        v_rev.t0 = T + hold;
        const double stored = std::norm(dyn.collective_PM(sigma));
        const double energy_before = energy;
        steps = std::max(1L, static_cast<long>(std::ceil(v_rev.duration / step)));
        h = v_rev.duration / steps;
        std::vector<Cd> shape;
        std::vector<double> shape_t;
        if (out_shape) {
            // Record the emitted amplitude densely for the shape overlap.
            Trajectory retr;
            Eigen::VectorXcd s2 = sigma;
            double e2 = energy;
            dyn.advance(s2, v_rev.t0, h, steps, nullptr, &v_rev, Method::split_step,
                        &retr, &e2, 1);
            for (size_t i = 0; i < retr.t.size(); ++i) {
                shape_t.push_back(retr.t[i]);
                shape.push_back(kI * std::sqrt(dyn.eta() * dyn.collective_rate()) *
                                retr.P0[i]);
            }
        }
        dyn.advance(sigma, v_rev.t0, h, steps, nullptr, &v_rev, Method::split_step,
                    record, &energy, std::max(1L, steps / 600));
        *out_er = stored > 0.0 ? (energy - energy_before) / stored : 0.0;
        if (out_shape) {
            *out_shape = std::move(shape);
            *out_times = std::move(shape_t);
        }
    };

    SubradiantMemoryResult result;
    double es_f = 0.0, er_f = 0.0, rate_f = 0.0;
    std::vector<Cd> shape;
    std::vector<double> shape_t;
    run_protocol(dt, &result.trajectory, &result.e_s, &result.e_r,
                 &result.hold_decay_rate, &shape, &shape_t, &result.state_after_storage);
    result.stored_excitation_total = result.state_after_storage.squaredNorm();
    run_protocol(0.5 * dt, nullptr, &es_f, &er_f, &rate_f, nullptr, nullptr, nullptr);
    if (std::abs(es_f - result.e_s) > 1e-4 || std::abs(er_f - result.e_r) > 1e-4)
        throw std::runtime_error("subradiant_memory_run: step-halving check failed");
    result.e_s = es_f;
    result.e_r = er_f;

    // Overlap of the emitted shape with the time-reversed input, reported
    // for diagnostics (not asserted: the retrieval phase convention at
    // delta_2 != 0 is experimental).
    if (!shape.empty()) {
        const double T = h0.end();
        Cd overlap{0.0, 0.0};
        double n_out = 0.0, n_ref = 0.0;
        for (size_t i = 0; i < shape.size(); ++i) {
            const double tau = shape_t[i] - shape_t.front();
            const Cd ref = std::conj(h0.at(T - tau));
            overlap += shape[i] * std::conj(ref);
            n_out += std::norm(shape[i]);
            n_ref += std::norm(ref);
        }
        if (n_out > 0.0 && n_ref > 0.0)
            result.output_overlap = std::norm(overlap) / (n_out * n_ref);
    }
    return result;
}

SubradiantMapping mapping_params_subradiant(const ArrayRealization& arr,
                                            const GaussianBeam& beam) {
    if (!(arr.lattice.a < 1.0 / std::numbers::sqrt2))
        throw std::range_error("mapping_params_subradiant: a >= lambda/sqrt(2); M mode radiates");
    if (arr.n_layers != 1)
        throw std::invalid_argument("mapping_params_subradiant: 2D arrays only");

    SubradiantMapping map;
    map.gamma_0 = greens::collective_rate_2d(arr.lattice);
    map.eta = geometry::mode_overlap_eta(beam, arr.lattice.a * arr.n_side);
    map.delta_0 = greens::collective_shift_2d(arr.lattice, 60.0);

    double gs = 0.0;
    for (double g : arr.noncollective_rates) gs += g;
    gs = arr.size() > 0 ? gs / arr.size() : 0.0;

    map.params.gamma_target = map.eta * map.gamma_0;
    map.params.gamma_loss = (1.0 - map.eta) * map.gamma_0 + gs;
    map.params.collective_shift = map.delta_0;

    // Finite-lattice Fourier transform of the kernel at k_M, evaluated on the
    // central atom's row.
    int center = 0;
    double best = 1e300;
    for (int i = 0; i < arr.size(); ++i) {
        const double d2 = arr.positions[i].squaredNorm();
        if (d2 < best) {
            best = d2;
            center = i;
        }
    }
    const auto sign = [&](int i) {
        const auto& idx = arr.lattice_index[i];
        return ((idx.x() + idx.y()) % 2 == 0) ? 1.0 : -1.0;
    };
    Cd row_sum{0.0, 0.0};
    for (int m = 0; m < arr.size(); ++m) {
        if (m == center) continue;
        row_sum += sign(center) * sign(m) *
                   greens::kernel_entry(arr.positions[center] - arr.positions[m],
                                        arr.lattice.orientation);
    }
    map.delta_M = row_sum.imag();
    return map;
}

}  // namespace atomarray::dynamics
