#include "atomarray/memory.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace atomarray::memory {

namespace {

using Cd = std::complex<double>;

struct State {
    Cd P;
    Cd S;
};

// Classical means of the three-level model:
//   P' = [i(delta_p - Delta) - (Gamma+gamma_loss)/2] P + i Omega(t) S + i sqrt(Gamma) E0(t)
//   S' = i delta_2 S + i Omega*(t) P
struct Rhs {
    const InterfaceParams& p;
    double delta_p;
    const PulseShape* input;    // may be null (vacuum)
    const PulseShape* control;  // may be null (Omega = 0)

    State operator()(double t, const State& s) const {
        const Cd omega = control ? control->at(t) : Cd{0.0, 0.0};
        const Cd e0 = input ? input->at(t) : Cd{0.0, 0.0};
        const Cd i(0.0, 1.0);
        State d;
        d.P = (i * (delta_p - p.collective_shift) - 0.5 * p.total_linewidth()) * s.P +
              i * omega * s.S + i * std::sqrt(p.gamma_target) * e0;
        d.S = i * p.two_photon_detuning * s.S + i * std::conj(omega) * s.P;
        return d;
    }
};

State axpy(const State& a, double h, const State& b) {
    return State{a.P + h * b.P, a.S + h * b.S};
}

// Fixed-step RK4 from t0 to t1; trapezoidal accumulation of Gamma |P|^2 for
// the emitted target-mode energy.  Trajectory recorded at every step.
struct RunResult {
    std::vector<double> t;
    std::vector<Cd> P, S;
    double emitted_energy = 0.0;
};

RunResult integrate(const Rhs& rhs, State s, double t0, double t1, double dt) {
    const long n = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt)));
    const double h = (t1 - t0) / static_cast<double>(n);
    RunResult out;
    out.t.reserve(n + 1);
    out.P.reserve(n + 1);
    out.S.reserve(n + 1);
    double energy = 0.0;
    double t = t0;
    out.t.push_back(t);
    out.P.push_back(s.P);
    out.S.push_back(s.S);
    for (long k = 0; k < n; ++k) {
        const double flux0 = rhs.p.gamma_target * std::norm(s.P);
        const State k1 = rhs(t, s);
        const State k2 = rhs(t + 0.5 * h, axpy(s, 0.5 * h, k1));
        const State k3 = rhs(t + 0.5 * h, axpy(s, 0.5 * h, k2));
        const State k4 = rhs(t + h, axpy(s, h, k3));
        s.P += (h / 6.0) * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
        s.S += (h / 6.0) * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S);
        t = t0 + (k + 1) * h;
        energy += 0.5 * h * (flux0 + rhs.p.gamma_target * std::norm(s.P));
        out.t.push_back(t);
        out.P.push_back(s.P);
        out.S.push_back(s.S);
    }
    out.emitted_energy = energy;
    return out;
}

void check_step(const InterfaceParams& p, const PulseShape* control, double dt) {
    double scale = p.total_linewidth();
    if (control) scale = std::max(scale, control->peak_amplitude());
    if (dt > 0.05 / scale)
        throw std::invalid_argument(
            "memory: dt exceeds 0.05 / max(Gamma+gamma_loss, |Omega|_max)");
}

}  // namespace

PulseShape optimal_storage_control(const PulseShape& h0, const InterfaceParams& p,
                                   double delta_p, double clamp_factor) {
    p.validate();
    h0.check_normalized();
    const double width = p.total_linewidth();
    if (!(width > 0.0))
        throw std::invalid_argument("optimal_storage_control: Gamma + gamma_loss must be > 0");
    const int n = h0.samples();
    const double dt = h0.dt();
    const double T_end = h0.end();

    // Cumulative integral c(t) = int_0^t |h0|^2.
    std::vector<double> cum(n, 0.0);
    for (int i = 1; i < n; ++i)
        cum[i] = cum[i - 1] + 0.5 * dt * (std::norm(h0.values[i - 1]) + std::norm(h0.values[i]));

    // Floor the denominator at its value near the start of the pulse; the
    // closed form diverges where c(t) vanishes but those early times carry
    // negligible weight in e_s.
    const double t_floor = h0.t0 + 1e-3 * h0.duration;
    double c_floor = 0.0;
    for (int i = 0; i < n; ++i)
        if (h0.time_at(i) >= t_floor && cum[i] > 0.0) {
            c_floor = cum[i];
            break;
        }
    if (c_floor <= 0.0) c_floor = cum[n - 1] * 1e-12;

    const double detune = p.collective_shift - delta_p;
    const Cd prefactor = Cd(-0.5 * width, -detune) / std::sqrt(width);
    const Cd exponent(1.0, 2.0 * detune / width);
    const double clamp = clamp_factor * width;

    bool clamped = false;
    PulseShape omega;
    omega.t0 = h0.t0;
    omega.duration = h0.duration;
    omega.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double c = std::max(cum[i], c_floor);
        // (sqrt(c))^(1 + 2i(Delta-delta_p)/width) = exp(exponent * ln(c)/2)
        const Cd denom = std::exp(exponent * (0.5 * std::log(c)));
        const double phase = p.two_photon_detuning * (T_end - h0.time_at(i));
        Cd value = prefactor * h0.values[i] / denom * std::polar(1.0, phase);
        if (std::abs(value) > clamp) {
            value *= clamp / std::abs(value);
            clamped = true;
        }
        omega.values[i] = value;
    }
    if (clamped && std::abs(h0.values.front()) > 0.0)
        std::cerr << "optimal_storage_control: singular start clamped "
                     "(h0(0) != 0 while the cumulative integral vanishes)\n";
    return omega;
}

MemoryRun simulate_storage(const PulseShape& h0, const PulseShape& control,
                           const InterfaceParams& p, double delta_p, double dt) {
    p.validate();
    check_step(p, &control, dt);
    const double n2 = h0.norm2();
    if (!(n2 > 0.0)) throw std::invalid_argument("simulate_storage: empty input pulse");

    const Rhs rhs{p, delta_p, &h0, &control};
    auto run = [&](double step) {
        return integrate(rhs, State{{0.0, 0.0}, {0.0, 0.0}}, h0.t0, h0.end(), step);
    };
    const RunResult coarse = run(dt);
    const RunResult fine = run(0.5 * dt);
    const double es_coarse = std::norm(coarse.S.back()) / n2;
    const double es_fine = std::norm(fine.S.back()) / n2;
    if (std::abs(es_fine - es_coarse) > 1e-4)
        throw std::runtime_error("simulate_storage: step-halving check failed; reduce dt");

    MemoryRun out;
    out.t = fine.t;
    out.P = fine.P;
    out.S = fine.S;
    out.input = h0;
    out.control = control;
    out.stored_excitation = std::norm(fine.S.back());
    out.efficiency = es_fine;
    return out;
}

MemoryRun simulate_retrieval(std::complex<double> S0, const PulseShape& control,
                             const InterfaceParams& p, double delta_p, double dt) {
    p.validate();
    check_step(p, &control, dt);
    if (!(std::norm(S0) > 0.0))
        throw std::invalid_argument("simulate_retrieval: |S0|^2 must be positive");
    if (control.empty()) throw std::invalid_argument("simulate_retrieval: empty control");

    const Rhs rhs{p, delta_p, nullptr, &control};
    auto run = [&](double step) {
        return integrate(rhs, State{{0.0, 0.0}, S0}, control.t0, control.end(), step);
    };
    const RunResult coarse = run(dt);
    const RunResult fine = run(0.5 * dt);
    const double er_coarse = coarse.emitted_energy / std::norm(S0);
    const double er_fine = fine.emitted_energy / std::norm(S0);
    if (std::abs(er_fine - er_coarse) > 1e-4)
        throw std::runtime_error("simulate_retrieval: step-halving check failed; reduce dt");

    MemoryRun out;
    out.t = fine.t;
    out.P = fine.P;
    out.S = fine.S;
    out.control = control;
    out.stored_excitation = std::norm(fine.S.back());
    out.efficiency = er_fine;
    return out;
}

PulseShape time_reverse_control(const PulseShape& control) {
    PulseShape rev = control;
    std::reverse(rev.values.begin(), rev.values.end());
    for (auto& v : rev.values) v = std::conj(v);
    return rev;
}

double integrated_two_photon_width(const PulseShape& control, const InterfaceParams& p,
                                   double delta_p) {
    if (control.samples() < 2) return 0.0;
    const double dt = control.dt();
    double total = 0.0;
    for (int i = 0; i < control.samples(); ++i) {
        InterfaceParams q = p;
        q.control_amplitude = control.values[i];
        const double w = (i == 0 || i == control.samples() - 1) ? 0.5 : 1.0;
        total += w * model1d::two_photon_params(q, delta_p).gamma_s;
    }
    return total * dt;
}

}  // namespace atomarray::memory
