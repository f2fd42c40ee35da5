#include "atomarray/dynamics.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "atomarray/greens.hpp"
#include "doctest.h"

using namespace atomarray;
using namespace atomarray::dynamics;
using geometry::ArrayRealization;
using geometry::GaussianBeam;
using greens::LatticeParams;
using Cd = std::complex<double>;

namespace {

LatticeParams lattice(double a) {
    LatticeParams lat;
    lat.a = a;
    return lat;
}

GaussianBeam beam_of(double w) {
    GaussianBeam b;
    b.waist = w;
    return b;
}

}  // namespace

TEST_CASE("zero drive and zero state stay zero") {
    const ArrayRealization arr = geometry::build_2d(lattice(0.6), 4);
    DriveSchedule schedule;
    schedule.duration = 5.0;
    const Trajectory traj = integrate(arr, beam_of(2.0), schedule, 0.05);
    for (const auto& p : traj.P0) CHECK(std::abs(p) == doctest::Approx(0.0));
    for (double e : traj.total_excitation) CHECK(e == doctest::Approx(0.0));
}

TEST_CASE("dynamics are linear in the input pulse") {
    const ArrayRealization arr = geometry::build_2d(lattice(0.6), 5);
    DriveSchedule schedule;
    schedule.duration = 8.0;
    schedule.input = PulseShape::rising_exponential(8.0, 1.0, 401);
    const Trajectory once = integrate(arr, beam_of(2.0), schedule, 0.02);
    for (auto& v : schedule.input.values) v *= 2.0;
    const Trajectory twice = integrate(arr, beam_of(2.0), schedule, 0.02);
    REQUIRE(once.t.size() == twice.t.size());
    for (size_t i = 0; i < once.t.size(); ++i) {
        CHECK(std::abs(twice.P0[i] - 2.0 * once.P0[i]) < 1e-12);
        CHECK(std::abs(twice.PM[i] - 2.0 * once.PM[i]) < 1e-12);
    }
}

TEST_CASE("split-step and rk4 agree on a modulated run") {
    const ArrayRealization arr = geometry::build_2d(lattice(0.6), 5);
    const GaussianBeam beam = beam_of(2.0);
    DriveSchedule schedule;
    schedule.duration = 6.0;
    schedule.input = PulseShape::rising_exponential(6.0, 1.5, 601);
    schedule.checkerboard = PulseShape::constant(6.0, 0.4, 601);

    const CollectiveDynamics dyn(arr, beam, 0.1);
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(arr.size());
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(arr.size());
    dyn.advance(a, 0.0, 0.002, 3000, &schedule.input, &schedule.checkerboard,
                Method::split_step, nullptr, nullptr);
    dyn.advance(b, 0.0, 0.002, 3000, &schedule.input, &schedule.checkerboard, Method::rk4,
                nullptr, nullptr);
    CHECK((a - b).norm() / b.norm() < 1e-5);
}

TEST_CASE("constant drive relaxes to the steady state") {
    const ArrayRealization arr = geometry::build_2d(lattice(0.6), 6);
    const GaussianBeam beam = beam_of(2.0);
    const double delta_p = 0.2;

    // the dynamics drive is a sqrt(Gamma_0) u(r_n) h0; pick h0 = 1 and match
    // the steady solve with the same right-hand side
    const double rate = greens::collective_rate_2d(arr.lattice);
    const CollectiveDynamics dyn(arr, beam, delta_p);
    PulseShape flat = PulseShape::constant(200.0, 1.0, 2001);
    Eigen::VectorXcd sigma = Eigen::VectorXcd::Zero(arr.size());
    dyn.advance(sigma, 0.0, 0.05, 4000, &flat, nullptr, Method::split_step, nullptr, nullptr);

    const scattering::InteractionMatrix m = scattering::build_matrix(arr, delta_p);
    Eigen::VectorXcd drive(arr.size());
    for (int i = 0; i < arr.size(); ++i)
        drive(i) = arr.lattice.a * std::sqrt(rate) *
                   beam.amplitude(arr.positions[i].x(), arr.positions[i].y());
    const auto sol = scattering::solve_steady_state(m, drive);
    CHECK((sigma - sol.dipoles).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("free decay rates of the bright and M-point patterns") {
    const ArrayRealization arr = geometry::build_2d(lattice(0.6), 16);
    const GaussianBeam beam = beam_of(16 * 0.6 / 4.0);
    const CollectiveDynamics dyn(arr, beam, 0.0);
    const double rate = greens::collective_rate_2d(arr.lattice);

    // eigen-decomposition oracle: decay of the maximal-overlap modes
    const scattering::InteractionMatrix m = scattering::build_matrix(arr, 0.0);
    const scattering::EigenmodeSet modes = scattering::eigenmodes(m);
    const Eigen::VectorXd bright_ov = scattering::mode_overlaps(modes, dyn.beam_pattern());
    const Eigen::VectorXd dark_ov = scattering::mode_overlaps(modes, dyn.m_point_pattern());
    int bright = 0, dark = 0;
    for (int l = 1; l < arr.size(); ++l) {
        if (bright_ov(l) > bright_ov(bright)) bright = l;
        if (dark_ov(l) > dark_ov(dark)) dark = l;
    }

    // bright mode decays at about Gamma_0
    CHECK(modes.decay_rates[bright] == doctest::Approx(rate).epsilon(0.10));

    // impulsive excitation of the beam pattern decays at about the bright rate
    Eigen::VectorXcd sigma = dyn.beam_pattern();
    const double p0_start = std::norm(dyn.collective_P0(sigma));
    const double horizon = 0.5 / rate;
    dyn.free_evolve(sigma, horizon);
    const double bright_measured =
        -std::log(std::norm(dyn.collective_P0(sigma)) / p0_start) / horizon;
    CHECK(bright_measured == doctest::Approx(modes.decay_rates[bright]).epsilon(0.15));

    // an exact eigenvector decays at exactly its eigenvalue rate
    Eigen::VectorXcd dark_vec = modes.vectors.col(dark);
    const double dark_norm0 = dark_vec.squaredNorm();
    dyn.free_evolve(dark_vec, 10.0);
    const double dark_exact = -std::log(dark_vec.squaredNorm() / dark_norm0) / 10.0;
    CHECK(dark_exact == doctest::Approx(modes.decay_rates[dark]).epsilon(1e-6));

    // short-horizon M-packet decay is far below the bright rate
    Eigen::VectorXcd m_packet = dyn.m_point_pattern();
    const double pm_start = std::norm(dyn.collective_PM(m_packet));
    dyn.free_evolve(m_packet, 5.0);
    const double dark_measured =
        -std::log(std::norm(dyn.collective_PM(m_packet)) / pm_start) / 5.0;
    CHECK(dark_measured < 0.1 * modes.decay_rates[bright]);
}

TEST_CASE("excitation accounting during free decay") {
    const ArrayRealization arr = geometry::build_2d(lattice(0.6), 5);
    const int n = arr.size();
    const scattering::InteractionMatrix m = scattering::build_matrix(arr, 0.0);

    std::mt19937 rng(17);
    std::normal_distribution<double> g;
    Eigen::VectorXcd sigma(n);
    for (int i = 0; i < n; ++i) sigma(i) = Cd(g(rng), g(rng));
    sigma /= sigma.norm();
    const double initial = sigma.squaredNorm();

    // independent fixed-step integration of d sigma/dt = -M sigma with the
    // radiated-energy integrand 2 sum Re(M)_nm sigma_n* sigma_m
    const double dt = 5e-4;
    const long steps = 8000;
    double radiated = 0.0;
    auto loss_rate = [&](const Eigen::VectorXcd& s) {
        return 2.0 * s.dot(m.m.real().cast<Cd>() * s).real();
    };
    for (long k = 0; k < steps; ++k) {
        const double before = loss_rate(sigma);
        const Eigen::VectorXcd k1 = -(m.m * sigma);
        const Eigen::VectorXcd k2 = -(m.m * (sigma + 0.5 * dt * k1));
        const Eigen::VectorXcd k3 = -(m.m * (sigma + 0.5 * dt * k2));
        const Eigen::VectorXcd k4 = -(m.m * (sigma + dt * k3));
        sigma += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        radiated += 0.5 * dt * (before + loss_rate(sigma));
    }
    const double lost = initial - sigma.squaredNorm();
    CHECK(radiated == doctest::Approx(lost).epsilon(0.01));
}

TEST_CASE("subradiance deepens with array size") {
    double previous = 1e9;
    for (int n_side : {10, 16, 22}) {
        const ArrayRealization arr = geometry::build_2d(lattice(0.6), n_side);
        const GaussianBeam beam = beam_of(0.25 * 0.6 * n_side);
        const CollectiveDynamics dyn(arr, beam, 0.0);
        const scattering::InteractionMatrix m = scattering::build_matrix(arr, 0.0);
        const scattering::EigenmodeSet modes = scattering::eigenmodes(m);
        const Eigen::VectorXd ov = scattering::mode_overlaps(modes, dyn.m_point_pattern());
        int dark = 0;
        for (int l = 1; l < arr.size(); ++l)
            if (ov(l) > ov(dark)) dark = l;
        CHECK(modes.decay_rates[dark] < previous);
        previous = modes.decay_rates[dark];
    }
}

TEST_CASE("subradiant mapping parameters") {
    const GaussianBeam beam = beam_of(8 * 0.6);
    const ArrayRealization good = geometry::build_2d(lattice(0.6), 12);
    const SubradiantMapping map = mapping_params_subradiant(good, beam);
    CHECK(map.params.gamma_target ==
          doctest::Approx(map.eta * greens::collective_rate_2d(good.lattice)));
    CHECK(map.params.gamma_loss ==
          doctest::Approx((1.0 - map.eta) * greens::collective_rate_2d(good.lattice)));
    CHECK(std::isfinite(map.delta_M));
    CHECK(std::isfinite(map.delta_0));

    const ArrayRealization bad = geometry::build_2d(lattice(0.72), 12);
    CHECK_THROWS_AS(mapping_params_subradiant(bad, beam), std::range_error);
}
