#include "atomarray/model1d.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"

using namespace atomarray::model1d;

namespace {
InterfaceParams params(double gamma, double loss, double shift = 0.0) {
    InterfaceParams p;
    p.gamma_target = gamma;
    p.gamma_loss = loss;
    p.collective_shift = shift;
    return p;
}
}  // namespace

TEST_CASE("cooperativity is the branching ratio") {
    CHECK(cooperativity(params(1.0, 1.0)) == doctest::Approx(1.0));
    CHECK(cooperativity(params(3.0, 1.0)) == doctest::Approx(3.0));
    // 2D-array scale: Gamma_0 at a = 0.6 against a finite-size loss rate.
    CHECK(cooperativity(params(0.663, 3.57e-4)) == doctest::Approx(1857.14).epsilon(1e-3));
    CHECK_THROWS_AS(cooperativity(params(1.0, 0.0)), std::domain_error);
}

TEST_CASE("resonant reflectivity r0 = C/(C+1)") {
    CHECK(resonant_reflectivity(0.0) == doctest::Approx(0.0));
    CHECK(resonant_reflectivity(1.0) == doctest::Approx(0.5));
    CHECK(resonant_reflectivity(3.0) == doctest::Approx(0.75));
    // monotone increasing, saturates at 1
    double prev = -1.0;
    for (double c : {0.0, 0.5, 2.0, 10.0, 1e4}) {
        const double r = resonant_reflectivity(c);
        CHECK(r > prev);
        prev = r;
    }
    CHECK(resonant_reflectivity(1e12) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("reflection amplitude") {
    CHECK(std::abs(reflection_amplitude(params(1.0, 0.0), 0.0) - std::complex<double>(-1.0, 0.0)) <
          1e-14);
    CHECK(std::abs(reflection_amplitude(params(1.0, 0.0), 0.5)) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(reflection_amplitude(params(1.0, 1.0), 0.0).real() == doctest::Approx(-0.5));
    CHECK(reflection_amplitude(params(1.0, 1.0), 0.0).imag() == doctest::Approx(0.0));
}

TEST_CASE("radiated fraction converges to Gamma/(Gamma+gamma_loss)") {
    CHECK(radiated_fraction(params(1.0, 0.0), 30.0, 0.01) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(radiated_fraction(params(1.0, 1.0), 30.0, 0.01) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(radiated_fraction(params(3.0, 1.0), 20.0, 0.01) == doctest::Approx(0.75).epsilon(1e-6));
    CHECK_THROWS_AS(radiated_fraction(params(1.0, 0.0), 30.0, 0.2), std::invalid_argument);
}

TEST_CASE("absorbed fraction") {
    CHECK(absorbed_fraction(params(1.0, 1.0), 0.0) == doctest::Approx(0.5));
    CHECK(absorbed_fraction(params(1.0, 0.0), 0.5) == doctest::Approx(0.5));
    CHECK(absorbed_fraction(params(1e9, 1.0), 0.0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("g2(0) formula and monotonicity") {
    CHECK(g2_zero(1.0) == doctest::Approx(0.0));
    CHECK(g2_zero(0.0) == doctest::Approx(1.0));
    CHECK(g2_zero(0.75) == doctest::Approx(0.19140625).epsilon(1e-10));
    double prev = 2.0;
    for (int i = 0; i <= 100; ++i) {
        const double g = g2_zero(i / 100.0);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("two-photon width and shift") {
    InterfaceParams p = params(1.0, 1.0, 0.7);
    p.control_amplitude = 1.0;
    const auto on_res = two_photon_params(p, 0.7);
    CHECK(on_res.delta_s == doctest::Approx(0.0));
    CHECK(on_res.gamma_s == doctest::Approx(2.0));  // Gamma+gamma_loss = 2, |Omega| = 1

    p.control_amplitude = 0.0;
    const auto off = two_photon_params(p, 0.3);
    CHECK(off.gamma_s == doctest::Approx(0.0));
    CHECK(off.delta_s == doctest::Approx(0.0));
}

TEST_CASE("identity chain: radiated = absorbed = r0") {
    for (double loss : {0.2, 1.0, 3.0}) {
        const InterfaceParams p = params(1.3, loss, 0.4);
        const double r0 = resonant_reflectivity(cooperativity(p));
        CHECK(radiated_fraction(p, 60.0 / p.total_linewidth(), 0.002) ==
              doctest::Approx(r0).epsilon(1e-6));
        CHECK(absorbed_fraction(p, p.collective_shift) == doctest::Approx(r0).epsilon(1e-12));
        // |r| is maximized at delta_p = Delta with height r0
        CHECK(std::abs(reflection_amplitude(p, p.collective_shift)) ==
              doctest::Approx(r0).epsilon(1e-12));
        CHECK(std::abs(reflection_amplitude(p, p.collective_shift + 0.3)) < r0);
        CHECK(std::abs(reflection_amplitude(p, p.collective_shift - 0.2)) < r0);
    }
}

TEST_CASE("two-sided energy split for gamma_loss = 0") {
    const InterfaceParams p = params(0.8, 0.0, -0.3);
    for (int i = 0; i <= 120; ++i) {
        const double dp = -6.0 + i * 0.1;
        const auto r = reflection_amplitude(p, dp);
        const auto t = 1.0 + r;
        CHECK(std::norm(r) + std::norm(t) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
