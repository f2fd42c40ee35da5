#include "atomarray/model1d.hpp"

#include <cmath>
#include <stdexcept>

namespace atomarray::model1d {

void InterfaceParams::validate() const {
    if (!(gamma_target > 0.0) || !std::isfinite(gamma_target))
        throw std::invalid_argument("InterfaceParams: gamma_target must be positive and finite");
    if (gamma_loss < 0.0 || !std::isfinite(gamma_loss))
        throw std::invalid_argument("InterfaceParams: gamma_loss must be >= 0 and finite");
    if (!std::isfinite(collective_shift) || !std::isfinite(two_photon_detuning) ||
        !std::isfinite(std::abs(control_amplitude)))
        throw std::invalid_argument("InterfaceParams: non-finite entry");
}

double cooperativity(const InterfaceParams& p) {
    p.validate();
    if (p.gamma_loss <= 0.0)
        throw std::domain_error(
            "cooperativity: gamma_loss = 0; use resonant_reflectivity limit instead");
    return p.gamma_target / p.gamma_loss;
}

double resonant_reflectivity(double cooperativity) {
    if (cooperativity < 0.0 || !std::isfinite(cooperativity))
        throw std::invalid_argument("resonant_reflectivity: C must be >= 0 and finite");
    return cooperativity / (cooperativity + 1.0);
}

ComplexAmplitude reflection_amplitude(const InterfaceParams& p, double delta_p) {
    p.validate();
    const std::complex<double> denom(p.total_linewidth(),
                                     2.0 * (p.collective_shift - delta_p));
    return -p.gamma_target / denom;
}

double radiated_fraction(const InterfaceParams& p, double t_max, double dt) {
    p.validate();
    const double width = p.total_linewidth();
    if (dt <= 0.0 || t_max <= 0.0)
        throw std::invalid_argument("radiated_fraction: t_max and dt must be positive");
    if (dt > 0.1 / width)
        throw std::invalid_argument("radiated_fraction: dt exceeds 0.1/(Gamma+gamma_loss)");

    // |E(t)|^2 = Gamma exp(-(Gamma+gamma_loss) t), sampled on a uniform grid
    // and integrated with composite Simpson.
    auto integrate = [&](double horizon) {
        long n = static_cast<long>(std::ceil(horizon / dt));
        if (n % 2 == 1) ++n;
        const double h = horizon / static_cast<double>(n);
        auto f = [&](long i) { return p.gamma_target * std::exp(-width * h * i); };
        double sum = f(0) + f(n);
        for (long i = 1; i < n; i += 2) sum += 4.0 * f(i);
        for (long i = 2; i < n; i += 2) sum += 2.0 * f(i);
        return sum * h / 3.0;
    };

    const double once = integrate(t_max);
    const double twice = integrate(2.0 * t_max);
    if (std::abs(twice - once) > 1e-6 * std::max(1.0, std::abs(twice)) + 1e-9)
        throw std::runtime_error("radiated_fraction: not converged; increase t_max");
    return once;
}

double absorbed_fraction(const InterfaceParams& p, double delta_p) {
    p.validate();
    const double half_width = 0.5 * p.total_linewidth();
    const double detune = delta_p - p.collective_shift;
    return p.gamma_target * half_width /
           (2.0 * (half_width * half_width + detune * detune));
}

double g2_zero(double r0) {
    if (r0 < 0.0 || r0 > 1.0 || !std::isfinite(r0))
        throw std::invalid_argument("g2_zero: r0 must lie in [0, 1]");
    const double x = 1.0 - r0 * r0;
    return x * x;
}

TwoPhotonParams two_photon_params(const InterfaceParams& p, double delta_p) {
    p.validate();
    if (!(p.total_linewidth() > 0.0))
        throw std::invalid_argument("two_photon_params: Gamma + gamma_loss must be positive");
    const std::complex<double> denom(0.5 * p.total_linewidth(),
                                     p.collective_shift - delta_p);
    const std::complex<double> z = std::norm(p.control_amplitude) / denom;
    return TwoPhotonParams{2.0 * z.real(), z.imag()};
}

}  // namespace atomarray::model1d
