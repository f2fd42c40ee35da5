#include "atomarray/greens.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "atomarray/units.hpp"

namespace atomarray::greens {

namespace {
using Cd = std::complex<double>;
constexpr Cd kI{0.0, 1.0};
}  // namespace

DipoleOrientation::DipoleOrientation(const Eigen::Vector3cd& e) : e_d(e) {
    const double n = e_d.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("DipoleOrientation: zero or non-finite vector");
    e_d /= n;
}

DipoleOrientation DipoleOrientation::y() {
    DipoleOrientation d;
    d.e_d = Eigen::Vector3cd(0.0, 1.0, 0.0);
    return d;
}

std::complex<double> projected_green(const Eigen::Vector3d& r,
                                     const DipoleOrientation& orientation) {
    const double dist = r.norm();
    if (!(dist > 0.0))
        throw std::domain_error("projected_green: r = 0 (self-interaction handled separately)");
    const double x = kWavenumber * dist;
    const Cd inv_x = 1.0 / Cd(x, 0.0);
    const Cd c1 = 1.0 + kI * inv_x - inv_x * inv_x;
    const Cd c2 = -(1.0 + 3.0 * kI * inv_x - 3.0 * inv_x * inv_x);
    const Eigen::Vector3d rhat = r / dist;
    const Cd proj = orientation.e_d.conjugate().dot(rhat.cast<Cd>());
    const double p = std::norm(proj);
    return std::exp(kI * x) / (4.0 * std::numbers::pi * dist) * (c1 + c2 * p);
}

std::complex<double> kernel_entry(const Eigen::Vector3d& r,
                                  const DipoleOrientation& orientation) {
    // D(r) = -i (3 pi gamma / k_p) g(r); the prefactor is 3/2 in gamma = 1,
    // lambda = 1 units, and gives Re D -> gamma/2 in the on-site limit.
    return -1.5 * kI * projected_green(r, orientation);
}

double collective_rate_2d(const LatticeParams& lat) {
    if (!(lat.a > 0.0)) throw std::invalid_argument("collective_rate_2d: a must be positive");
    return 3.0 / (4.0 * std::numbers::pi * lat.a * lat.a);
}

std::complex<double> lattice_sum_onsite(const LatticeParams& lat, double cutoff_radius) {
    if (!(lat.a > 0.0)) throw std::invalid_argument("lattice_sum_onsite: a must be positive");
    const double sigma = cutoff_radius / 4.0;
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    const int nmax = static_cast<int>(std::floor(cutoff_radius / lat.a));
    const double r2max = cutoff_radius * cutoff_radius;
    Cd sum{0.5 * kGamma, 0.0};  // regularized self-term
    for (int nx = -nmax; nx <= nmax; ++nx) {
        for (int ny = -nmax; ny <= nmax; ++ny) {
            if (nx == 0 && ny == 0) continue;
            const Eigen::Vector3d r(lat.a * nx, lat.a * ny, 0.0);
            const double r2 = r.squaredNorm();
            if (r2 > r2max) continue;
            sum += kernel_entry(r, lat.orientation) * std::exp(-r2 * inv_two_sigma2);
        }
    }
    return sum;
}

double collective_shift_2d(const LatticeParams& lat, double cutoff_radius,
                           double tolerance, double* error_estimate) {
    if (cutoff_radius < 50.0)
        throw std::invalid_argument("collective_shift_2d: cutoff_radius must be >= 50 lambda");
    const double once = lattice_sum_onsite(lat, cutoff_radius).imag();
    const double twice = lattice_sum_onsite(lat, 2.0 * cutoff_radius).imag();
    const double err = std::abs(twice - once);
    if (error_estimate) *error_estimate = err;
    if (err > tolerance)
        throw std::runtime_error("collective_shift_2d: lattice sum not converged at this cutoff");
    return twice;
}

namespace {

// In-plane overlap |(m_x, m_y) . e_d|^2.
double inplane_projection(const DipoleOrientation& o, int mx, int my) {
    const Cd dot = static_cast<double>(mx) * std::conj(o.e_d[0]) +
                   static_cast<double>(my) * std::conj(o.e_d[1]);
    return std::norm(dot);
}

}  // namespace

double diffraction_loss(const LatticeParams& lat) {
    if (!(lat.a > 0.0)) throw std::invalid_argument("diffraction_loss: a must be positive");
    const double a2 = lat.a * lat.a;
    const double inv_a2 = 1.0 / a2;
    double sum = 0.0;
    const int mmax = static_cast<int>(std::ceil(lat.a));
    for (int mx = -mmax; mx <= mmax; ++mx) {
        for (int my = -mmax; my <= mmax; ++my) {
            if (mx == 0 && my == 0) continue;
            const double m2 = static_cast<double>(mx * mx + my * my);
            if (m2 >= a2) continue;
            const double arg = 1.0 - inv_a2 * m2;
            if (arg < 1e-9)
                std::cerr << "diffraction_loss: order (" << mx << "," << my
                          << ") is near grazing; term is near singular\n";
            sum += (1.0 - inv_a2 * inplane_projection(lat.orientation, mx, my)) /
                   std::sqrt(arg);
        }
    }
    return collective_rate_2d(lat) * sum;
}

std::complex<double> interlayer_kernel(const LatticeParams& lat, int dn,
                                       double* truncation_estimate) {
    if (dn == 0) throw std::invalid_argument("interlayer_kernel: dn must be nonzero");
    if (!(lat.a > 0.0 && lat.a_z > 0.0))
        throw std::invalid_argument("interlayer_kernel: need a > 0 and a_z > 0");
    const double a2 = lat.a * lat.a;
    const double inv_a2 = 1.0 / a2;
    const double z = lat.a_z * std::abs(dn);
    const double half_rate = 0.5 * collective_rate_2d(lat);

    // Evanescent orders decay as exp(-z/xi) with xi = a/(2 pi sqrt(m^2 - a^2));
    // keep orders with xi >= z/20, i.e. decay exponents up to 20.
    const double m2_cap = a2 + std::pow(20.0 * lat.a / (kWavenumber * z), 2);
    const int mmax = static_cast<int>(std::ceil(std::sqrt(m2_cap))) + 1;

    Cd sum{0.0, 0.0};
    double first_excluded = 0.0;
    for (int mx = -mmax; mx <= mmax; ++mx) {
        for (int my = -mmax; my <= mmax; ++my) {
            const double m2 = static_cast<double>(mx * mx + my * my);
            const double numerator = 1.0 - inv_a2 * inplane_projection(lat.orientation, mx, my);
            if (m2 < a2) {
                const double kz = std::sqrt(1.0 - inv_a2 * m2);  // units of k_p
                sum += numerator / kz * std::exp(kI * (kWavenumber * kz * z));
            } else {
                const double q = std::sqrt(inv_a2 * m2 - 1.0);
                const double decay = kWavenumber * q * z;
                const double term = std::abs(numerator) / std::max(q, 1e-300) * std::exp(-decay);
                if (m2 > m2_cap) {
                    first_excluded = std::max(first_excluded, half_rate * term);
                    continue;
                }
                // 1/sqrt(1-x) -> -i/sqrt(x-1) for x > 1 with the outgoing branch.
                sum += numerator / (kI * q) * std::exp(-decay);
            }
        }
    }
    if (truncation_estimate) *truncation_estimate = first_excluded;
    return half_rate * sum;
}

double evanescent_correction(const LatticeParams& lat, int dn,
                             double* truncation_estimate) {
    if (dn == 0) throw std::invalid_argument("evanescent_correction: dn must be nonzero");
    if (!(lat.a < 1.0))
        throw std::invalid_argument("evanescent_correction: requires a < lambda");
    const double a2 = lat.a * lat.a;
    const double inv_a2 = 1.0 / a2;
    const double z = lat.a_z * std::abs(dn);
    const double half_rate = 0.5 * collective_rate_2d(lat);

    const double m2_cap = a2 + std::pow(20.0 * lat.a / (kWavenumber * z), 2);
    const int mmax = static_cast<int>(std::ceil(std::sqrt(m2_cap))) + 1;

    double sum = 0.0;
    double first_excluded = 0.0;
    for (int mx = -mmax; mx <= mmax; ++mx) {
        for (int my = -mmax; my <= mmax; ++my) {
            if (mx == 0 && my == 0) continue;
            const double m2 = static_cast<double>(mx * mx + my * my);
            const double q = std::sqrt(inv_a2 * m2 - 1.0);
            const double term = (inv_a2 * inplane_projection(lat.orientation, mx, my) - 1.0) /
                                q * std::exp(-kWavenumber * q * z);
            if (m2 > m2_cap) {
                first_excluded = std::max(first_excluded, half_rate * std::abs(term));
                continue;
            }
            sum += term;
        }
    }
    if (truncation_estimate) *truncation_estimate = first_excluded;
    return half_rate * sum;
}

double phase_matched_shift(const LatticeParams& lat, int Nz) {
    const double two_az = 2.0 * lat.a_z;
    if (std::abs(two_az - std::round(two_az)) > 1e-9)
        throw std::invalid_argument("phase_matched_shift: 2 a_z / lambda must be an integer");
    if (Nz < 1) throw std::invalid_argument("phase_matched_shift: Nz must be >= 1");
    if (Nz == 1) return 0.0;

    Cd total{0.0, 0.0};
    for (int dn = 1; dn <= Nz - 1; ++dn) {
        const double eps = evanescent_correction(lat, dn);
        // pairs (nz, mz) with nz - mz = +-dn contribute conjugate phases
        const Cd phase = std::exp(kI * (kWavenumber * lat.a_z * dn));
        total += static_cast<double>(Nz - dn) * (phase + std::conj(phase)) * eps;
    }
    total /= static_cast<double>(Nz);
    if (std::abs(total.imag()) > 1e-8)
        throw std::logic_error("phase_matched_shift: imaginary residue exceeds 1e-8");
    return total.real();
}

}  // namespace atomarray::greens
