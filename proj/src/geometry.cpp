#include "atomarray/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "atomarray/rng.hpp"

namespace atomarray::geometry {

double ArrayRealization::z_min() const {
    double z = 0.0;
    for (const auto& r : positions) z = std::min(z, r.z());
    return z;
}

double ArrayRealization::z_max() const {
    double z = 0.0;
    for (const auto& r : positions) z = std::max(z, r.z());
    return z;
}

void ArrayRealization::validate() const {
    const size_t n = positions.size();
    if (detunings.size() != n || noncollective_rates.size() != n ||
        layer_index.size() != n || lattice_index.size() != n)
        throw std::invalid_argument("ArrayRealization: inconsistent field lengths");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if ((positions[i] - positions[j]).norm() < 1e-6)
                throw std::invalid_argument("ArrayRealization: atoms closer than 1e-6 lambda");
}

double GaussianBeam::mode_area() const {
    return 0.5 * std::numbers::pi * waist * waist;
}

double GaussianBeam::amplitude(double x, double y) const {
    return peak_amplitude() * std::exp(-(x * x + y * y) / (waist * waist));
}

double GaussianBeam::peak_amplitude() const {
    return std::sqrt(2.0 / (std::numbers::pi * waist * waist));
}

double GaussianBeam::rayleigh_range() const {
    return std::numbers::pi * waist * waist;  // lambda = 1
}

std::complex<double> GaussianBeam::mode(double x, double y, double z,
                                        int direction) const {
    // complex beam parameter q = z' - i z_R along the propagation coordinate
    const double k = 2.0 * std::numbers::pi;
    const double zp = direction * z;
    const std::complex<double> q{zp, -rayleigh_range()};
    const std::complex<double> q0{0.0, -rayleigh_range()};
    const double r2 = x * x + y * y;
    return (q0 / q) * std::exp(std::complex<double>(0.0, 1.0) * (k * r2 / (2.0 * q)) +
                               std::complex<double>(0.0, k * zp));
}

void GaussianBeam::check_normalization() const {
    if (!(waist > 0.0)) throw std::invalid_argument("GaussianBeam: waist must be positive");
    const int n = 600;
    const double half = 3.0 * waist;
    const double h = 2.0 * half / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
        for (int j = 0; j <= n; ++j) {
            const double wy = (j == 0 || j == n) ? 0.5 : 1.0;
            const double u = amplitude(-half + h * i, -half + h * j);
            sum += wx * wy * u * u;
        }
    }
    sum *= h * h;
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::logic_error("GaussianBeam: profile normalization check failed");
}

void DisorderSpec::validate() const {
    if (sigma < 0.0 || !std::isfinite(sigma))
        throw std::invalid_argument("DisorderSpec: sigma must be >= 0");
    if (realizations < 1)
        throw std::invalid_argument("DisorderSpec: realizations must be >= 1");
}

ArrayRealization build_2d(const LatticeParams& lat, int n_side) {
    if (n_side < 1) throw std::invalid_argument("build_2d: n_side must be >= 1");
    if (!(lat.a > 0.0)) throw std::invalid_argument("build_2d: a must be positive");
    ArrayRealization arr;
    arr.lattice = lat;
    arr.n_side = n_side;
    arr.n_layers = 1;
    const int n = n_side * n_side;
    arr.positions.reserve(n);
    arr.lattice_index.reserve(n);
    const double center = 0.5 * (n_side - 1);
    for (int ny = 0; ny < n_side; ++ny)
        for (int nx = 0; nx < n_side; ++nx) {
            arr.positions.emplace_back(lat.a * (nx - center), lat.a * (ny - center), 0.0);
            arr.lattice_index.emplace_back(nx, ny);
        }
    arr.detunings.assign(n, 0.0);
    arr.noncollective_rates.assign(n, 0.0);
    arr.layer_index.assign(n, 0);
    return arr;
}

ArrayRealization build_3d(const LatticeParams& lat, int n_side, int Nz) {
    if (Nz < 1) throw std::invalid_argument("build_3d: Nz must be >= 1");
    ArrayRealization layer = build_2d(lat, n_side);
    if (Nz == 1) return layer;
    ArrayRealization arr;
    arr.lattice = lat;
    arr.n_side = n_side;
    arr.n_layers = Nz;
    const int n = layer.size();
    arr.positions.reserve(n * Nz);
    for (int nz = 0; nz < Nz; ++nz)
        for (int i = 0; i < n; ++i) {
            Eigen::Vector3d r = layer.positions[i];
            r.z() = lat.a_z * nz;
            arr.positions.push_back(r);
            arr.lattice_index.push_back(layer.lattice_index[i]);
            arr.layer_index.push_back(nz);
        }
    arr.detunings.assign(n * Nz, 0.0);
    arr.noncollective_rates.assign(n * Nz, 0.0);
    return arr;
}

ArrayRealization apply_disorder(const ArrayRealization& arr, const DisorderSpec& spec,
                                int realization_index) {
    spec.validate();
    ArrayRealization out = arr;
    out.seed = spec.base_seed;
    if (spec.sigma == 0.0) return out;
    const bool normal = spec.distribution == DisorderSpec::Distribution::normal;
    for (int i = 0; i < out.size(); ++i)
        for (int axis = 0; axis < 3; ++axis) {
            const auto r = static_cast<std::uint64_t>(realization_index);
            const auto n = static_cast<std::uint64_t>(i);
            const auto ax = static_cast<std::uint64_t>(axis);
            const double draw = normal ? keyed_normal(spec.base_seed, r, n, ax)
                                       : keyed_uniform(spec.base_seed, r, n, ax);
            out.positions[i][axis] += spec.sigma * draw;
        }
    return out;
}

ArrayRealization checkerboard_detuning(const ArrayRealization& arr, double V) {
    if (arr.n_layers != 1)
        throw std::invalid_argument("checkerboard_detuning: single-layer arrays only");
    if (arr.lattice_index.size() != arr.positions.size())
        throw std::invalid_argument("checkerboard_detuning: lattice indices missing");
    ArrayRealization out = arr;
    for (int i = 0; i < out.size(); ++i) {
        const auto& idx = out.lattice_index[i];
        out.detunings[i] = ((idx.x() + idx.y()) % 2 == 0) ? V : -V;
    }
    return out;
}

double mode_overlap_eta(const GaussianBeam& beam, double L_a) {
    if (!(L_a > 0.0) || !(beam.waist > 0.0))
        throw std::invalid_argument("mode_overlap_eta: need L_a > 0 and w > 0");
    const double e = std::erf(L_a / (std::numbers::sqrt2 * beam.waist));
    return e * e;
}

double mode_overlap_complement_asymptotic(const GaussianBeam& beam, double L_a) {
    const double x = L_a / (std::numbers::sqrt2 * beam.waist);
    return 2.0 / std::sqrt(std::numbers::pi) / x * std::exp(-x * x);
}

double mode_overlap_numeric(const GaussianBeam& beam, double L_a) {
    const double h = 0.125;  // lambda/8
    int n = std::max(2, static_cast<int>(std::ceil(L_a / h)));
    if (n % 2 == 1) ++n;  // composite Simpson needs an even interval count
    const double step = L_a / n;
    auto simpson_w = [n](int i) {
        if (i == 0 || i == n) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    double sum = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double u =
                beam.amplitude(-0.5 * L_a + step * i, -0.5 * L_a + step * j);
            sum += simpson_w(i) * simpson_w(j) * u * u;
        }
    return sum * step * step / 9.0;
}

}  // namespace atomarray::geometry
