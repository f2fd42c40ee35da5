#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace atomarray {

// Complex envelope h(t) sampled on a uniform time grid [t0, t0 + duration].
// Input photon wave packets satisfy the normalization "integral of |h|^2 = 1"
// (trapezoidal rule); control pulses are unconstrained.
struct PulseShape {
    double t0 = 0.0;
    double duration = 0.0;
    std::vector<std::complex<double>> values;

    bool empty() const { return values.empty(); }
    int samples() const { return static_cast<int>(values.size()); }
    double dt() const;
    double time_at(int i) const;
    double end() const { return t0 + duration; }

    // Linear interpolation; zero outside [t0, t0 + duration].
    std::complex<double> at(double t) const;

    // Trapezoidal integral of |h|^2 over the grid.
    double norm2() const;
    // Rescales so norm2() == 1; throws on a zero pulse.
    void normalize();
    // Throws std::invalid_argument unless |norm2() - 1| <= tol.
    void check_normalized(double tol = 1e-8) const;

    double peak_amplitude() const;

    // h(t) on [0, T] proportional to exp(rate * t / 2), normalized.
    static PulseShape rising_exponential(double T, double rate, int samples);
    static PulseShape constant(double T, std::complex<double> value, int samples);

    // CSV with columns t, re, im (header optional, '#' comments skipped).
    static PulseShape from_csv(std::istream& in);
    static PulseShape from_csv_file(const std::string& path);
    void to_csv(std::ostream& out) const;
};

}  // namespace atomarray
