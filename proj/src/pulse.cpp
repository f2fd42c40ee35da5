#include "atomarray/pulse.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace atomarray {

double PulseShape::dt() const {
    if (samples() < 2) return 0.0;
    return duration / static_cast<double>(samples() - 1);
}

double PulseShape::time_at(int i) const { return t0 + dt() * i; }

std::complex<double> PulseShape::at(double t) const {
    if (empty() || t < t0 || t > t0 + duration) return {0.0, 0.0};
    if (samples() == 1) return values.front();
    const double x = (t - t0) / dt();
    const int i = std::min(static_cast<int>(x), samples() - 2);
    const double f = x - i;
    return values[i] * (1.0 - f) + values[i + 1] * f;
}

double PulseShape::norm2() const {
    if (samples() < 2) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < samples(); ++i) {
        const double w = (i == 0 || i == samples() - 1) ? 0.5 : 1.0;
        sum += w * std::norm(values[i]);
    }
    return sum * dt();
}

void PulseShape::normalize() {
    const double n2 = norm2();
    if (!(n2 > 0.0)) throw std::invalid_argument("PulseShape::normalize: zero pulse");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& v : values) v *= s;
}

void PulseShape::check_normalized(double tol) const {
    if (std::abs(norm2() - 1.0) > tol)
        throw std::invalid_argument("PulseShape: pulse is not normalized");
}

double PulseShape::peak_amplitude() const {
    double peak = 0.0;
    for (const auto& v : values) peak = std::max(peak, std::abs(v));
    return peak;
}

PulseShape PulseShape::rising_exponential(double T, double rate, int samples) {
    if (T <= 0.0 || samples < 2)
        throw std::invalid_argument("rising_exponential: need T > 0 and samples >= 2");
    PulseShape p;
    p.t0 = 0.0;
    p.duration = T;
    p.values.resize(samples);
    const double h = T / (samples - 1);
    for (int i = 0; i < samples; ++i)
        p.values[i] = std::exp(0.5 * rate * (h * i - T));  // scaled for overflow safety
    p.normalize();
    return p;
}

PulseShape PulseShape::constant(double T, std::complex<double> value, int samples) {
    if (T <= 0.0 || samples < 2)
        throw std::invalid_argument("constant: need T > 0 and samples >= 2");
    PulseShape p;
    p.t0 = 0.0;
    p.duration = T;
    p.values.assign(samples, value);
    return p;
}

PulseShape PulseShape::from_csv(std::istream& in) {
    std::vector<double> t;
    std::vector<std::complex<double>> h;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (auto& c : line)
            if (c == ',') c = ' ';
        std::istringstream row(line);
        double ti, re, im;
        if (row >> ti >> re >> im) {
            t.push_back(ti);
            h.emplace_back(re, im);
        }
    }
    if (t.size() < 2) throw std::invalid_argument("PulseShape::from_csv: need >= 2 samples");
    PulseShape p;
    p.t0 = t.front();
    p.duration = t.back() - t.front();
    if (!(p.duration > 0.0))
        throw std::invalid_argument("PulseShape::from_csv: non-increasing time column");
    const double step = t[1] - t[0];
    for (size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step)))
            throw std::invalid_argument("PulseShape::from_csv: grid must be uniform");
    p.values = std::move(h);
    return p;
}

PulseShape PulseShape::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("PulseShape: cannot open " + path);
    return from_csv(in);
}

void PulseShape::to_csv(std::ostream& out) const {
    out << "t,re,im\n";
    char buf[96];
    for (int i = 0; i < samples(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", time_at(i),
                      values[i].real(), values[i].imag());
        out << buf;
    }
}

}  // namespace atomarray
