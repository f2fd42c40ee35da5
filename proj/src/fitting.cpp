#include "atomarray/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atomarray::fitting {

ResonanceFit fit_reflection_peak(const std::vector<double>& detunings,
                                 const std::vector<double>& R) {
    const int n = static_cast<int>(detunings.size());
    if (n < 3 || R.size() != detunings.size())
        throw std::invalid_argument("fit_reflection_peak: need >= 3 scan points");

    int peak = 0;
    for (int i = 1; i < n; ++i)
        if (R[i] > R[peak]) peak = i;
    if (R[peak] < 1e-4)
        throw std::runtime_error("fit_reflection_peak: peak R below 1e-4; no resonance");
    if (peak == 0 || peak == n - 1)
        throw std::runtime_error("fit_reflection_peak: peak lies on the scan boundary");

    // Fit window: contiguous points with R >= R_peak / 2.
    int lo = peak, hi = peak;
    while (lo > 0 && R[lo - 1] >= 0.5 * R[peak]) --lo;
    while (hi < n - 1 && R[hi + 1] >= 0.5 * R[peak]) ++hi;
    if (hi - lo + 1 < 3) {
        lo = std::max(0, peak - 1);
        hi = std::min(n - 1, peak + 1);
    }

    // 1/R = A + B x + C x^2 with x centered on the peak for conditioning.
    const double x0 = detunings[peak];
    const int m = hi - lo + 1;
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
        const double x = detunings[lo + i] - x0;
        design(i, 0) = 1.0;
        design(i, 1) = x;
        design(i, 2) = x * x;
        rhs(i) = 1.0 / R[lo + i];
    }
    const Eigen::Vector3d coef =
        (design.transpose() * design).ldlt().solve(design.transpose() * rhs);
    const double A = coef(0), B = coef(1), C = coef(2);
    if (!(C > 0.0))
        throw std::runtime_error("fit_reflection_peak: window is not concave; bad scan");

    const double inv_r0_sq = A - 0.25 * B * B / C;
    if (!(inv_r0_sq > 0.0))
        throw std::runtime_error("fit_reflection_peak: degenerate fit");

    ResonanceFit fit;
    fit.r0 = 1.0 / std::sqrt(inv_r0_sq);
    fit.delta_res = x0 - 0.5 * B / C;
    fit.linewidth = 2.0 * std::sqrt(inv_r0_sq / C);
    fit.cooperativity = fit.r0 / (1.0 - fit.r0);
    fit.points_used = m;
    return fit;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != x.size())
        throw std::invalid_argument("linear_fit: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw std::invalid_argument("linear_fit: degenerate x");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace atomarray::fitting
