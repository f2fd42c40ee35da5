#pragma once

#include <vector>

namespace atomarray::fitting {

// Resonance parameters extracted from a reflectivity scan.  The amplitude
// reflectivity obeys |r|^2 = r0^2 / (1 + ((delta - delta_res)/HW)^2), so 1/R
// is quadratic in delta and the fit reduces to linear least squares on the
// points within the full width at half maximum.
struct ResonanceFit {
    double r0 = 0.0;            // peak amplitude reflectivity
    double cooperativity = 0.0; // r0 / (1 - r0)
    double delta_res = 0.0;     // resonance detuning
    double linewidth = 0.0;     // Gamma + gamma_loss (= 2 * HW)
    int points_used = 0;
};

// Throws std::runtime_error when the peak R is below 1e-4 or sits on the
// scan boundary.
ResonanceFit fit_reflection_peak(const std::vector<double>& detunings,
                                 const std::vector<double>& R);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace atomarray::fitting
