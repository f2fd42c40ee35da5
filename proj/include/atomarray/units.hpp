#pragma once

#include <numbers>

namespace atomarray {

// Natural units used throughout the library: the single-atom free-space
// decay rate gamma fixes the time scale (gamma = 1) and the transition
// wavelength fixes the length scale (lambda = 1).  Every rate, detuning
// and linewidth is expressed in gamma; every position and waist in lambda.
inline constexpr double kGamma = 1.0;              // single-atom decay rate
inline constexpr double kLambda = 1.0;             // transition wavelength
inline constexpr double kWavenumber = 2.0 * std::numbers::pi;  // k_p = 2*pi/lambda

}  // namespace atomarray
