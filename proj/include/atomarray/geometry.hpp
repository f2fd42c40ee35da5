#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "atomarray/greens.hpp"

namespace atomarray::geometry {

using greens::LatticeParams;

// One concrete (possibly disordered) lattice instance.  Lattice indices
// (n_x, n_y) are carried from build time so superlattice detunings stay
// well-defined after positional disorder.
struct ArrayRealization {
    std::vector<Eigen::Vector3d> positions;      // lambda units
    std::vector<double> detunings;               // delta_n, gamma units
    std::vector<double> noncollective_rates;     // gamma_s,n
    std::vector<int> layer_index;                // n_z per atom
    std::vector<Eigen::Vector2i> lattice_index;  // (n_x, n_y) per atom
    std::uint64_t seed = 0;
    LatticeParams lattice;
    int n_side = 0;
    int n_layers = 1;

    int size() const { return static_cast<int>(positions.size()); }
    double z_min() const;
    double z_max() const;
    // Throws std::invalid_argument on inconsistent lengths or coincident
    // atoms (min separation 1e-6 lambda).
    void validate() const;
};

// Gaussian target mode u(r_perp) = sqrt(2/(pi w^2)) exp(-r_perp^2/w^2),
// normalized to integral |u|^2 = 1, propagating along +z.
struct GaussianBeam {
    double waist = 1.0;  // w, lambda units

    double mode_area() const;         // A_u = pi w^2 / 2
    double amplitude(double x, double y) const;  // u(r_perp)
    double peak_amplitude() const;               // u(0)
    double rayleigh_range() const;               // z_R = pi w^2 / lambda

    // Paraxial beam profile with the waist at z = 0, unit amplitude at the
    // waist center, carrier phase included; direction is +1 or -1.  Reduces
    // to u(r_perp)/u(0) in the waist plane and carries the Gouy phase and
    // wavefront curvature away from it.
    std::complex<double> mode(double x, double y, double z, int direction) const;

    // Numerical check of the normalization over a [-3w, 3w]^2 window;
    // throws when off by more than 1e-6.
    void check_normalization() const;
};

struct DisorderSpec {
    enum class Distribution { normal, uniform };

    double sigma = 0.0;           // standard deviation per axis, lambda units
    int realizations = 1;
    std::uint64_t base_seed = 0;
    Distribution distribution = Distribution::normal;

    const char* distribution_name() const {
        return distribution == Distribution::normal ? "normal" : "uniform";
    }
    void validate() const;
};

// n_side^2 atoms on a square lattice in the z = 0 plane, centroid at the
// origin; zero detunings and extra rates.
ArrayRealization build_2d(const LatticeParams& lat, int n_side);

// Nz stacked copies of the 2D array at z = a_z * n_z.
ArrayRealization build_3d(const LatticeParams& lat, int n_side, int Nz);

// Independent normal displacement of every coordinate, drawn from the
// counter-based stream keyed by (base_seed, realization_index, atom, axis).
// The input realization is left untouched.
ArrayRealization apply_disorder(const ArrayRealization& arr, const DisorderSpec& spec,
                                int realization_index);

// Superlattice detunings delta_n = V (-1)^(n_x + n_y) on a single-layer array.
ArrayRealization checkerboard_detuning(const ArrayRealization& arr, double V);

// Overlap fraction of the Gaussian mode with a square array footprint of
// side L_a: erf^2(L_a / (sqrt(2) w)).
double mode_overlap_eta(const GaussianBeam& beam, double L_a);

// Asymptotic complement (2/sqrt(pi)) (sqrt(2) w / L_a) exp(-L_a^2/(2 w^2)),
// valid for L_a >> w.
double mode_overlap_complement_asymptotic(const GaussianBeam& beam, double L_a);

// General footprint integral of |u|^2 over [-L_a/2, L_a/2]^2 by quadrature
// at lambda/8 resolution, for non-Gaussian comparisons.
double mode_overlap_numeric(const GaussianBeam& beam, double L_a);

}  // namespace atomarray::geometry
