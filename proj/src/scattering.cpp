#include "atomarray/scattering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "atomarray/greens.hpp"
#include "atomarray/parallel.hpp"
#include "atomarray/units.hpp"

namespace atomarray::scattering {

namespace {
using Cd = std::complex<double>;
constexpr Cd kI{0.0, 1.0};

GridSpec resolve_grid(const GridSpec& grid, const GaussianBeam& beam) {
    GridSpec g = grid;
    if (g.half_width <= 0.0) g.half_width = 4.0 * beam.waist;
    if (g.spacing <= 0.0) g.spacing = 0.25;
    if (g.spacing > 0.25 + 1e-12)
        std::cerr << "scattering: grid spacing above lambda/4; aliasing possible\n";
    return g;
}

int grid_points(const GridSpec& g) {
    return 2 * static_cast<int>(std::ceil(g.half_width / g.spacing)) + 1;
}

}  // namespace

InteractionMatrix build_matrix(const ArrayRealization& arr, double delta_p) {
    arr.validate();
    const int n = arr.size();
    InteractionMatrix mat;
    mat.delta_p = delta_p;
    mat.m.resize(n, n);
    for (int i = 0; i < n; ++i) {
        mat.m(i, i) = Cd(0.5 * kGamma + 0.5 * arr.noncollective_rates[i],
                         -(delta_p + arr.detunings[i]));
        for (int j = i + 1; j < n; ++j) {
            const Cd d = greens::kernel_entry(arr.positions[i] - arr.positions[j],
                                              arr.lattice.orientation);
            mat.m(i, j) = d;
            mat.m(j, i) = d;
        }
    }
    return mat;
}

Eigen::VectorXcd drive_vector(const ArrayRealization& arr, const GaussianBeam& beam,
                              int direction) {
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("drive_vector: direction must be +1 or -1");
    if (beam.waist < 2.0 * arr.lattice.a)
        std::cerr << "drive_vector: waist below 2a; the paraxial mapping degrades\n";
    Eigen::VectorXcd d(arr.size());
    for (int i = 0; i < arr.size(); ++i) {
        const auto& r = arr.positions[i];
        d(i) = beam.mode(r.x(), r.y(), r.z(), direction);
    }
    return d;
}

SteadyStateSolution solve_steady_state(const InteractionMatrix& m,
                                       const Eigen::VectorXcd& drive) {
    if (drive.size() != m.m.rows())
        throw std::invalid_argument("solve_steady_state: drive size mismatch");
    SteadyStateSolution sol;
    sol.drive = drive;
    const Eigen::VectorXcd rhs = kI * drive;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m.m);
    sol.dipoles = lu.solve(rhs);
    const double drive_norm = drive.norm();
    sol.residual_norm = (m.m * sol.dipoles - rhs).norm() / std::max(drive_norm, 1e-300);
    if (!(sol.residual_norm < 1e-10)) {
        const double cond_proxy = sol.dipoles.norm() * m.m.norm() / std::max(rhs.norm(), 1e-300);
        throw std::runtime_error(
            "solve_steady_state: singular or ill-conditioned system (residual " +
            std::to_string(sol.residual_norm) + ", condition proxy " +
            std::to_string(cond_proxy) + ")");
    }
    return sol;
}

FieldMap scattered_field(const SteadyStateSolution& sol, const ArrayRealization& arr,
                         double plane_z, const GridSpec& grid,
                         const greens::DipoleOrientation& orientation) {
    if (plane_z > arr.z_min() - 1e-9 && plane_z < arr.z_max() + 1e-9)
        throw std::invalid_argument("scattered_field: plane must lie outside the atom slab");
    GridSpec g = grid;
    if (g.half_width <= 0.0)
        throw std::invalid_argument("scattered_field: grid half_width must be set");
    if (g.spacing > 0.25 + 1e-12)
        std::cerr << "scattered_field: grid spacing above lambda/4\n";
    FieldMap field;
    field.plane_z = plane_z;
    field.half_width = g.half_width;
    field.spacing = g.spacing;
    field.points_per_side = grid_points(g);
    const int np = field.points_per_side;
    field.samples.assign(static_cast<size_t>(np) * np, Cd{0.0, 0.0});
    for (int n = 0; n < arr.size(); ++n) {
        const Cd amp = 1.5 * sol.dipoles(n);
        const auto& rn = arr.positions[n];
        for (int iy = 0; iy < np; ++iy) {
            const double y = field.coord(iy) - rn.y();
            for (int ix = 0; ix < np; ++ix) {
                const Eigen::Vector3d rel(field.coord(ix) - rn.x(), y, plane_z - rn.z());
                field.at(ix, iy) += amp * greens::projected_green(rel, orientation);
            }
        }
    }
    return field;
}

FieldMap incident_field(const GaussianBeam& beam, double plane_z, const GridSpec& grid,
                        int direction) {
    GridSpec g = resolve_grid(grid, beam);
    FieldMap field;
    field.plane_z = plane_z;
    field.half_width = g.half_width;
    field.spacing = g.spacing;
    field.points_per_side = grid_points(g);
    const int np = field.points_per_side;
    field.samples.resize(static_cast<size_t>(np) * np);
    for (int iy = 0; iy < np; ++iy)
        for (int ix = 0; ix < np; ++ix)
            field.at(ix, iy) =
                beam.mode(field.coord(ix), field.coord(iy), plane_z, direction);
    return field;
}

std::complex<double> project_onto_mode(const FieldMap& field, const GaussianBeam& beam,
                                       int direction) {
    if (field.spacing > 0.25 + 1e-12)
        std::cerr << "project_onto_mode: grid spacing above lambda/4; aliasing possible\n";
    const int np = field.points_per_side;
    Cd sum{0.0, 0.0};
    for (int iy = 0; iy < np; ++iy) {
        const double wy = (iy == 0 || iy == np - 1) ? 0.5 : 1.0;
        for (int ix = 0; ix < np; ++ix) {
            const double wx = (ix == 0 || ix == np - 1) ? 0.5 : 1.0;
            sum += wx * wy * field.at(ix, iy) *
                   beam.amplitude(field.coord(ix), field.coord(iy));
        }
    }
    sum *= field.spacing * field.spacing;
    return sum * std::exp(-kI * (direction * kWavenumber * field.plane_z));
}

ModeProjector make_projector(const ArrayRealization& arr, const GaussianBeam& beam,
                             double plane_z, int direction, const GridSpec& grid) {
    GridSpec g = resolve_grid(grid, beam);
    const int np = grid_points(g);
    ModeProjector proj;
    proj.plane_z = plane_z;
    proj.direction = direction;
    proj.weights.resize(arr.size());

    // Reference mode at the plane: the diffracted Gaussian beam itself, so
    // the Gouy phase and wavefront spreading between the array and the
    // projection plane do not bias the extracted amplitudes.
    std::vector<double> coord(np), trap(np, 1.0);
    trap.front() = trap.back() = 0.5;
    for (int i = 0; i < np; ++i) coord[i] = -g.half_width + g.spacing * i;
    const double u0 = beam.peak_amplitude();
    Eigen::MatrixXcd mode_conj(np, np);  // conj(u0 * beam mode), trapezoid-weighted
    for (int iy = 0; iy < np; ++iy)
        for (int ix = 0; ix < np; ++ix)
            mode_conj(ix, iy) =
                trap[ix] * trap[iy] * u0 *
                std::conj(beam.mode(coord[ix], coord[iy], plane_z, direction));
    const double cell = g.spacing * g.spacing;

    for (int n = 0; n < arr.size(); ++n) {
        const auto& rn = arr.positions[n];
        Cd acc{0.0, 0.0};
        for (int iy = 0; iy < np; ++iy) {
            const double y = coord[iy] - rn.y();
            for (int ix = 0; ix < np; ++ix) {
                const Eigen::Vector3d rel(coord[ix] - rn.x(), y, plane_z - rn.z());
                acc += mode_conj(ix, iy) *
                       greens::projected_green(rel, arr.lattice.orientation);
            }
        }
        proj.weights(n) = 1.5 * cell * acc;
    }

    // Mode content of the drive-normalized incident beam, quadratured on the
    // same grid so discretization errors cancel in the amplitude ratio.
    // The beam mode is normalized per plane; the value is 1/u(0) up to
    // quadrature error.
    Cd input{0.0, 0.0};
    for (int iy = 0; iy < np; ++iy)
        for (int ix = 0; ix < np; ++ix)
            input += mode_conj(ix, iy) * beam.mode(coord[ix], coord[iy], plane_z, direction);
    proj.input_norm = input * cell;
    return proj;
}

std::complex<double> projected_amplitude(const ModeProjector& proj,
                                         const Eigen::VectorXcd& sigma) {
    return proj.weights.cwiseProduct(sigma).sum() / proj.input_norm;
}

std::complex<double> paraxial_reflection_amplitude(const ArrayRealization& arr,
                                                   const GaussianBeam& beam,
                                                   const Eigen::VectorXcd& sigma) {
    const double u0 = beam.peak_amplitude();
    Cd acc{0.0, 0.0};
    for (int n = 0; n < arr.size(); ++n) {
        const auto& r = arr.positions[n];
        acc += beam.amplitude(r.x(), r.y()) * std::exp(kI * (kWavenumber * r.z())) * sigma(n);
    }
    return kI * (3.0 / (8.0 * std::numbers::pi)) * u0 * acc;
}

SpectrumScan reflectivity_spectrum(const ArrayRealization& arr, const GaussianBeam& beam,
                                   const std::vector<double>& scan,
                                   const SpectrumOptions& opt) {
    if (scan.empty()) throw std::invalid_argument("reflectivity_spectrum: empty scan");
    for (size_t i = 1; i < scan.size(); ++i)
        if (!(scan[i] > scan[i - 1]))
            throw std::invalid_argument("reflectivity_spectrum: scan must increase strictly");

    const int dir = opt.direction;
    const double z_back = (dir > 0 ? arr.z_min() - opt.plane_distance
                                   : arr.z_max() + opt.plane_distance);
    const double z_fwd = (dir > 0 ? arr.z_max() + opt.plane_distance
                                  : arr.z_min() - opt.plane_distance);
    const ModeProjector back = make_projector(arr, beam, z_back, -dir, opt.grid);
    const ModeProjector fwd = make_projector(arr, beam, z_fwd, dir, opt.grid);
    const Eigen::VectorXcd drive = drive_vector(arr, beam, dir);
    const InteractionMatrix base = build_matrix(arr, 0.0);

    SpectrumScan out;
    out.detunings = scan;
    const int npts = static_cast<int>(scan.size());
    out.R.resize(npts);
    out.T.resize(npts);
    out.L.resize(npts);

    parallel_for(npts, opt.workers, [&](int i) {
        InteractionMatrix m;
        m.delta_p = scan[i];
        m.m = base.m;
        m.m.diagonal().array() -= kI * scan[i];
        const SteadyStateSolution sol = solve_steady_state(m, drive);
        const Cd r = projected_amplitude(back, sol.dipoles);
        const Cd t = 1.0 + projected_amplitude(fwd, sol.dipoles);
        out.R[i] = std::norm(r);
        out.T[i] = std::norm(t);
        out.L[i] = 1.0 - out.R[i] - out.T[i];
    });

    if (opt.fit) {
        out.fit = fitting::fit_reflection_peak(out.detunings, out.R);
        out.fitted = true;
    }
    return out;
}

SpectrumScan find_resonance(const ArrayRealization& arr, const GaussianBeam& beam,
                            double center, double half_span, const SpectrumOptions& opt,
                            int coarse_points, int refine_points) {
    std::vector<double> coarse(coarse_points);
    for (int i = 0; i < coarse_points; ++i)
        coarse[i] = center - half_span + 2.0 * half_span * i / (coarse_points - 1);
    SpectrumOptions pass = opt;
    pass.fit = false;
    SpectrumScan scan = reflectivity_spectrum(arr, beam, coarse, pass);

    int peak = 0;
    for (int i = 1; i < coarse_points; ++i)
        if (scan.R[i] > scan.R[peak]) peak = i;
    if (peak == 0 || peak == coarse_points - 1)
        throw std::runtime_error("find_resonance: peak on the coarse-scan boundary");

    // Refinement window: approximate FWHM from the coarse pass.
    int lo = peak, hi = peak;
    while (lo > 0 && scan.R[lo] >= 0.5 * scan.R[peak]) --lo;
    while (hi < coarse_points - 1 && scan.R[hi] >= 0.5 * scan.R[peak]) ++hi;
    const double left = scan.detunings[lo];
    const double right = scan.detunings[hi];

    std::vector<double> fine(refine_points);
    for (int i = 0; i < refine_points; ++i)
        fine[i] = left + (right - left) * (i + 0.5) / refine_points;
    std::vector<double> merged;
    merged.reserve(coarse.size() + fine.size());
    std::merge(coarse.begin(), coarse.end(), fine.begin(), fine.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double a, double b) { return b - a < 1e-12; }),
                 merged.end());
    pass.fit = opt.fit;
    return reflectivity_spectrum(arr, beam, merged, pass);
}

EigenmodeSet eigenmodes(const InteractionMatrix& m) {
    const int n = m.size();
    if (n > 5000) throw std::invalid_argument("eigenmodes: dense path limited to N <= 5000");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.m, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenmodes: eigendecomposition failed");

    EigenmodeSet modes;
    modes.kernel_eigenvalues = solver.eigenvalues().array() + kI * m.delta_p;
    modes.vectors = solver.eigenvectors();
    modes.decay_rates.resize(n);
    modes.shifts.resize(n);
    modes.normalization_ok.assign(n, true);
    for (int l = 0; l < n; ++l) {
        modes.decay_rates[l] = 2.0 * modes.kernel_eigenvalues(l).real();
        modes.shifts[l] = modes.kernel_eigenvalues(l).imag();
        const Cd bilinear = modes.vectors.col(l).cwiseProduct(modes.vectors.col(l)).sum();
        if (std::abs(bilinear) < 1e-12) {
            modes.normalization_ok[l] = false;  // exceptional point; leave as is
            std::cerr << "eigenmodes: degenerate bilinear norm for mode " << l << "\n";
            continue;
        }
        modes.vectors.col(l) /= std::sqrt(bilinear);
    }
    return modes;
}

Eigen::VectorXd mode_overlaps(const EigenmodeSet& modes, const Eigen::VectorXcd& target) {
    const Cd bilinear = target.cwiseProduct(target).sum();
    if (std::abs(bilinear) < 1e-300)
        throw std::invalid_argument("mode_overlaps: target has vanishing bilinear norm");
    const Eigen::VectorXcd t = target / std::sqrt(bilinear);
    Eigen::VectorXd out(modes.vectors.cols());
    for (int l = 0; l < modes.vectors.cols(); ++l) {
        const Cd ov = modes.vectors.col(l).cwiseProduct(t).sum();
        out(l) = std::norm(ov);
    }
    return out;
}

SpectrumScan multilayer_effective_solve(const MultilayerSystem& sys,
                                        const std::vector<double>& detunings,
                                        bool do_fit) {
    if (sys.n_layers < 1)
        throw std::invalid_argument("multilayer_effective_solve: n_layers must be >= 1");
    const int nz = sys.n_layers;
    const double rate = greens::collective_rate_2d(sys.lat);

    // Layer system A P = i sqrt(eta Gamma_0 / 2) * phase, detuning relative
    // to the single-layer collective shift.
    Eigen::MatrixXcd kernel(nz, nz);
    for (int i = 0; i < nz; ++i) {
        kernel(i, i) = Cd(0.5 * rate + 0.5 * sys.gamma_s, 0.0);
        for (int j = i + 1; j < nz; ++j) {
            const Cd d = greens::interlayer_kernel(sys.lat, i - j);
            kernel(i, j) = d;
            kernel(j, i) = d;
        }
    }
    Eigen::VectorXcd phases(nz);
    for (int i = 0; i < nz; ++i)
        phases(i) = std::exp(kI * (kWavenumber * sys.lat.a_z * i));
    const double coupling = std::sqrt(0.5 * sys.eta * rate);

    SpectrumScan out;
    out.detunings = detunings;
    out.R.resize(detunings.size());
    out.T.resize(detunings.size());
    out.L.resize(detunings.size());
    for (size_t k = 0; k < detunings.size(); ++k) {
        Eigen::MatrixXcd a = kernel;
        a.diagonal().array() -= kI * detunings[k];
        const Eigen::VectorXcd p = a.partialPivLu().solve((kI * coupling) * phases);
        Cd r{0.0, 0.0}, t{1.0, 0.0};
        for (int i = 0; i < nz; ++i) {
            r += kI * coupling * phases(i) * p(i);
            t += kI * coupling * std::conj(phases(i)) * p(i);
        }
        out.R[k] = std::norm(r);
        out.T[k] = std::norm(t);
        out.L[k] = 1.0 - out.R[k] - out.T[k];
    }
    if (do_fit) {
        out.fit = fitting::fit_reflection_peak(out.detunings, out.R);
        out.fitted = true;
    }
    return out;
}

SpectrumScan multilayer_effective_solve(const ArrayRealization& arr,
                                        const GaussianBeam& beam,
                                        const std::vector<double>& detunings) {
    MultilayerSystem sys;
    sys.lat = arr.lattice;
    sys.n_layers = arr.n_layers;
    sys.eta = geometry::mode_overlap_eta(beam, arr.lattice.a * arr.n_side);
    double gs = 0.0;
    for (double g : arr.noncollective_rates) gs += g;
    sys.gamma_s = arr.size() > 0 ? gs / arr.size() : 0.0;
    return multilayer_effective_solve(sys, detunings, true);
}

}  // namespace atomarray::scattering
