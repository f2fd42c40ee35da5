#include "atomarray/geometry.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"

using namespace atomarray::geometry;
using Eigen::Vector3d;

namespace {
LatticeParams lattice(double a, double a_z = 1.0) {
    LatticeParams lat;
    lat.a = a;
    lat.a_z = a_z;
    return lat;
}
}  // namespace

TEST_CASE("2D builder geometry") {
    const ArrayRealization single = build_2d(lattice(0.6), 1);
    CHECK(single.size() == 1);
    CHECK(single.positions[0].norm() == doctest::Approx(0.0));

    const ArrayRealization arr = build_2d(lattice(0.6), 30);
    CHECK(arr.size() == 900);
    double min_x = 1e9, max_x = -1e9;
    Vector3d centroid = Vector3d::Zero();
    for (const auto& r : arr.positions) {
        centroid += r;
        min_x = std::min(min_x, r.x());
        max_x = std::max(max_x, r.x());
    }
    centroid /= arr.size();
    CHECK(centroid.norm() < 1e-12);
    CHECK(max_x - min_x == doctest::Approx(0.6 * 29));  // L_a = a n_side spans (n-1) a

    const ArrayRealization even = build_2d(lattice(0.5), 4);
    Vector3d c2 = Vector3d::Zero();
    for (const auto& r : even.positions) c2 += r;
    CHECK(c2.norm() / even.size() < 1e-12);
    arr.validate();
}

TEST_CASE("3D builder stacks layers") {
    const ArrayRealization flat = build_3d(lattice(0.6), 5, 1);
    const ArrayRealization flat2d = build_2d(lattice(0.6), 5);
    REQUIRE(flat.size() == flat2d.size());
    for (int i = 0; i < flat.size(); ++i)
        CHECK((flat.positions[i] - flat2d.positions[i]).norm() == doctest::Approx(0.0));

    const ArrayRealization stack = build_3d(lattice(0.6, 1.0), 4, 10);
    CHECK(stack.size() == 160);
    CHECK(stack.z_min() == doctest::Approx(0.0));
    CHECK(stack.z_max() == doctest::Approx(9.0));

    const ArrayRealization three = build_3d(lattice(0.6, 0.5), 3, 3);
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < three.size(); ++i) counts[three.layer_index[i]]++;
    CHECK(counts[0] == 9);
    CHECK(counts[1] == 9);
    CHECK(counts[2] == 9);
}

TEST_CASE("disorder is deterministic, unbiased and isotropic") {
    const ArrayRealization arr = build_2d(lattice(0.6), 30);
    DisorderSpec spec;
    spec.sigma = 0.05;
    spec.base_seed = 42;

    const ArrayRealization same = apply_disorder(arr, DisorderSpec{0.0, 1, 42}, 0);
    for (int i = 0; i < arr.size(); ++i)
        CHECK((same.positions[i] - arr.positions[i]).norm() == doctest::Approx(0.0));

    const ArrayRealization a = apply_disorder(arr, spec, 3);
    const ArrayRealization b = apply_disorder(arr, spec, 3);
    for (int i = 0; i < arr.size(); ++i)
        CHECK((a.positions[i] - b.positions[i]).norm() == doctest::Approx(0.0));
    const ArrayRealization c = apply_disorder(arr, spec, 4);
    double moved = 0.0;
    for (int i = 0; i < arr.size(); ++i) moved += (a.positions[i] - c.positions[i]).norm();
    CHECK(moved > 0.0);

    // atom count and layer bookkeeping preserved
    CHECK(a.size() == arr.size());
    for (int i = 0; i < arr.size(); ++i) CHECK(a.layer_index[i] == arr.layer_index[i]);

    // sample statistics: mean -> 0, per-axis std -> sigma, axes uncorrelated
    Vector3d mean = Vector3d::Zero();
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int i = 0; i < arr.size(); ++i) {
        const Vector3d d = a.positions[i] - arr.positions[i];
        mean += d;
        cov += d * d.transpose();
    }
    mean /= arr.size();
    cov /= arr.size();
    CHECK(mean.norm() < 0.15 * spec.sigma);
    for (int k = 0; k < 3; ++k)
        CHECK(std::sqrt(cov(k, k)) == doctest::Approx(spec.sigma).epsilon(0.10));
    CHECK(std::abs(cov(0, 1)) < 0.15 * spec.sigma * spec.sigma);
    CHECK(std::abs(cov(0, 2)) < 0.15 * spec.sigma * spec.sigma);
}

TEST_CASE("checkerboard detuning pattern") {
    const ArrayRealization arr = build_2d(lattice(0.6), 6);
    const ArrayRealization zero = checkerboard_detuning(arr, 0.0);
    for (double d : zero.detunings) CHECK(d == doctest::Approx(0.0));

    const double V = 0.31;
    const ArrayRealization mod = checkerboard_detuning(arr, V);
    double total = 0.0;
    for (int i = 0; i < mod.size(); ++i) {
        total += mod.detunings[i];
        CHECK(std::abs(std::abs(mod.detunings[i]) - V) < 1e-15);
        // neighbors along x carry opposite signs
        for (int j = 0; j < mod.size(); ++j) {
            const auto di = mod.lattice_index[i], dj = mod.lattice_index[j];
            if (std::abs(di.x() - dj.x()) + std::abs(di.y() - dj.y()) == 1)
                CHECK(mod.detunings[i] * mod.detunings[j] < 0.0);
        }
    }
    CHECK(std::abs(total) < 1e-12);  // balanced for even n_side

    // disordered arrays keep their build-time indices and stay valid input
    const ArrayRealization noisy = apply_disorder(arr, DisorderSpec{0.02, 1, 7}, 0);
    CHECK_NOTHROW(checkerboard_detuning(noisy, V));
}

TEST_CASE("Gaussian beam overlap factor") {
    GaussianBeam beam;
    beam.waist = 2.0;
    beam.check_normalization();
    CHECK(beam.mode_area() == doctest::Approx(0.5 * std::numbers::pi * 4.0));

    CHECK(mode_overlap_eta(beam, std::numbers::sqrt2 * beam.waist) ==
          doctest::Approx(0.71014462644).epsilon(1e-9));
    CHECK(mode_overlap_eta(beam, 1e3) == doctest::Approx(1.0));

    // Fig. 4b working point: w/a = 8, n_side = 30
    GaussianBeam fig4;
    fig4.waist = 8.0 * 0.6;
    const double eta = mode_overlap_eta(fig4, 30 * 0.6);
    CHECK(eta == doctest::Approx(0.99964636213).epsilon(1e-9));
    CHECK((1.0 - eta) / eta == doctest::Approx(3.5376297e-4).epsilon(1e-5));

    // monotone in L_a and in w
    CHECK(mode_overlap_eta(beam, 3.0) > mode_overlap_eta(beam, 2.0));
    GaussianBeam wider;
    wider.waist = 3.0;
    CHECK(mode_overlap_eta(wider, 3.0) < mode_overlap_eta(beam, 3.0));

    // quadrature route agrees with the erf^2 closed form
    for (double L : {1.0, 3.0, 8.0})
        CHECK(mode_overlap_numeric(beam, L) == doctest::Approx(mode_overlap_eta(beam, L)).epsilon(1e-6));

    // asymptotic complement approximates 1 - eta for L_a >> w
    const double L = 8.0;
    CHECK(mode_overlap_complement_asymptotic(beam, L) ==
          doctest::Approx(1.0 - mode_overlap_eta(beam, L)).epsilon(0.1));
}
