#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "polyprop/consistency.hpp"

using namespace polyprop;
using C = std::complex<double>;

namespace {
const PhysicalParams<double> unit;
}

TEST_CASE("free Green's-function residual") {
    const auto k = PropagatorKernel<double>::free(unit);
    const std::vector<double> zs{0.5, 1.0, 5.0, 20.0};
    const auto rep = greens_residual(k, IndexRange(-8, 8), IndexRange(-8, 8), zs);
    CHECK(rep.max_abs_residual <= 1e-9);
    CHECK(rep.max_abs_residual >= 0);

    // physical units: t grid chosen so that z covers the same values
    const PhysicalParams<double> p(1.3, 0.7, 0.4);
    const double scale = dimensionless_time(p, 1.0);
    std::vector<double> ts;
    for (double z : zs)
        ts.push_back(2.0 + z / scale);
    const auto k2 = PropagatorKernel<double>::free(p);
    CHECK(greens_residual(k2, IndexRange(-8, 8), IndexRange(-8, 8), ts, 2.0).max_abs_residual <=
          1e-9 * p.energy_scale());

    const auto fd = greens_residual_fd(k, IndexRange(-8, 8), IndexRange(-8, 8), zs, 1e-6);
    CHECK(fd.max_abs_residual <= 1e-5);
}

TEST_CASE("box Green's-function residual") {
    const std::vector<double> zs{0.5, 1.0, 5.0, 20.0};
    const auto box = PropagatorKernel<double>::box_spectral(6, unit);
    CHECK(greens_residual(box, IndexRange(1, 5), IndexRange(1, 5), zs).max_abs_residual <= 1e-10);
    CHECK(greens_residual_fd(box, IndexRange(1, 5), IndexRange(1, 5), zs, 1e-6).max_abs_residual <= 1e-5);

    const auto images = PropagatorKernel<double>::box_images(6, minimal_image_cutoff(6, 20.0, 6, 6), unit);
    CHECK(greens_residual(images, IndexRange(1, 5), IndexRange(1, 5), zs).max_abs_residual <= 1e-10);

    const auto periodic = PropagatorKernel<double>::periodic(6, minimal_image_cutoff(6, 20.0, 13, 13), unit);
    CHECK(greens_residual(periodic, IndexRange(-3, 12), IndexRange(0, 11), zs).max_abs_residual <= 1e-9);

    CHECK_THROWS_AS(greens_residual(box, IndexRange(0, 5), IndexRange(1, 5), zs), UsageError);
}

TEST_CASE("Green's residual of the zero kernel vanishes") {
    const auto zero = [](int, int, double) { return C(0, 0); };
    const auto rep = greens_residual<double>(zero, zero, unit, IndexRange(-3, 3), IndexRange(-3, 3),
                                             std::vector<double>{0.1, 1.0});
    CHECK(rep.max_abs_residual == 0.0);
}

TEST_CASE("the residual detects a wrong kernel") {
    // drop the e^{-iz} envelope: no longer solves the lattice Schrodinger equation
    const auto bad = [](int j, int r, double dt) { return ipow(r - j) * bessel_jn(r - j, dt); };
    const auto bad_dt = [](int j, int r, double dt) {
        const int n = r - j;
        return ipow(n) * (bessel_jn(n - 1, dt) - bessel_jn(n + 1, dt)) / 2.0;
    };
    const auto rep =
        greens_residual<double>(bad, bad_dt, unit, IndexRange(-2, 2), IndexRange(-2, 2), std::vector<double>{1.0, 3.0});
    CHECK(rep.max_abs_residual > 0.1);
}

TEST_CASE("Green's residual rejects times at or before t0") {
    const auto k = PropagatorKernel<double>::free(unit);
    CHECK_THROWS_AS(greens_residual(k, IndexRange(0, 0), IndexRange(0, 0), std::vector<double>{1.0, 0.0}), UsageError);
    CHECK_THROWS_AS(greens_residual_fd(k, IndexRange(0, 0), IndexRange(0, 0), std::vector<double>{1e-7}, 1e-6),
                    UsageError);
}

TEST_CASE("free composition") {
    const auto k = PropagatorKernel<double>::free(unit);
    for (auto [za, zb] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{10.0, 10.0}})
        for (int j = -4; j <= 4; ++j)
            for (int r = j - 8; r <= j + 8; r += 2) {
                // legs: t - t1 = za, t1 - t0 = zb
                const auto window = free_composition_window(j, r, za, zb);
                CHECK(composition_check(k, j, r, 0.0, zb, za + zb, window) <= 1e-9);
            }
    CHECK(composition_check(k, 0, 3, 0.0, 1.0, 3.0, free_composition_window(0, 3, 2.0, 1.0)) <= 1e-9);

    // a window that is far too narrow misses weight
    CHECK(composition_check(k, 0, 3, 0.0, 5.0, 10.0, IndexRange(0, 3)) > 1e-3);
}

TEST_CASE("box composition") {
    for (int N = 2; N <= 8; ++N) {
        const auto k = PropagatorKernel<double>::box_spectral(N, unit);
        for (int j = 1; j < N; ++j)
            for (int r = 1; r < N; ++r)
                for (auto [t1, t] : {std::pair{0.3, 1.0}, std::pair{2.0, 2.5}, std::pair{4.0, 11.0}})
                    CHECK(composition_check(k, j, r, 0.0, t1, t, IndexRange(0, N)) <= 1e-12);
    }
    const auto k5 = PropagatorKernel<double>::box_spectral(5, unit);
    CHECK_THROWS_AS(composition_check(k5, 1, 1, 0.0, 1.0, 2.0, IndexRange(-1, 5)), UsageError);
}

TEST_CASE("composition: degenerate split and ordering") {
    const auto k = PropagatorKernel<double>::free(unit);
    CHECK(composition_check(k, 1, -2, 0.0, 0.0, 2.0, free_composition_window(1, -2, 2.0, 0.0)) <= 1e-14);
    CHECK_THROWS_AS(composition_check(k, 0, 0, 1.0, 0.5, 2.0, IndexRange(-30, 30)), UsageError);
    CHECK_THROWS_AS(composition_check(k, 0, 0, 0.0, 3.0, 2.0, IndexRange(-30, 30)), UsageError);
}

TEST_CASE("periodic composition over one period") {
    const int N = 4;
    const double t = 3.0, t1 = 1.2;
    const int K = minimal_image_cutoff(N, t, 2 * N, 2 * N) + 1;
    const auto k = PropagatorKernel<double>::periodic(N, K, unit);
    for (int j = 0; j < 2 * N; ++j)
        for (int r = 0; r < 2 * N; ++r)
            CHECK(composition_check(k, j, r, 0.0, t1, t, IndexRange(0, 2 * N - 1)) <= 1e-10);
}
