#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "polyprop/continuum.hpp"

using namespace polyprop;
using C = std::complex<double>;

TEST_CASE("continuum sweep rejects spacings that do not divide dx") {
    CHECK_THROWS_AS(continuum_sweep(1.0, 1.0, std::vector<double>{0.3}), UsageError);
    CHECK_THROWS_AS(continuum_sweep(1.0, 0.0, std::vector<double>{0.5}), DomainError);
    const auto pts = continuum_sweep(1.0, 1.0, std::vector<double>{0.25});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].l == 4);
    CHECK(pts[0].z == 16.0);
    CHECK(!empirical_orders(pts)[0].has_value());
}

TEST_CASE("continuum sweep: pointwise error decreases over the default ladder") {
    const std::vector<double> mus{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    const auto pts = continuum_sweep(1.0, 1.0, mus);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        CHECK(pts[k].abs_error > pts[k + 1].abs_error);
        CHECK(pts[k].abs_error / pts[k + 1].abs_error > 1.0);
    }
    const auto orders = empirical_orders(pts);
    CHECK(orders.size() == 4);
    CHECK(orders[0].has_value());
    CHECK(!orders[3].has_value());
}

TEST_CASE("continuum sweep: pointwise error plateaus at |K_sch|") {
    // i^l J_l(z) e^{-iz} ~ sqrt(1/(2 pi z)) [e^{-i pi/4} + e^{-2iz + i pi/4 + i pi l}] for z >> l^2,
    // so |k/mu0 - K_sch| tends to sqrt(m/(2 pi hbar dt)), not to zero
    const auto pts = continuum_sweep(1.0, 1.0, std::vector<double>{1.0 / 64, 1.0 / 128});
    const double plateau = 1 / std::sqrt(2 * std::numbers::pi);
    for (const auto& pt : pts)
        CHECK(std::abs(pt.abs_error - plateau) < 5e-3);
}

TEST_CASE("continuum sweep: error shrinks as dt grows at fixed mu0") {
    double prev = 1e300;
    for (double dt : {1.0, 4.0, 16.0, 64.0}) {
        const double e = continuum_sweep(1.0, dt, std::vector<double>{1.0 / 16})[0].abs_error;
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("Gaussian packet closed form solves the free Schrodinger equation") {
    const PhysicalParams<double> p(0.9, 1.3, 1.0);
    const GaussianPacket<double> g{0.4, 0.7, 2.1};
    for (double x : {-1.0, 0.4, 1.9})
        CHECK(std::abs(g.free_evolved(x, 0.0, p) - g(x)) < 1e-15);
    // i hbar psi_t = -(hbar^2/2m) psi_xx by central differences
    const double h = 1e-4;
    for (double t : {0.2, 1.5})
        for (double x : {-0.5, 0.3, 1.8}) {
            const C psi_t = (g.free_evolved(x, t + h, p) - g.free_evolved(x, t - h, p)) / (2 * h);
            const C psi_xx = (g.free_evolved(x + h, t, p) - 2.0 * g.free_evolved(x, t, p) + g.free_evolved(x - h, t, p)) /
                             (h * h);
            CHECK(std::abs(C(0, p.hbar()) * psi_t + p.hbar() * p.hbar() / (2 * p.mass()) * psi_xx) < 1e-5);
        }
}

TEST_CASE("packet-smeared free continuum limit converges") {
    const GaussianPacket<double> g{0.0, 1.0, 1.5};
    double prev = 1e300;
    std::vector<double> errs;
    for (double mu0 : {1.0 / 2, 1.0 / 4, 1.0 / 8, 1.0 / 16}) {
        const double e = free_packet_continuum_error(g, 1.0, PhysicalParams<double>(1, 1, mu0));
        CHECK(e < prev);
        errs.push_back(e);
        prev = e;
    }
    // second order in mu0 once resolved
    CHECK(errs[2] / errs[3] > 3.5);
    CHECK(errs.back() < 1e-2);
}

TEST_CASE("box mode projection and cutoff") {
    const GaussianPacket<double> g{0.5, 0.04, 0.0};
    const int cutoff = choose_mode_cutoff(g, 1.0);
    CHECK(cutoff > 10);
    CHECK(cutoff < 200);
    const BoxModeProjector<double> project(g, 1.0);
    double largest = 0;
    for (int n = 1; n <= cutoff; ++n)
        largest = std::max(largest, std::abs(project(n)));
    CHECK(std::abs(project(cutoff)) < 1e-14 * largest);
    // Parseval: sum |c_n|^2 = ||psi0||^2 = 1 for a packet well inside the box
    double s = 0;
    for (int n = 1; n <= cutoff; ++n)
        s += std::norm(project(n));
    CHECK(std::abs(s - 1) < 1e-10);
}

TEST_CASE("packet-smeared box continuum limit converges") {
    const GaussianPacket<double> g{0.45, 0.04, 10.0};
    const double dt = 0.002;
    std::vector<double> errs;
    for (int N : {64, 128, 256}) {
        const PhysicalParams<double> p(1, 1, 1.0 / N);
        errs.push_back(box_packet_continuum_error(g, N, dt, p));
    }
    CHECK(errs[0] > errs[1]);
    CHECK(errs[1] > errs[2]);
    CHECK(errs[1] / errs[2] > 3.0);
    // the continuum kernel itself is packet-only
    CHECK_THROWS_AS(PropagatorKernel<double>(SchrodingerBoxPacketSystem{8, 10}, PhysicalParams<double>{})(1, 1, 0.1),
                    UsageError);
}
