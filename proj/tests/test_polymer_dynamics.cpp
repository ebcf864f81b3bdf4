#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "polyprop/polymer_dynamics.hpp"
#include "support/oracles.hpp"

using namespace polyprop;
using C = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST_CASE("apply_hamiltonian on a Kronecker state") {
    const PhysicalParams<double> p(1.1, 0.9, 0.4);
    const auto psi = LatticeWavefunction<double>::delta(Lattice<double>(p, 0, 0), 0);
    const auto h = apply_hamiltonian(psi, PotentialSpec::free());
    const double c = p.energy_scale() / 2;
    CHECK(h.window() == IndexRange(-1, 1));
    CHECK(std::abs(h.at(-1) - C(-c, 0)) < 1e-15);
    CHECK(std::abs(h.at(0) - C(2 * c, 0)) < 1e-15);
    CHECK(std::abs(h.at(1) - C(-c, 0)) < 1e-15);
}

TEST_CASE("apply_hamiltonian on a plane wave reproduces the dispersion relation") {
    const PhysicalParams<double> p(1, 1, 0.5);
    for (double momentum : {0.3, -2.1, 5.9}) {
        const auto psi = LatticeWavefunction<double>::sampled(
            Lattice<double>(p, -50, 50), [&](double x) { return std::polar(1.0, x * momentum / p.hbar()); });
        const auto h = apply_hamiltonian(psi, PotentialSpec::free());
        const double e = dispersion_energy(p, momentum);
        for (int n = -49; n <= 49; ++n)
            CHECK(std::abs(h.at(n) - e * psi.at(n)) < 1e-12);
    }
}

TEST_CASE("box Hamiltonian preconditions") {
    const PhysicalParams<double> p;
    auto psi = LatticeWavefunction<double>::delta(Lattice<double>(p, 0, 4), 0);
    CHECK_THROWS_AS(apply_hamiltonian(psi, PotentialSpec::box(4)), PreconditionViolation);
    const auto narrow = LatticeWavefunction<double>::delta(Lattice<double>(p, 1, 3), 2);
    CHECK_THROWS_AS(apply_hamiltonian(narrow, PotentialSpec::box(4)), PreconditionViolation);
    CHECK_THROWS_AS(PotentialSpec::box(1), DomainError);
}

TEST_CASE("dispersion relation") {
    const PhysicalParams<double> unit;
    CHECK(dispersion_energy(unit, 0.0) == 0.0);
    CHECK(dispersion_energy(unit, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    const PhysicalParams<double> p(1.3, 0.6, 0.2);
    CHECK(dispersion_energy(p, p.momentum_bound()) == doctest::Approx(2 * p.energy_scale()).epsilon(1e-15));

    CHECK(dispersion_momentum(unit, 0.0) == 0.0);
    CHECK(dispersion_momentum(unit, 1.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(dispersion_momentum(p, 2 * p.energy_scale()) == doctest::Approx(p.momentum_bound()).epsilon(1e-15));
    CHECK_THROWS_AS(dispersion_momentum(p, -1e-9), DomainError);
    CHECK_THROWS_AS(dispersion_momentum(p, 2 * p.energy_scale() * (1 + 1e-12)), DomainError);

    const double top = 2 * p.energy_scale();
    for (int i = 0; i <= 200; ++i) {
        const double e = top * i / 200.0;
        CHECK(std::abs(dispersion_energy(p, dispersion_momentum(p, e)) - e) <= 1e-12 * std::max(1.0, top));
    }
}

TEST_CASE("recurrence_solve") {
    const PhysicalParams<double> unit;
    // E in band, seed with the root Lambda_+
    const double energy = 0.7;
    const double eps = 1 - energy;
    const C lam(eps, std::sqrt(1 - eps * eps));
    const auto seq = recurrence_solve(energy, C(1, 0), lam, 200, unit);
    for (int n = 0; n <= 200; ++n)
        CHECK(std::abs(seq[n] - std::pow(lam, n)) <= 1e-10);

    const auto flat = recurrence_solve(0.0, C(1, 0), C(1, 0), 50, unit);
    for (int n = 0; n <= 50; ++n)
        CHECK(flat[n] == C(1, 0));

    CHECK_THROWS_AS(recurrence_solve(0.5, C(1, 0), C(1, 0), 1, unit), UsageError);
}

TEST_CASE("recurrence_solve matches the two-root closed form") {
    const PhysicalParams<double> p(1, 2, 0.5);
    const double energy = 3.1;  // band top is 2 hbar^2/(m mu0^2) = 4
    const double eps = 1 - energy / p.energy_scale();
    const C lp(eps, std::sqrt(1 - eps * eps)), lm = std::conj(lp);
    const C psi0(0.4, -0.2), psi1(-1.0, 0.3);
    // A + B = psi0, A lp + B lm = psi1
    const C b = (psi1 - psi0 * lp) / (lm - lp);
    const C a = psi0 - b;
    const auto seq = recurrence_solve(energy, psi0, psi1, 300, p);
    for (int n = 0; n <= 300; ++n)
        CHECK(std::abs(seq[n] - (a * std::pow(lp, n) + b * std::pow(lm, n))) <= 1e-10);
}

TEST_CASE("plane-wave seed reproduces exp(i x_n p_E / hbar) over 1000 steps") {
    const PhysicalParams<double> p(1, 1, 0.5);
    for (double energy : {0.05, 1.3, 7.9}) {
        const double pe = dispersion_momentum(p, energy);
        const double th = p.mu0() * pe / p.hbar();
        const auto seq = recurrence_solve(energy, C(1, 0), std::polar(1.0, th), 1000, p);
        for (int n = 0; n <= 1000; ++n)
            CHECK(std::abs(seq[n] - std::polar(1.0, n * th)) <= 1e-9);
    }
}

TEST_CASE("box eigenpair through the recurrence") {
    const PhysicalParams<double> unit;
    for (int N : {3, 7, 12})
        for (int l = 1; l < N; ++l) {
            const auto spec = box_spectrum(N, unit);
            const auto seq = recurrence_solve(spec.energy(l), C(0, 0),
                                              C(std::sqrt(2.0 / N) * std::sin(l * pi / N), 0), N, unit);
            for (int n = 0; n <= N; ++n)
                CHECK(std::abs(seq[n] - spec.eigenvectors(l - 1, n)) <= 1e-10);
            CHECK(std::abs(seq[N]) <= 1e-10);
        }
}

TEST_CASE("box_spectrum small cases") {
    const PhysicalParams<double> unit;
    const auto s2 = box_spectrum(2, unit);
    REQUIRE(s2.energies.size() == 1);
    CHECK(s2.energy(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s2.eigenvectors(0, 0) == 0.0);
    CHECK(s2.eigenvectors(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s2.eigenvectors(0, 2) == 0.0);

    const auto s3 = box_spectrum(3, unit);
    CHECK(s3.energy(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s3.energy(2) == doctest::Approx(1.5).epsilon(1e-15));

    CHECK_THROWS_AS(box_spectrum(1, unit), DomainError);
}

TEST_CASE("box spectrum invariants") {
    const PhysicalParams<double> p(1.2, 0.8, 0.3);
    for (int N = 2; N <= 32; ++N) {
        const auto s = box_spectrum(N, p);
        for (int l = 1; l < N; ++l) {
            CHECK(s.energy(l) > 0);
            CHECK(s.energy(l) < 2 * p.energy_scale());
            if (l > 1)
                CHECK(s.energy(l) > s.energy(l - 1));
            CHECK(s.eigenvectors(l - 1, 0) == 0.0);
            CHECK(s.eigenvectors(l - 1, N) == 0.0);

            const auto psi = s.eigenstate(l);
            const auto h = apply_hamiltonian(psi, PotentialSpec::box(N));
            const double resid = (h.amplitudes() - s.energy(l) * psi.amplitudes()).norm();
            CHECK(resid <= 1e-12 * psi.norm() * std::max(1.0, p.energy_scale()));
        }
        const Eigen::MatrixXd gram = s.eigenvectors * s.eigenvectors.transpose();
        CHECK((gram - Eigen::MatrixXd::Identity(N - 1, N - 1)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("box spectrum agrees with a Jacobi eigensolver on the interior stencil") {
    const PhysicalParams<double> p(1, 1, 1);
    for (int N = 2; N <= 32; ++N) {
        const auto s = box_spectrum(N, p);
        const auto [values, vectors] = oracle::jacobi_eigen(oracle::box_interior_hamiltonian(N, 1, 1, 1));
        for (int l = 1; l < N; ++l) {
            CHECK(std::abs(values[l - 1] - s.energy(l)) <= 1e-10);
            for (int n = 1; n < N; ++n)
                CHECK(std::abs(vectors(n - 1, l - 1) - s.eigenvectors(l - 1, n)) <= 1e-8);
        }
    }
}
