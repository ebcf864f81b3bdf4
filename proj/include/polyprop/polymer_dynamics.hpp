#ifndef POLYPROP_POLYMER_DYNAMICS_HPP
#define POLYPROP_POLYMER_DYNAMICS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "polyprop/errors.hpp"
#include "polyprop/lattice_state.hpp"

namespace polyprop {

/// External potential. Box(N) places hard walls at sites 0 and N.
struct PotentialSpec {
    enum class Kind { Free, Box };

    Kind kind{Kind::Free};
    int N{0};

    static PotentialSpec free() { return {}; }
    static PotentialSpec box(int n) {
        if (n < 2)
            throw DomainError("PotentialSpec::box: N must be at least 2");
        return {Kind::Box, n};
    }

    bool is_box() const { return kind == Kind::Box; }
};

namespace detail {

// Throws unless psi vanishes everywhere outside the open interior (0, N).
template <typename Scalar>
void require_box_support(const LatticeWavefunction<Scalar>& psi, int N, const char* who) {
    for (int n = psi.window().first; n <= psi.window().last; ++n) {
        if ((n <= 0 || n >= N) && psi.at(n) != std::complex<Scalar>(0))
            throw PreconditionViolation(std::string(who) + ": box state has support at or beyond a wall (site " +
                                        std::to_string(n) + ")");
    }
}

} // namespace detail

/// (H psi)_n = hbar^2/(2 m mu0^2) (2 psi_n - psi_{n+1} - psi_{n-1}) + V_n psi_n.
/// Free output grows the window by one site on each side; box output keeps the
/// input window and vanishes on and beyond the walls.
template <typename Scalar>
LatticeWavefunction<Scalar> apply_hamiltonian(const LatticeWavefunction<Scalar>& psi, const PotentialSpec& potential) {
    const Scalar c = psi.params().energy_scale() / Scalar(2);
    IndexRange out_window = psi.window();
    if (potential.is_box()) {
        if (!psi.window().contains(IndexRange(0, potential.N)))
            throw PreconditionViolation("apply_hamiltonian: box state window must cover sites 0..N");
        detail::require_box_support(psi, potential.N, "apply_hamiltonian");
    } else {
        out_window = out_window.expanded(1);
    }

    LatticeWavefunction<Scalar> out(psi.lattice().with_window(out_window));
    for (int n = out_window.first; n <= out_window.last; ++n) {
        if (potential.is_box() && (n <= 0 || n >= potential.N))
            continue;
        out[n] = c * (Scalar(2) * psi.at(n) - psi.at(n + 1) - psi.at(n - 1));
    }
    return out;
}

/// E(p) = hbar^2/(m mu0^2) (1 - cos(mu0 p / hbar)).
template <typename Scalar>
Scalar dispersion_energy(const PhysicalParams<Scalar>& params, Scalar p) {
    using std::cos;
    using std::isfinite;
    if (!isfinite(p))
        throw DomainError("dispersion_energy: momentum must be finite");
    return params.energy_scale() * (Scalar(1) - cos(params.mu0() * p / params.hbar()));
}

/// Inverse branch p_E in [0, pi hbar/mu0] of the dispersion relation.
template <typename Scalar>
Scalar dispersion_momentum(const PhysicalParams<Scalar>& params, Scalar energy) {
    using std::acos;
    const Scalar top = Scalar(2) * params.energy_scale();
    if (!(energy >= Scalar(0) && energy <= top))
        throw DomainError("dispersion_momentum: energy outside the band [0, 2 hbar^2/(m mu0^2)]");
    return params.hbar() / params.mu0() * acos(Scalar(1) - energy / params.energy_scale());
}

/// psi_0..psi_{n_steps} of psi_{n+1} = 2 eps psi_n - psi_{n-1}, with
/// eps = 1 - m mu0^2 E / hbar^2.
template <typename Scalar>
ComplexVector<Scalar> recurrence_solve(Scalar energy, std::complex<Scalar> psi0, std::complex<Scalar> psi1, int n_steps,
                                       const PhysicalParams<Scalar>& params) {
    if (n_steps < 2)
        throw UsageError("recurrence_solve: need at least two steps");
    const Scalar eps = Scalar(1) - energy / params.energy_scale();
    ComplexVector<Scalar> out(n_steps + 1);
    out[0] = psi0;
    out[1] = psi1;
    for (int n = 1; n < n_steps; ++n)
        out[n + 1] = Scalar(2) * eps * out[n] - out[n - 1];
    return out;
}

/// Exact spectrum of the box of N sites: E_l = hbar^2/(m mu0^2)(1 - cos(l pi/N))
/// and psi_l(n) = sqrt(2/N) sin(l pi n/N), l = 1..N-1, n = 0..N.
template <typename Scalar = double>
struct BoxSpectrum {
    int N{0};
    PhysicalParams<Scalar> params;
    RealVector<Scalar> energies;      // size N-1, index l-1
    RealMatrix<Scalar> eigenvectors;  // (N-1) x (N+1), row l-1 holds psi_l(0..N)

    Scalar energy(int l) const { return energies[l - 1]; }

    LatticeWavefunction<Scalar> eigenstate(int l) const {
        LatticeWavefunction<Scalar> psi(Lattice<Scalar>(params, 0, N));
        for (int n = 0; n <= N; ++n)
            psi[n] = eigenvectors(l - 1, n);
        return psi;
    }
};

template <typename Scalar>
BoxSpectrum<Scalar> box_spectrum(int N, const PhysicalParams<Scalar>& params) {
    if (N < 2)
        throw DomainError("box_spectrum: N must be at least 2");
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    BoxSpectrum<Scalar> s;
    s.N = N;
    s.params = params;
    s.energies.resize(N - 1);
    s.eigenvectors = RealMatrix<Scalar>::Zero(N - 1, N + 1);
    const Scalar amp = sqrt(Scalar(2) / Scalar(N));
    for (int l = 1; l < N; ++l) {
        s.energies[l - 1] = params.energy_scale() * (Scalar(1) - cos(Scalar(l) * pi / Scalar(N)));
        // walls stay exactly zero
        for (int n = 1; n < N; ++n) {
            const long phase = (static_cast<long>(l) * n) % (2L * N);
            if (phase % N != 0)
                s.eigenvectors(l - 1, n) = amp * sin(Scalar(phase) * pi / Scalar(N));
        }
    }
    return s;
}

} // namespace polyprop

#endif // POLYPROP_POLYMER_DYNAMICS_HPP
