#ifndef POLYPROP_LATTICE_STATE_HPP
#define POLYPROP_LATTICE_STATE_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "polyprop/errors.hpp"
#include "polyprop/summation.hpp"

namespace polyprop {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// hbar, mass and lattice spacing mu0; all strictly positive and finite.
template <typename Scalar = double>
class PhysicalParams {
public:
    PhysicalParams() = default;
    PhysicalParams(Scalar hbar, Scalar mass, Scalar mu0) : hbar_(hbar), mass_(mass), mu0_(mu0) {
        check(hbar_, "hbar");
        check(mass_, "mass");
        check(mu0_, "mu0");
    }

    Scalar hbar() const { return hbar_; }
    Scalar mass() const { return mass_; }
    Scalar mu0() const { return mu0_; }

    /// hbar^2 / (m mu0^2); the polymer band is [0, 2 * energy_scale()].
    Scalar energy_scale() const { return hbar_ * hbar_ / (mass_ * mu0_ * mu0_); }
    /// pi hbar / mu0, edge of the Brillouin interval.
    Scalar momentum_bound() const { return std::numbers::pi_v<Scalar> * hbar_ / mu0_; }

    PhysicalParams with_mu0(Scalar mu0) const { return {hbar_, mass_, mu0}; }

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;

private:
    static void check(Scalar v, const char* name) {
        using std::isfinite;
        if (!isfinite(v) || !(v > Scalar(0)))
            throw DomainError(std::string("PhysicalParams: ") + name + " must be positive and finite");
    }

    Scalar hbar_{1};
    Scalar mass_{1};
    Scalar mu0_{1};
};

/// z = hbar dt / (m mu0^2), the argument of every Bessel kernel.
template <typename Scalar>
Scalar dimensionless_time(const PhysicalParams<Scalar>& params, Scalar dt) {
    return params.hbar() * dt / (params.mass() * params.mu0() * params.mu0());
}

/// Closed integer interval [first, last] of site indices.
struct IndexRange {
    int first{0};
    int last{0};

    IndexRange() = default;
    IndexRange(int a, int b) : first(a), last(b) {
        if (first > last)
            throw UsageError("IndexRange: first must not exceed last");
    }
    static IndexRange single(int n) { return {n, n}; }

    int size() const { return last - first + 1; }
    bool contains(int n) const { return n >= first && n <= last; }
    bool contains(const IndexRange& o) const { return o.first >= first && o.last <= last; }
    IndexRange expanded(int pad) const { return {first - pad, last + pad}; }

    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Fixed lattice x_n = n mu0 restricted to a finite index window.
template <typename Scalar = double>
struct Lattice {
    PhysicalParams<Scalar> params;
    IndexRange window;

    Lattice() = default;
    Lattice(PhysicalParams<Scalar> p, IndexRange w) : params(p), window(w) {}
    Lattice(PhysicalParams<Scalar> p, int n_min, int n_max) : params(p), window(n_min, n_max) {}

    int n_min() const { return window.first; }
    int n_max() const { return window.last; }
    int size() const { return window.size(); }
    Scalar position(int n) const { return Scalar(n) * params.mu0(); }

    Lattice with_window(IndexRange w) const { return {params, w}; }

    friend bool operator==(const Lattice&, const Lattice&) = default;
};

/// Complex amplitudes psi_n on a lattice window; zero outside it.
template <typename Scalar = double>
class LatticeWavefunction {
public:
    using Complex = std::complex<Scalar>;
    using Vector = ComplexVector<Scalar>;

    LatticeWavefunction() = default;
    explicit LatticeWavefunction(Lattice<Scalar> lattice)
        : lattice_(lattice), amplitudes_(Vector::Zero(lattice.size())) {}
    LatticeWavefunction(Lattice<Scalar> lattice, Vector amplitudes)
        : lattice_(lattice), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != lattice_.size())
            throw UsageError("LatticeWavefunction: amplitude count must match the lattice window");
    }

    /// Kronecker state localized at site n.
    static LatticeWavefunction delta(const Lattice<Scalar>& lattice, int n) {
        if (!lattice.window.contains(n))
            throw UsageError("LatticeWavefunction::delta: site outside the window");
        LatticeWavefunction psi(lattice);
        psi.amplitudes_[n - lattice.n_min()] = Complex(1);
        return psi;
    }

    template <typename F>
    static LatticeWavefunction sampled(const Lattice<Scalar>& lattice, F&& f) {
        LatticeWavefunction psi(lattice);
        for (int n = lattice.n_min(); n <= lattice.n_max(); ++n)
            psi.amplitudes_[n - lattice.n_min()] = Complex(f(lattice.position(n)));
        return psi;
    }

    const Lattice<Scalar>& lattice() const { return lattice_; }
    const PhysicalParams<Scalar>& params() const { return lattice_.params; }
    const IndexRange& window() const { return lattice_.window; }
    const Vector& amplitudes() const { return amplitudes_; }
    Vector& amplitudes() { return amplitudes_; }

    /// psi_n, zero outside the window.
    Complex at(int n) const {
        return window().contains(n) ? amplitudes_[n - window().first] : Complex(0);
    }
    Complex& operator[](int n) { return amplitudes_[n - window().first]; }

    Scalar squared_norm() const {
        CompensatedSum<Scalar> s;
        for (const auto& a : amplitudes_)
            s.add(std::norm(a));
        return s.value();
    }
    Scalar norm() const {
        using std::sqrt;
        return sqrt(squared_norm());
    }

    /// Same state on another window, zero padded or truncated.
    LatticeWavefunction on(IndexRange w) const {
        LatticeWavefunction out(lattice_.with_window(w));
        for (int n = w.first; n <= w.last; ++n)
            out.amplitudes_[n - w.first] = at(n);
        return out;
    }

private:
    Lattice<Scalar> lattice_;
    Vector amplitudes_;
};

/// sum_n conj(a_n) b_n; both states must live on the same lattice window.
template <typename Scalar>
std::complex<Scalar> inner_product(const LatticeWavefunction<Scalar>& a, const LatticeWavefunction<Scalar>& b) {
    if (!(a.lattice() == b.lattice()))
        throw UsageError("inner_product: states live on different lattices");
    CompensatedSum<std::complex<Scalar>> s;
    for (Eigen::Index k = 0; k < a.amplitudes().size(); ++k)
        s.add(std::conj(a.amplitudes()[k]) * b.amplitudes()[k]);
    return s.value();
}

/// Midpoint grid p_k = -pi hbar/mu0 + (k + 1/2) (2 pi hbar/mu0)/M on the open
/// Brillouin interval.
template <typename Scalar = double>
class MomentumGrid {
public:
    MomentumGrid(PhysicalParams<Scalar> params, int num_points) : params_(params), m_(num_points) {
        if (m_ < 1)
            throw UsageError("MomentumGrid: need at least one point");
    }

    const PhysicalParams<Scalar>& params() const { return params_; }
    int size() const { return m_; }

    Scalar operator[](int k) const {
        const Scalar bound = params_.momentum_bound();
        return -bound + (Scalar(k) + Scalar(0.5)) * (Scalar(2) * bound) / Scalar(m_);
    }

    RealVector<Scalar> values() const {
        RealVector<Scalar> p(m_);
        for (int k = 0; k < m_; ++k)
            p[k] = (*this)[k];
        return p;
    }

private:
    PhysicalParams<Scalar> params_;
    int m_;
};

/// psi~(p) = sum_n psi_n e^{i n mu0 p / hbar} at an arbitrary momentum.
template <typename Scalar>
std::complex<Scalar> dtft(const LatticeWavefunction<Scalar>& psi, Scalar p) {
    const Scalar theta = psi.params().mu0() * p / psi.params().hbar();
    CompensatedSum<std::complex<Scalar>> s;
    for (int n = psi.window().first; n <= psi.window().last; ++n)
        s.add(psi.at(n) * std::polar(Scalar(1), Scalar(n) * theta));
    return s.value();
}

template <typename Scalar>
ComplexVector<Scalar> to_momentum(const LatticeWavefunction<Scalar>& psi, const MomentumGrid<Scalar>& grid) {
    if (!(psi.params() == grid.params()))
        throw UsageError("to_momentum: grid and state have different parameters");
    ComplexVector<Scalar> out(grid.size());
    for (int k = 0; k < grid.size(); ++k)
        out[k] = dtft(psi, grid[k]);
    return out;
}

/// psi_n = (1/M) sum_k values_k e^{-i n mu0 p_k / hbar}; exact inverse of
/// to_momentum when M >= the lattice window width.
template <typename Scalar>
LatticeWavefunction<Scalar> from_momentum(const ComplexVector<Scalar>& values, const MomentumGrid<Scalar>& grid,
                                          const Lattice<Scalar>& lattice) {
    if (!(lattice.params == grid.params()))
        throw UsageError("from_momentum: grid and lattice have different parameters");
    if (values.size() != grid.size())
        throw UsageError("from_momentum: value count must match the grid");
    if (grid.size() < lattice.size())
        throw UsageError("from_momentum: momentum grid coarser than the lattice window");
    const Scalar scale = lattice.params.mu0() / lattice.params.hbar();
    LatticeWavefunction<Scalar> psi(lattice);
    for (int n = lattice.n_min(); n <= lattice.n_max(); ++n) {
        CompensatedSum<std::complex<Scalar>> s;
        for (int k = 0; k < grid.size(); ++k)
            s.add(values[k] * std::polar(Scalar(1), -Scalar(n) * scale * grid[k]));
        psi[n] = s.value() / Scalar(grid.size());
    }
    return psi;
}

} // namespace polyprop

#endif // POLYPROP_LATTICE_STATE_HPP
