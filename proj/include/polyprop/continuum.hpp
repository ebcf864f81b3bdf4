#ifndef POLYPROP_CONTINUUM_HPP
#define POLYPROP_CONTINUUM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "polyprop/errors.hpp"
#include "polyprop/lattice_state.hpp"
#include "polyprop/propagators.hpp"
#include "polyprop/special_functions.hpp"
#include "polyprop/summation.hpp"

namespace polyprop {

// ---------------------------------------------------------------------------
// Pointwise sweep of k / mu0 against the continuum kernel

template <typename Scalar = double>
struct SweepPoint {
    Scalar mu0{0};
    int l{0};
    Scalar z{0};
    Scalar abs_error{0};
};

/// For each mu0 with l = dx/mu0 an integer, |free_kernel(l, 0, dt)/mu0 - K_sch(dx, 0, dt)|.
template <typename Scalar>
std::vector<SweepPoint<Scalar>> continuum_sweep(Scalar dx, Scalar dt, const std::vector<Scalar>& mu0_list,
                                                Scalar hbar = Scalar(1), Scalar mass = Scalar(1)) {
    using std::abs;
    using std::round;
    if (!(dt > Scalar(0)))
        throw DomainError("continuum_sweep: dt must be positive");
    std::vector<SweepPoint<Scalar>> out;
    out.reserve(mu0_list.size());
    for (Scalar mu0 : mu0_list) {
        const PhysicalParams<Scalar> params(hbar, mass, mu0);
        const Scalar ratio = dx / mu0;
        const Scalar nearest = round(ratio);
        if (abs(ratio - nearest) > Scalar(1e-9) * std::max(Scalar(1), abs(ratio)))
            throw UsageError("continuum_sweep: mu0 does not divide the separation dx");
        const int l = static_cast<int>(nearest);
        const auto polymer = free_kernel(l, 0, dt, params) / mu0;
        const auto continuum = schrodinger_free_kernel(dx, Scalar(0), dt, params);
        out.push_back({mu0, l, dimensionless_time(params, dt), std::abs(polymer - continuum)});
    }
    return out;
}

/// log2(error_k / error_{k+1}) for consecutive sweep points; the last entry is empty.
template <typename Scalar>
std::vector<std::optional<Scalar>> empirical_orders(const std::vector<SweepPoint<Scalar>>& points) {
    std::vector<std::optional<Scalar>> out(points.size());
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        using std::log2;
        out[k] = log2(points[k].abs_error / points[k + 1].abs_error);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Packet-smeared comparisons

/// Normalized Gaussian (2 pi w^2)^{-1/4} exp(-(x - c)^2/(4 w^2) + i k0 x).
template <typename Scalar = double>
struct GaussianPacket {
    Scalar center{0};
    Scalar width{1};
    Scalar wavenumber{0};

    std::complex<Scalar> operator()(Scalar x) const {
        using std::exp;
        using std::pow;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        const Scalar d = x - center;
        return std::polar(pow(Scalar(2) * pi * width * width, Scalar(-0.25)) * exp(-d * d / (Scalar(4) * width * width)),
                          wavenumber * x);
    }

    /// Exact free Schrodinger evolution of the packet.
    std::complex<Scalar> free_evolved(Scalar x, Scalar dt, const PhysicalParams<Scalar>& params) const {
        using C = std::complex<Scalar>;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        const Scalar v = params.hbar() * wavenumber / params.mass();
        const C a(Scalar(1), params.hbar() * dt / (Scalar(2) * params.mass() * width * width));
        const Scalar d = x - center - v * dt;
        const C exponent = -d * d / (Scalar(4) * width * width * a) + C(0, wavenumber * (x - v * dt / Scalar(2)));
        return std::pow(Scalar(2) * pi * width * width, Scalar(-0.25)) / std::sqrt(a) * std::exp(exponent);
    }
};

/// max_j |polymer evolution of the sampled packet - exact continuum packet| on
/// the lattice, the distributional form of k/mu0 -> K_sch.
template <typename Scalar>
Scalar free_packet_continuum_error(const GaussianPacket<Scalar>& packet, Scalar dt,
                                   const PhysicalParams<Scalar>& params, Scalar span_widths = Scalar(12)) {
    using std::ceil;
    using std::floor;
    const Scalar mu0 = params.mu0();
    const int lo = static_cast<int>(floor((packet.center - span_widths * packet.width) / mu0));
    const int hi = static_cast<int>(ceil((packet.center + span_widths * packet.width) / mu0));
    const auto psi0 = LatticeWavefunction<Scalar>::sampled(Lattice<Scalar>(params, lo, hi), packet);

    // the evolved packet moves by v dt and spreads; cover it generously
    const Scalar v = params.hbar() * packet.wavenumber / params.mass();
    const Scalar spread = packet.width * std::abs(std::complex<Scalar>(
                                             1, params.hbar() * dt / (Scalar(2) * params.mass() * packet.width * packet.width)));
    const int out_lo = static_cast<int>(floor((packet.center + v * dt - span_widths * spread) / mu0));
    const int out_hi = static_cast<int>(ceil((packet.center + v * dt + span_widths * spread) / mu0));
    const auto psi = evolve(psi0, PropagatorKernel<Scalar>::free(params), dt, IndexRange(out_lo, out_hi));

    Scalar err(0);
    for (int n = out_lo; n <= out_hi; ++n)
        err = std::max(err, std::abs(psi.at(n) - packet.free_evolved(Scalar(n) * mu0, dt, params)));
    return err;
}

/// Continuum box modes c_n = sqrt(2/L) int_0^L psi0(x) sin(n pi x/L) dx on the
/// box [0, L], by composite Simpson quadrature on a fixed sample set.
template <typename Scalar>
class BoxModeProjector {
public:
    BoxModeProjector(const GaussianPacket<Scalar>& packet, Scalar length, int panels = 16384)
        : length_(length), panels_(panels + panels % 2), samples_(panels_ + 1) {
        const Scalar h = length_ / Scalar(panels_);
        for (int i = 0; i <= panels_; ++i)
            samples_[i] = packet(Scalar(i) * h);
    }

    std::complex<Scalar> operator()(int n) const {
        using std::sin;
        using std::sqrt;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        const Scalar h = length_ / Scalar(panels_);
        CompensatedSum<std::complex<Scalar>> s;
        for (int i = 0; i <= panels_; ++i) {
            const Scalar w = (i == 0 || i == panels_) ? Scalar(1) : (i % 2 ? Scalar(4) : Scalar(2));
            const long phase = (static_cast<long>(n) * i) % (2L * panels_);
            s.add(w * samples_[i] * sin(Scalar(phase) * pi / Scalar(panels_)));
        }
        return sqrt(Scalar(2) / length_) * s.value() * h / Scalar(3);
    }

private:
    Scalar length_;
    int panels_;
    std::vector<std::complex<Scalar>> samples_;
};

/// Mode count at which two consecutive |c_n| past the spectral peak drop below
/// 1e-14 of the largest coefficient seen. Two are needed because a packet
/// centred in the box has vanishing even modes.
template <typename Scalar>
int choose_mode_cutoff(const GaussianPacket<Scalar>& packet, Scalar length, int limit = 2048) {
    using std::abs;
    const BoxModeProjector<Scalar> project(packet, length);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const int peak = static_cast<int>(abs(packet.wavenumber) * length / pi) + 1;
    Scalar largest(0);
    bool previous_small = false;
    for (int n = 1; n <= limit; ++n) {
        const Scalar c = std::abs(project(n));
        largest = std::max(largest, c);
        const bool small = c < Scalar(1e-14) * largest;
        if (n > peak && small && previous_small)
            return n;
        previous_small = small;
    }
    return limit;
}

/// Continuum box evolution of the packet, sampled at the lattice sites 0..N.
template <typename Scalar>
LatticeWavefunction<Scalar> schrodinger_box_packet(const GaussianPacket<Scalar>& packet, int N, int mode_cutoff,
                                                   Scalar dt, const PhysicalParams<Scalar>& params) {
    using std::sin;
    using std::sqrt;
    if (N < 2 || mode_cutoff < 1)
        throw DomainError("schrodinger_box_packet: need N >= 2 and mode_cutoff >= 1");
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar length = Scalar(N) * params.mu0();
    const BoxModeProjector<Scalar> project(packet, length);
    std::vector<std::complex<Scalar>> coeffs(mode_cutoff);
    for (int n = 1; n <= mode_cutoff; ++n)
        coeffs[n - 1] = project(n);
    LatticeWavefunction<Scalar> psi(Lattice<Scalar>(params, 0, N));
    for (int j = 1; j < N; ++j) {
        CompensatedSum<std::complex<Scalar>> s;
        for (int n = 1; n <= mode_cutoff; ++n) {
            const Scalar k = Scalar(n) * pi / length;
            const Scalar energy = params.hbar() * params.hbar() * k * k / (Scalar(2) * params.mass());
            s.add(coeffs[n - 1] * sin(k * Scalar(j) * params.mu0()) *
                  std::polar(Scalar(1), -energy * dt / params.hbar()));
        }
        psi[j] = sqrt(Scalar(2) / length) * s.value();
    }
    return psi;
}

/// max_j |polymer box evolution of the sampled packet - continuum box evolution|.
template <typename Scalar>
Scalar box_packet_continuum_error(const GaussianPacket<Scalar>& packet, int N, Scalar dt,
                                  const PhysicalParams<Scalar>& params) {
    const Scalar length = Scalar(N) * params.mu0();
    const int cutoff = choose_mode_cutoff(packet, length);
    auto psi0 = LatticeWavefunction<Scalar>::sampled(Lattice<Scalar>(params, 0, N), packet);
    psi0[0] = 0;
    psi0[N] = 0;
    const auto polymer = evolve(psi0, PropagatorKernel<Scalar>::box_spectral(N, params), dt, IndexRange(0, N));
    const auto continuum = schrodinger_box_packet(packet, N, cutoff, dt, params);
    Scalar err(0);
    for (int j = 0; j <= N; ++j)
        err = std::max(err, std::abs(polymer.at(j) - continuum.at(j)));
    return err;
}

} // namespace polyprop

#endif // POLYPROP_CONTINUUM_HPP
