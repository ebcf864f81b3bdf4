#ifndef POLYPROP_PROPAGATORS_HPP
#define POLYPROP_PROPAGATORS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include <Eigen/Core>

#include "polyprop/errors.hpp"
#include "polyprop/lattice_state.hpp"
#include "polyprop/polymer_dynamics.hpp"
#include "polyprop/special_functions.hpp"
#include "polyprop/summation.hpp"

namespace polyprop {

// ---------------------------------------------------------------------------
// Kernel systems

struct FreeSystem {};
struct BoxSpectralSystem {
    int N;
};
struct BoxImagesSystem {
    int N;
    int image_cutoff;
};
struct PeriodicSystem {
    int N;
    int image_cutoff;
};
/// Continuum free kernel sampled on the lattice and scaled by mu0.
struct SchrodingerFreeSystem {};
/// Continuum box evolution; only available in packet-smeared form.
struct SchrodingerBoxPacketSystem {
    int N;
    int mode_cutoff;
};

using KernelSystem = std::variant<FreeSystem, BoxSpectralSystem, BoxImagesSystem, PeriodicSystem,
                                  SchrodingerFreeSystem, SchrodingerBoxPacketSystem>;

namespace detail {

// J_m(z) for signed order and signed argument, from one table at |z|.
template <typename Scalar>
class SignedBessel {
public:
    SignedBessel(Scalar z, int max_order) : table_(bessel_table(std::abs(z), max_order)), flip_(z < Scalar(0)) {}

    Scalar operator()(long m) const {
        if (std::abs(m) > table_.max_order)
            return Scalar(0);
        Scalar v = table_(static_cast<int>(m));
        if (flip_ && (std::abs(m) & 1))
            v = -v;
        return v;
    }

    // i^m J_m(z)
    std::complex<Scalar> term(long m) const { return ipow<Scalar>(m) * (*this)(m); }

    // i^m dJ_m/dz
    std::complex<Scalar> dterm(long m) const {
        return ipow<Scalar>(m) * (((*this)(m - 1) - (*this)(m + 1)) / Scalar(2));
    }

private:
    BesselTable<Scalar> table_;
    bool flip_;
};

inline int max_abs_difference(const IndexRange& a, const IndexRange& b) {
    return std::max(std::abs(a.last - b.first), std::abs(a.first - b.last));
}

inline int max_abs(const IndexRange& a) { return std::max(std::abs(a.first), std::abs(a.last)); }

template <typename Scalar>
void check_box_indices(int j, int r, int N, const char* who) {
    if (j < 0 || j > N || r < 0 || r > N)
        throw DomainError(std::string(who) + ": site index outside 0..N");
}

// e^{-iz} (dJ/dz-part) assembled for one image term: d/dz [i^m J_m e^{-iz}].
template <typename Scalar>
std::complex<Scalar> image_term(const SignedBessel<Scalar>& jb, long m, bool derivative) {
    if (!derivative)
        return jb.term(m);
    return jb.dterm(m) - std::complex<Scalar>(0, 1) * jb.term(m);
}

template <typename Scalar>
std::complex<Scalar> periodic_sum(const SignedBessel<Scalar>& jb, int j, int r, int N, int cutoff, bool derivative) {
    CompensatedSum<std::complex<Scalar>> s;
    for (int k = -cutoff; k <= cutoff; ++k)
        s.add(image_term(jb, static_cast<long>(j) - r - 2L * k * N, derivative));
    return s.value();
}

template <typename Scalar>
std::complex<Scalar> images_sum(const SignedBessel<Scalar>& jb, int j, int r, int N, int cutoff, bool derivative) {
    CompensatedSum<std::complex<Scalar>> s;
    for (int k = -cutoff; k <= cutoff; ++k) {
        s.add(image_term(jb, static_cast<long>(j) - r - 2L * k * N, derivative));
        s.add(-image_term(jb, static_cast<long>(j) + r - 2L * k * N, derivative));
    }
    return s.value();
}

template <typename Scalar>
std::complex<Scalar> box_spectral_sum(int j, int r, Scalar z, int N, bool derivative) {
    using std::cos;
    using std::sin;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const auto wrapped_sin = [&](long a) {
        const long w = ((a % (2L * N)) + 2L * N) % (2L * N);
        return w % N == 0 ? Scalar(0) : sin(Scalar(w) * pi / Scalar(N));
    };
    CompensatedSum<std::complex<Scalar>> s;
    for (int n = 1; n < N; ++n) {
        const Scalar omega = Scalar(1) - cos(Scalar(n) * pi / Scalar(N));
        const Scalar amp = Scalar(2) / Scalar(N) * wrapped_sin(static_cast<long>(n) * j) *
                           wrapped_sin(static_cast<long>(n) * r);
        std::complex<Scalar> t = amp * std::polar(Scalar(1), -z * omega);
        if (derivative)
            t *= std::complex<Scalar>(0, -omega);
        s.add(t);
    }
    return s.value();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Closed-form kernels

/// k(x_j, t; x_r, t0) = i^{r-j} J_{r-j}(z) e^{-iz}, z = hbar dt/(m mu0^2).
/// Evaluated from |r - j|, so it is symmetric in (j, r) bit for bit.
template <typename Scalar>
std::complex<Scalar> free_kernel(int j, int r, Scalar dt, const PhysicalParams<Scalar>& params) {
    const Scalar z = dimensionless_time(params, dt);
    const int order = std::abs(r - j);
    const detail::SignedBessel<Scalar> jb(z, order);
    return jb.term(order) * std::polar(Scalar(1), -z);
}

/// Spectral box kernel (2/N) sum_n sin(n pi j/N) sin(n pi r/N) e^{-iz(1 - cos(n pi/N))}.
template <typename Scalar>
std::complex<Scalar> box_spectral_kernel(int j, int r, Scalar dt, int N, const PhysicalParams<Scalar>& params) {
    if (N < 2)
        throw DomainError("box_spectral_kernel: N must be at least 2");
    detail::check_box_indices<Scalar>(j, r, N, "box_spectral_kernel");
    return detail::box_spectral_sum(j, r, dimensionless_time(params, dt), N, false);
}

/// Smallest image cutoff K for which every dropped image has order beyond W(z).
template <typename Scalar>
int minimal_image_cutoff(int N, Scalar z, int j, int r) {
    const int num = truncation_window(z) + std::abs(j) + std::abs(r);
    return (num + 2 * N - 1) / (2 * N) + 1;
}

/// Periodic kernel e^{-iz} sum_{k=-K}^{K} i^{j-r-2kN} J_{j-r-2kN}(z).
template <typename Scalar>
std::complex<Scalar> periodic_kernel(int j, int r, Scalar dt, int N, int image_cutoff,
                                     const PhysicalParams<Scalar>& params) {
    if (N < 2)
        throw DomainError("periodic_kernel: N must be at least 2");
    if (image_cutoff < 1)
        throw DomainError("periodic_kernel: image_cutoff must be positive");
    const Scalar z = dimensionless_time(params, dt);
    const int max_order = std::abs(j - r) + 2 * image_cutoff * N;
    const detail::SignedBessel<Scalar> jb(z, max_order);
    return detail::periodic_sum(jb, j, r, N, image_cutoff, false) * std::polar(Scalar(1), -z);
}

/// Box kernel by the method of images: k_P(j, r) - k_P(j, -r).
template <typename Scalar>
std::complex<Scalar> box_images_kernel(int j, int r, Scalar dt, int N, int image_cutoff,
                                       const PhysicalParams<Scalar>& params) {
    if (N < 2)
        throw DomainError("box_images_kernel: N must be at least 2");
    if (image_cutoff < 1)
        throw DomainError("box_images_kernel: image_cutoff must be positive");
    detail::check_box_indices<Scalar>(j, r, N, "box_images_kernel");
    const Scalar z = dimensionless_time(params, dt);
    const int max_order = j + r + 2 * image_cutoff * N;
    const detail::SignedBessel<Scalar> jb(z, max_order);
    return detail::images_sum(jb, j, r, N, image_cutoff, false) * std::polar(Scalar(1), -z);
}

/// Diagonal phase e^{-i E(p) dt / hbar} of the momentum-space propagator.
template <typename Scalar>
std::complex<Scalar> momentum_kernel_phase(Scalar p, Scalar dt, const PhysicalParams<Scalar>& params) {
    using std::abs;
    if (!(abs(p) < params.momentum_bound()))
        throw DomainError("momentum_kernel_phase: momentum outside the Brillouin interval");
    return std::polar(Scalar(1), -dispersion_energy(params, p) * dt / params.hbar());
}

/// Evolution in the momentum representation: pointwise phase on the grid.
template <typename Scalar>
ComplexVector<Scalar> evolve_momentum(const ComplexVector<Scalar>& values, const MomentumGrid<Scalar>& grid, Scalar dt) {
    if (values.size() != grid.size())
        throw UsageError("evolve_momentum: value count must match the grid");
    ComplexVector<Scalar> out(values.size());
    for (int k = 0; k < grid.size(); ++k)
        out[k] = values[k] * momentum_kernel_phase(grid[k], dt, grid.params());
    return out;
}

/// Continuum free propagator sqrt(m/(2 pi i hbar dt)) exp(i m (xj - xr)^2 / (2 hbar dt)),
/// with sqrt(1/i) = e^{-i pi/4}.
template <typename Scalar>
std::complex<Scalar> schrodinger_free_kernel(Scalar xj, Scalar xr, Scalar dt, const PhysicalParams<Scalar>& params) {
    using std::sqrt;
    if (!(dt > Scalar(0)))
        throw DomainError("schrodinger_free_kernel: dt must be positive");
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar modulus = sqrt(params.mass() / (Scalar(2) * pi * params.hbar() * dt));
    const Scalar dx = xj - xr;
    const Scalar phase = params.mass() * dx * dx / (Scalar(2) * params.hbar() * dt) - pi / Scalar(4);
    return std::polar(modulus, phase);
}

/// Free-particle composition window [min(j,r) - W(za) - W(zb), max(j,r) + W(za) + W(zb)].
template <typename Scalar>
IndexRange free_composition_window(int j, int r, Scalar za, Scalar zb) {
    const int pad = truncation_window(za) + truncation_window(zb);
    return {std::min(j, r) - pad, std::max(j, r) + pad};
}

// ---------------------------------------------------------------------------
// Kernel value object

template <typename Scalar = double>
class PropagatorKernel {
public:
    using Complex = std::complex<Scalar>;
    using Matrix = ComplexMatrix<Scalar>;

    PropagatorKernel(KernelSystem system, PhysicalParams<Scalar> params) : system_(system), params_(params) {
        std::visit(
            [](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (requires { s.N; }) {
                    if (s.N < 2)
                        throw DomainError("PropagatorKernel: N must be at least 2");
                }
                if constexpr (requires { s.image_cutoff; }) {
                    if (s.image_cutoff < 1)
                        throw DomainError("PropagatorKernel: image_cutoff must be positive");
                }
                if constexpr (std::is_same_v<S, SchrodingerBoxPacketSystem>) {
                    if (s.mode_cutoff < 1)
                        throw DomainError("PropagatorKernel: mode_cutoff must be positive");
                }
            },
            system_);
    }

    static PropagatorKernel free(PhysicalParams<Scalar> p) { return {FreeSystem{}, p}; }
    static PropagatorKernel box_spectral(int N, PhysicalParams<Scalar> p) { return {BoxSpectralSystem{N}, p}; }
    static PropagatorKernel box_images(int N, int cutoff, PhysicalParams<Scalar> p) {
        return {BoxImagesSystem{N, cutoff}, p};
    }
    static PropagatorKernel periodic(int N, int cutoff, PhysicalParams<Scalar> p) {
        return {PeriodicSystem{N, cutoff}, p};
    }
    static PropagatorKernel schrodinger_free(PhysicalParams<Scalar> p) { return {SchrodingerFreeSystem{}, p}; }

    const KernelSystem& system() const { return system_; }
    const PhysicalParams<Scalar>& params() const { return params_; }

    std::string name() const {
        return std::visit(
            [](const auto& s) -> std::string {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, FreeSystem>) return "free";
                else if constexpr (std::is_same_v<S, BoxSpectralSystem>) return "box";
                else if constexpr (std::is_same_v<S, BoxImagesSystem>) return "box-images";
                else if constexpr (std::is_same_v<S, PeriodicSystem>) return "periodic";
                else if constexpr (std::is_same_v<S, SchrodingerFreeSystem>) return "schrodinger-free";
                else return "schrodinger-box-packet";
            },
            system_);
    }

    /// Sites 0..N for the hard-wall systems, nothing otherwise.
    std::optional<int> box_size() const {
        if (const auto* s = std::get_if<BoxSpectralSystem>(&system_)) return s->N;
        if (const auto* s = std::get_if<BoxImagesSystem>(&system_)) return s->N;
        if (const auto* s = std::get_if<SchrodingerBoxPacketSystem>(&system_)) return s->N;
        return std::nullopt;
    }

    Complex operator()(int j, int r, Scalar dt) const {
        return matrix(IndexRange::single(j), IndexRange::single(r), dt)(0, 0);
    }

    /// Analytic partial derivative with respect to the final time t.
    Complex time_derivative(int j, int r, Scalar dt) const {
        return tabulate(IndexRange::single(j), IndexRange::single(r), dt, true)(0, 0);
    }

    /// Kernel values k(j, t0 + dt; r, t0) for j in rows, r in cols.
    Matrix matrix(IndexRange rows, IndexRange cols, Scalar dt) const { return tabulate(rows, cols, dt, false); }

    Matrix time_derivative_matrix(IndexRange rows, IndexRange cols, Scalar dt) const {
        return tabulate(rows, cols, dt, true);
    }

private:
    Matrix tabulate(IndexRange rows, IndexRange cols, Scalar dt, bool derivative) const {
        Matrix out(rows.size(), cols.size());
        const Scalar z = dimensionless_time(params_, dt);
        const Scalar dzdt = dimensionless_time(params_, Scalar(1));
        const Complex envelope = std::polar(Scalar(1), -z);

        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, FreeSystem>) {
                    const detail::SignedBessel<Scalar> jb(z, detail::max_abs_difference(rows, cols) + 1);
                    for (int j = rows.first; j <= rows.last; ++j)
                        for (int r = cols.first; r <= cols.last; ++r) {
                            const long m = std::abs(r - j);
                            out(j - rows.first, r - cols.first) =
                                detail::image_term(jb, m, derivative) * envelope * (derivative ? dzdt : Scalar(1));
                        }
                } else if constexpr (std::is_same_v<S, PeriodicSystem>) {
                    const int max_order =
                        detail::max_abs(rows) + detail::max_abs(cols) + 2 * s.image_cutoff * s.N + 1;
                    const detail::SignedBessel<Scalar> jb(z, max_order);
                    for (int j = rows.first; j <= rows.last; ++j)
                        for (int r = cols.first; r <= cols.last; ++r)
                            out(j - rows.first, r - cols.first) =
                                detail::periodic_sum(jb, j, r, s.N, s.image_cutoff, derivative) * envelope *
                                (derivative ? dzdt : Scalar(1));
                } else if constexpr (std::is_same_v<S, BoxImagesSystem>) {
                    check_box_ranges(rows, cols, s.N);
                    const int max_order =
                        detail::max_abs(rows) + detail::max_abs(cols) + 2 * s.image_cutoff * s.N + 1;
                    const detail::SignedBessel<Scalar> jb(z, max_order);
                    for (int j = rows.first; j <= rows.last; ++j)
                        for (int r = cols.first; r <= cols.last; ++r)
                            out(j - rows.first, r - cols.first) =
                                detail::images_sum(jb, j, r, s.N, s.image_cutoff, derivative) * envelope *
                                (derivative ? dzdt : Scalar(1));
                } else if constexpr (std::is_same_v<S, BoxSpectralSystem>) {
                    check_box_ranges(rows, cols, s.N);
                    for (int j = rows.first; j <= rows.last; ++j)
                        for (int r = cols.first; r <= cols.last; ++r)
                            out(j - rows.first, r - cols.first) =
                                detail::box_spectral_sum(j, r, z, s.N, derivative) * (derivative ? dzdt : Scalar(1));
                } else if constexpr (std::is_same_v<S, SchrodingerFreeSystem>) {
                    const Scalar mu0 = params_.mu0();
                    for (int j = rows.first; j <= rows.last; ++j)
                        for (int r = cols.first; r <= cols.last; ++r) {
                            const Scalar dx = Scalar(j - r) * mu0;
                            Complex k = mu0 * schrodinger_free_kernel(Scalar(j) * mu0, Scalar(r) * mu0, dt, params_);
                            if (derivative) {
                                const Scalar b = params_.mass() * dx * dx / (Scalar(2) * params_.hbar());
                                k *= Complex(-Scalar(1) / (Scalar(2) * dt), -b / (dt * dt));
                            }
                            out(j - rows.first, r - cols.first) = k;
                        }
                } else {
                    throw UsageError(
                        "PropagatorKernel: the continuum box kernel is only defined on wave packets; "
                        "use schrodinger_box_packet");
                }
            },
            system_);
        return out;
    }

    static void check_box_ranges(const IndexRange& rows, const IndexRange& cols, int N) {
        const IndexRange domain(0, N);
        if (!domain.contains(rows) || !domain.contains(cols))
            throw DomainError("PropagatorKernel: box site index outside 0..N");
    }

    KernelSystem system_;
    PhysicalParams<Scalar> params_;
};

// ---------------------------------------------------------------------------
// Evolution

/// psi(x_j, t0 + dt) = sum_r k(j, r, dt) psi_r for j in out_window.
template <typename Scalar>
LatticeWavefunction<Scalar> evolve(const LatticeWavefunction<Scalar>& psi0, const PropagatorKernel<Scalar>& kernel,
                                   Scalar dt, IndexRange out_window) {
    if (!(psi0.params() == kernel.params()))
        throw UsageError("evolve: state and kernel have different parameters");

    IndexRange cols = psi0.window();
    if (const auto N = kernel.box_size()) {
        detail::require_box_support(psi0, *N, "evolve");
        if (!IndexRange(0, *N).contains(out_window))
            throw UsageError("evolve: box output window must lie within 0..N");
        cols = IndexRange(1, *N - 1);
    }

    LatticeWavefunction<Scalar> out(psi0.lattice().with_window(out_window));

    if (const auto* box = std::get_if<BoxSpectralSystem>(&kernel.system())) {
        // Same finite spectral sum, factored through the eigenbasis.
        const auto spec = box_spectrum(box->N, kernel.params());
        ComplexVector<Scalar> coeffs = ComplexVector<Scalar>::Zero(box->N - 1);
        for (int l = 1; l < box->N; ++l) {
            CompensatedSum<std::complex<Scalar>> s;
            for (int r = 1; r < box->N; ++r)
                s.add(spec.eigenvectors(l - 1, r) * psi0.at(r));
            coeffs[l - 1] = s.value() * std::polar(Scalar(1), -spec.energy(l) * dt / kernel.params().hbar());
        }
        for (int j = out_window.first; j <= out_window.last; ++j) {
            CompensatedSum<std::complex<Scalar>> s;
            for (int l = 1; l < box->N; ++l)
                s.add(spec.eigenvectors(l - 1, j) * coeffs[l - 1]);
            out[j] = s.value();
        }
        return out;
    }

    const auto k = kernel.matrix(out_window, cols, dt);
    for (int j = out_window.first; j <= out_window.last; ++j) {
        CompensatedSum<std::complex<Scalar>> s;
        for (int r = cols.first; r <= cols.last; ++r)
            s.add(k(j - out_window.first, r - cols.first) * psi0.at(r));
        out[j] = s.value();
    }
    return out;
}

} // namespace polyprop

#endif // POLYPROP_PROPAGATORS_HPP
