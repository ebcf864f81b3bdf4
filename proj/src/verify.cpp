#include "polyprop/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "polyprop/consistency.hpp"
#include "polyprop/continuum.hpp"
#include "polyprop/errors.hpp"
#include "polyprop/polymer_dynamics.hpp"
#include "polyprop/propagators.hpp"
#include "polyprop/special_functions.hpp"

namespace polyprop {

namespace {

using C = std::complex<double>;
using Kernel = PropagatorKernel<double>;

// Largest deviation seen so far and where; NaN is sticky.
class Worst {
public:
    template <typename Where>
    void update(double v, Where&& where) {
        if (std::isnan(value_))
            return;
        if (std::isnan(v) || v > value_ || where_.empty()) {
            value_ = v;
            where_ = where();
        }
    }
    double value() const { return value_; }
    const std::string& where() const { return where_; }

private:
    double value_ = 0;
    std::string where_;
};

struct Outcome {
    double deviation;
    std::string where;
    double tolerance;
    bool strict = false;
};

using Check = std::function<Outcome(const VerifyOptions&)>;

struct Entry {
    const char* suite;
    const char* property;
    Check run;
};

Outcome done(const Worst& w, double tolerance) { return {w.value(), w.where(), tolerance}; }

double z_to_dt(const PhysicalParams<double>& p, double z) { return z / dimensionless_time(p, 1.0); }

std::vector<double> times_for(const PhysicalParams<double>& p, std::initializer_list<double> zs) {
    std::vector<double> out;
    for (double z : zs)
        out.push_back(z_to_dt(p, z));
    return out;
}

int box_cutoff(int N, double z) { return minimal_image_cutoff(N, z, N, N); }

// ---------------------------------------------------------------------------
// bessel

Outcome bessel_parity(const VerifyOptions&) {
    Worst w;
    for (double z : {0.5, 3.0, 12.0, 40.0}) {
        const auto t = bessel_table(z, 60);
        for (int n = 0; n <= 60; ++n) {
            const double sign = (n & 1) ? -1.0 : 1.0;
            w.update(std::abs(t(-n) - sign * t(n)), [&] { return fmt::format("n={} z={}", n, z); });
        }
    }
    return done(w, 0.0);
}

Outcome bessel_recurrence(const VerifyOptions&) {
    Worst w;
    for (double z : {0.5, 2.0, 10.0, 50.0}) {
        const int top = truncation_window(z);
        const auto t = bessel_table(z, top);
        for (int n = 1; n < top; ++n)
            w.update(std::abs(t(n - 1) + t(n + 1) - 2.0 * n / z * t(n)),
                     [&] { return fmt::format("n={} z={}", n, z); });
    }
    return done(w, 1e-12);
}

Outcome bessel_derivative(const VerifyOptions&) {
    Worst w;
    const double h = 1e-5;
    for (double z : {0.7, 3.1, 9.4})
        for (int n = 0; n <= 12; ++n) {
            const double identity = (bessel_jn(n - 1, z) - bessel_jn(n + 1, z)) / 2;
            const double fd = (bessel_jn(n, z + h) - bessel_jn(n, z - h)) / (2 * h);
            w.update(std::abs(identity - fd), [&] { return fmt::format("n={} z={}", n, z); });
        }
    return done(w, 1e-9);
}

Outcome bessel_sum_of_squares(const VerifyOptions&) {
    Worst w;
    for (double z : {0.1, 1.0, 10.0, 100.0}) {
        const int top = truncation_window(z);
        const auto t = bessel_table(z, top);
        CompensatedSum<double> s;
        s.add(t(0) * t(0));
        for (int n = 1; n <= top; ++n)
            s.add(2 * t(n) * t(n));
        w.update(std::abs(s.value() - 1), [&] { return fmt::format("z={}", z); });
    }
    return done(w, 1e-12);
}

Outcome bessel_normalization(const VerifyOptions&) {
    Worst w;
    for (double z : {1e-9, 0.1, 1.0, 10.0, 100.0, 1000.0})
        w.update(std::abs(bessel_table(z, truncation_window(z)).normalization_defect()),
                 [&] { return fmt::format("z={}", z); });
    return done(w, 1e-13);
}

Outcome bessel_jacobi_anger(const VerifyOptions& o) {
    Worst w;
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> zd(0.0, 50.0), phid(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 20; ++i) {
        const double z = zd(rng), phi = phid(rng);
        w.update(std::abs(jacobi_anger(z, phi, truncation_window(z)) - std::polar(1.0, z * std::cos(phi))),
                 [&] { return fmt::format("z={} phi={}", z, phi); });
    }
    return done(w, 1e-10);
}

// ---------------------------------------------------------------------------
// free

Outcome free_initial(const VerifyOptions& o) {
    Worst w;
    for (int j = -16; j <= 16; ++j)
        for (int r = -16; r <= 16; ++r)
            w.update(std::abs(free_kernel(j, r, 0.0, o.params) - (j == r ? C(1, 0) : C(0, 0))),
                     [&] { return fmt::format("j={} r={}", j, r); });
    return done(w, 1e-14);
}

Outcome free_symmetry(const VerifyOptions& o) {
    Worst w;
    for (double dt : times_for(o.params, {0.1, 1.7, 23.0}))
        for (int j = -8; j <= 8; ++j)
            for (int r = -8; r <= 8; ++r)
                w.update(std::abs(free_kernel(j, r, dt, o.params) - free_kernel(r, j, dt, o.params)),
                         [&] { return fmt::format("j={} r={} dt={}", j, r, dt); });
    return done(w, 0.0);
}

Outcome free_time_reversal(const VerifyOptions& o) {
    Worst w;
    for (double dt : times_for(o.params, {0.1, 1.7, 23.0}))
        for (int j = -8; j <= 8; ++j)
            for (int r = -8; r <= 8; ++r)
                w.update(std::abs(std::conj(free_kernel(j, r, dt, o.params)) - free_kernel(j, r, -dt, o.params)),
                         [&] { return fmt::format("j={} r={} dt={}", j, r, dt); });
    return done(w, 1e-13);
}

Outcome free_unitarity(const VerifyOptions& o) {
    Worst w;
    for (double z : {0.1, 1.0, 10.0, 100.0}) {
        const int top = truncation_window(z);
        const auto col = Kernel::free(o.params).matrix(IndexRange(-top, top), IndexRange::single(0), z_to_dt(o.params, z));
        CompensatedSum<double> s;
        for (Eigen::Index n = 0; n < col.rows(); ++n)
            s.add(std::norm(col(n, 0)));
        w.update(std::abs(s.value() - 1), [&] { return fmt::format("z={}", z); });
    }
    return done(w, 1e-10);
}

Outcome free_composition(const VerifyOptions& o) {
    Worst w;
    const auto k = Kernel::free(o.params);
    for (auto [za, zb] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{10.0, 10.0}})
        for (int j = -4; j <= 4; ++j)
            for (int r = j - 8; r <= j + 8; ++r) {
                const double t1 = z_to_dt(o.params, zb), t = z_to_dt(o.params, za + zb);
                w.update(composition_check(k, j, r, 0.0, t1, t, free_composition_window(j, r, za, zb)),
                         [&] { return fmt::format("j={} r={} t1={} t={}", j, r, t1, t); });
            }
    return done(w, 1e-9);
}

Outcome free_greens(const VerifyOptions& o) {
    const auto rep = greens_residual(Kernel::free(o.params), IndexRange(-8, 8), IndexRange(-8, 8),
                                     times_for(o.params, {0.5, 1.0, 5.0, 20.0}));
    return {rep.max_abs_residual, fmt::format("j={} r={} t={}", rep.j, rep.r, rep.t), 1e-9 * o.params.energy_scale()};
}

Outcome free_greens_fd(const VerifyOptions& o) {
    const auto rep = greens_residual_fd(Kernel::free(o.params), IndexRange(-8, 8), IndexRange(-8, 8),
                                        times_for(o.params, {0.5, 1.0, 5.0, 20.0}), z_to_dt(o.params, 1e-6));
    return {rep.max_abs_residual, fmt::format("j={} r={} t={}", rep.j, rep.r, rep.t), 1e-5 * o.params.energy_scale()};
}

Outcome free_eigenstate_phase(const VerifyOptions& o) {
    const auto& p = o.params;
    const double momentum = 0.38 * p.momentum_bound();
    const double dt = z_to_dt(p, 1.2);
    const auto psi = LatticeWavefunction<double>::sampled(
        Lattice<double>(p, -200, 200), [&](double x) { return std::polar(1.0, x * momentum / p.hbar()); });
    const int top = truncation_window(1.2);
    const IndexRange inner(-200 + top, 200 - top);
    const auto out = evolve(psi, Kernel::free(p), dt, inner);
    const C phase = std::polar(1.0, -dispersion_energy(p, momentum) * dt / p.hbar());
    Worst w;
    for (int n = inner.first; n <= inner.last; ++n)
        w.update(std::abs(out.at(n) - phase * psi.at(n)), [&] { return fmt::format("n={} dt={}", n, dt); });
    return done(w, 1e-8);
}

// ---------------------------------------------------------------------------
// box

std::vector<Kernel> box_kernels(const VerifyOptions& o, double z_max) {
    return {Kernel::box_spectral(o.N, o.params), Kernel::box_images(o.N, box_cutoff(o.N, z_max), o.params)};
}

Outcome box_initial(const VerifyOptions& o) {
    Worst w;
    for (const auto& k : box_kernels(o, 0.0)) {
        const auto m = k.matrix(IndexRange(0, o.N), IndexRange(0, o.N), 0.0);
        for (int j = 0; j <= o.N; ++j)
            for (int r = 0; r <= o.N; ++r) {
                const bool interior = j > 0 && j < o.N;
                const C expected = (interior && j == r) ? C(1, 0) : C(0, 0);
                w.update(std::abs(m(j, r) - expected), [&] { return fmt::format("{} j={} r={}", k.name(), j, r); });
            }
    }
    return done(w, 1e-14);
}

Outcome box_boundary_zeros(const VerifyOptions& o) {
    Worst w;
    const int N = o.N;
    for (double z : {0.5, 2.0, 10.0}) {
        const double dt = z_to_dt(o.params, z);
        for (const auto& k : box_kernels(o, z)) {
            const auto m = k.matrix(IndexRange(0, N), IndexRange(0, N), dt);
            for (int s = 0; s <= N; ++s)
                for (auto [j, r] : {std::pair{0, s}, std::pair{N, s}, std::pair{s, 0}, std::pair{s, N}})
                    w.update(std::abs(m(j, r)),
                             [&] { return fmt::format("{} j={} r={} dt={}", k.name(), j, r, dt); });
        }
    }
    return done(w, 1e-14);
}

Outcome box_spectral_vs_images(const VerifyOptions& o) {
    Worst w;
    const int N = o.N;
    for (double z : {0.5, 2.0, 10.0}) {
        const double dt = z_to_dt(o.params, z);
        const auto spectral = Kernel::box_spectral(N, o.params).matrix(IndexRange(0, N), IndexRange(0, N), dt);
        const auto images =
            Kernel::box_images(N, box_cutoff(N, z), o.params).matrix(IndexRange(0, N), IndexRange(0, N), dt);
        for (int j = 0; j <= N; ++j)
            for (int r = 0; r <= N; ++r)
                w.update(std::abs(spectral(j, r) - images(j, r)),
                         [&] { return fmt::format("j={} r={} dt={}", j, r, dt); });
    }
    return done(w, 1e-10);
}

Outcome box_eigenphase(const VerifyOptions& o) {
    Worst w;
    const auto spec = box_spectrum(o.N, o.params);
    for (const auto& k : box_kernels(o, 5.0))
        for (double dt : times_for(o.params, {0.4, 5.0}))
            for (int l = 1; l < o.N; ++l) {
                const auto psi = spec.eigenstate(l);
                const auto out = evolve(psi, k, dt, IndexRange(0, o.N));
                const C phase = std::polar(1.0, -spec.energy(l) * dt / o.params.hbar());
                w.update((out.amplitudes() - phase * psi.amplitudes()).cwiseAbs().maxCoeff(),
                         [&] { return fmt::format("{} l={} dt={}", k.name(), l, dt); });
            }
    return done(w, 1e-12);
}

Outcome box_unitarity(const VerifyOptions& o) {
    Worst w;
    const int N = o.N;
    const IndexRange interior(1, N - 1);
    for (double dt : times_for(o.params, {0.3, 4.0, 55.0})) {
        const auto k = Kernel::box_spectral(N, o.params).matrix(interior, interior, dt);
        const ComplexMatrix<double> id = ComplexMatrix<double>::Identity(N - 1, N - 1);
        w.update((k.adjoint() * k - id).cwiseAbs().maxCoeff(), [&] { return fmt::format("dt={}", dt); });
    }
    return done(w, 1e-12);
}

Outcome box_composition(const VerifyOptions& o) {
    Worst w;
    const auto k = Kernel::box_spectral(o.N, o.params);
    for (auto [z1, z] : {std::pair{0.3, 1.0}, std::pair{2.0, 2.5}, std::pair{4.0, 11.0}}) {
        const double t1 = z_to_dt(o.params, z1), t = z_to_dt(o.params, z);
        for (int j = 1; j < o.N; ++j)
            for (int r = 1; r < o.N; ++r)
                w.update(composition_check(k, j, r, 0.0, t1, t, IndexRange(0, o.N)),
                         [&] { return fmt::format("j={} r={} t1={} t={}", j, r, t1, t); });
    }
    return done(w, 1e-12);
}

Outcome box_greens(const VerifyOptions& o) {
    const IndexRange interior(1, o.N - 1);
    const auto rep = greens_residual(Kernel::box_spectral(o.N, o.params), interior, interior,
                                     times_for(o.params, {0.5, 1.0, 5.0, 20.0}));
    return {rep.max_abs_residual, fmt::format("j={} r={} t={}", rep.j, rep.r, rep.t), 1e-10 * o.params.energy_scale()};
}

Outcome box_eigen_residual(const VerifyOptions& o) {
    Worst w;
    const auto spec = box_spectrum(o.N, o.params);
    for (int l = 1; l < o.N; ++l) {
        const auto psi = spec.eigenstate(l);
        const auto h = apply_hamiltonian(psi, PotentialSpec::box(o.N));
        double s = 0;
        for (int n = 0; n <= o.N; ++n)
            s += std::norm(h.at(n) - spec.energy(l) * psi.at(n));
        w.update(std::sqrt(s) / psi.norm(), [&] { return fmt::format("l={}", l); });
    }
    return done(w, 1e-12 * o.params.energy_scale());
}

Outcome box_spectrum_bound(const VerifyOptions& o) {
    const auto spec = box_spectrum(o.N, o.params);
    const double ratio = spec.energies.maxCoeff() / (2 * o.params.energy_scale());
    return {ratio, fmt::format("l={}", o.N - 1), 1.0, true};
}

// ---------------------------------------------------------------------------
// momentum

LatticeWavefunction<double> random_state(const Lattice<double>& lat, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    LatticeWavefunction<double> psi(lat);
    for (int n = lat.n_min(); n <= lat.n_max(); ++n)
        psi[n] = C(g(rng), g(rng));
    return psi;
}

Outcome momentum_parseval(const VerifyOptions& o) {
    Worst w;
    std::mt19937_64 rng(o.seed);
    const Lattice<double> lat(o.params, -9, 12);
    for (int m : {22, 23, 40}) {
        const MomentumGrid<double> grid(o.params, m);
        const auto psi = random_state(lat, rng);
        const double lhs = to_momentum(psi, grid).squaredNorm() / m;
        w.update(std::abs(lhs - psi.squared_norm()) / psi.squared_norm(), [&] { return fmt::format("M={}", m); });
    }
    return done(w, 1e-12);
}

Outcome momentum_roundtrip(const VerifyOptions& o) {
    Worst w;
    std::mt19937_64 rng(o.seed + 1);
    const Lattice<double> lat(o.params, 10, 14);
    const MomentumGrid<double> grid(o.params, 64);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = random_state(lat, rng);
        const auto back = from_momentum(to_momentum(psi, grid), grid, lat);
        w.update((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(),
                 [&] { return fmt::format("trial={}", trial); });
    }
    return done(w, 1e-12);
}

Outcome momentum_consistency(const VerifyOptions& o) {
    Worst w;
    std::mt19937_64 rng(o.seed + 2);
    std::uniform_real_distribution<double> centre(-5, 5), width(3, 6), phase(-1.5, 1.5);
    const double z = 2.0;
    const double dt = z_to_dt(o.params, z);
    const MomentumGrid<double> grid(o.params, 64);
    for (int packet = 0; packet < 3; ++packet) {
        const double c = centre(rng), s = width(rng), k = phase(rng);
        const int lo = static_cast<int>(std::floor(c - 12 * s)), hi = static_cast<int>(std::ceil(c + 12 * s));
        LatticeWavefunction<double> psi(Lattice<double>(o.params, lo, hi));
        for (int n = lo; n <= hi; ++n)
            psi[n] = std::exp(-(n - c) * (n - c) / (4 * s * s)) * std::polar(1.0, k * n);
        const auto evolved = evolve(psi, Kernel::free(o.params), dt, psi.window().expanded(truncation_window(z)));
        const auto lhs = to_momentum(evolved, grid);
        const auto rhs = evolve_momentum(to_momentum(psi, grid), grid, dt);
        w.update((lhs - rhs).cwiseAbs().maxCoeff(),
                 [&] { return fmt::format("packet={} centre={} width={} phase={}", packet, c, s, k); });
    }
    return done(w, 1e-9);
}

// ---------------------------------------------------------------------------
// continuum

const std::vector<double> sweep_ladder{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};

Outcome continuum_monotone(const VerifyOptions& o) {
    const auto pts = continuum_sweep(1.0, 1.0, sweep_ladder, o.params.hbar(), o.params.mass());
    Worst w;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        w.update(pts[k + 1].abs_error / pts[k].abs_error,
                 [&] { return fmt::format("mu0={} -> {}", pts[k].mu0, pts[k + 1].mu0); });
    return {w.value(), w.where(), 1.0, true};
}

Outcome continuum_tenfold(const VerifyOptions& o) {
    const auto pts = continuum_sweep(1.0, 1.0, sweep_ladder, o.params.hbar(), o.params.mass());
    return {pts.back().abs_error / pts.front().abs_error,
            fmt::format("error(mu0={})={} error(mu0={})={}", pts.back().mu0, pts.back().abs_error, pts.front().mu0,
                        pts.front().abs_error),
            0.1};
}

Outcome continuum_free_packet(const VerifyOptions& o) {
    const GaussianPacket<double> g{0.0, 1.0, 1.5};
    const auto p = [&](double mu0) { return PhysicalParams<double>(o.params.hbar(), o.params.mass(), mu0); };
    const double coarse = free_packet_continuum_error(g, 1.0, p(1.0 / 8));
    const double fine = free_packet_continuum_error(g, 1.0, p(1.0 / 16));
    return {fine / coarse, fmt::format("error(1/8)={} error(1/16)={}", coarse, fine), 0.3};
}

Outcome continuum_box_packet(const VerifyOptions& o) {
    const GaussianPacket<double> g{0.45, 0.04, 10.0};
    const auto err = [&](int N) {
        return box_packet_continuum_error(g, N, 0.002, PhysicalParams<double>(o.params.hbar(), o.params.mass(), 1.0 / N));
    };
    const double coarse = err(128), fine = err(256);
    return {fine / coarse, fmt::format("error(N=128)={} error(N=256)={}", coarse, fine), 0.3};
}

const std::vector<Entry>& manifest() {
    static const std::vector<Entry> entries{
        {"bessel", "parity", bessel_parity},
        {"bessel", "recurrence", bessel_recurrence},
        {"bessel", "derivative-identity", bessel_derivative},
        {"bessel", "sum-of-squares", bessel_sum_of_squares},
        {"bessel", "normalization", bessel_normalization},
        {"bessel", "jacobi-anger", bessel_jacobi_anger},
        {"free", "initial-condition", free_initial},
        {"free", "symmetry", free_symmetry},
        {"free", "time-reversal", free_time_reversal},
        {"free", "unitarity", free_unitarity},
        {"free", "composition", free_composition},
        {"free", "greens-residual", free_greens},
        {"free", "greens-residual-fd", free_greens_fd},
        {"free", "eigenstate-phase", free_eigenstate_phase},
        {"box", "initial-condition", box_initial},
        {"box", "boundary-zeros", box_boundary_zeros},
        {"box", "spectral-vs-images", box_spectral_vs_images},
        {"box", "eigenphase", box_eigenphase},
        {"box", "unitarity", box_unitarity},
        {"box", "composition", box_composition},
        {"box", "greens-residual", box_greens},
        {"box", "eigen-residual", box_eigen_residual},
        {"box", "spectrum-bound", box_spectrum_bound},
        {"momentum", "parseval", momentum_parseval},
        {"momentum", "roundtrip", momentum_roundtrip},
        {"momentum", "momentum-consistency", momentum_consistency},
        {"continuum", "sweep-monotone", continuum_monotone},
        {"continuum", "sweep-tenfold", continuum_tenfold},
        {"continuum", "free-packet", continuum_free_packet},
        {"continuum", "box-packet", continuum_box_packet},
    };
    return entries;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"bessel", "free", "box", "momentum", "continuum"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options) {
    const auto& names = suite_names();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw UsageError(fmt::format("unknown suite '{}'", suite));
    for (const auto& [key, value] : options.tolerance_overrides) {
        const bool known = std::any_of(manifest().begin(), manifest().end(), [&](const Entry& e) {
            return key == fmt::format("{}.{}", e.suite, e.property);
        });
        if (!known)
            throw UsageError(fmt::format("tolerance override for unknown property '{}'", key));
        if (!std::isfinite(value))
            throw UsageError(fmt::format("tolerance override for '{}' is not finite", key));
    }
    if (options.N < 2)
        throw DomainError("verify: box size N must be at least 2");

    std::vector<CheckResult> out;
    for (const auto& e : manifest()) {
        if (suite != "all" && suite != e.suite)
            continue;
        const auto r = e.run(options);
        CheckResult c{e.suite, e.property, r.deviation, r.tolerance, r.strict, r.where};
        if (const auto it = options.tolerance_overrides.find(c.key()); it != options.tolerance_overrides.end())
            c.tolerance = it->second;
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace polyprop
