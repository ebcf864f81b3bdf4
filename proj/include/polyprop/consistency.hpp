#ifndef POLYPROP_CONSISTENCY_HPP
#define POLYPROP_CONSISTENCY_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "polyprop/errors.hpp"
#include "polyprop/lattice_state.hpp"
#include "polyprop/propagators.hpp"
#include "polyprop/summation.hpp"

namespace polyprop {

/// Largest |i hbar d/dt k - H k| over the sampled (j, r, t) triples.
template <typename Scalar = double>
struct GreenResidualReport {
    Scalar max_abs_residual{0};
    int j{0};
    int r{0};
    Scalar t{0};
};

/// Green's-function residual of an arbitrary kernel. `value(j, r, dt)` and
/// `time_derivative(j, r, dt)` give the kernel and its partial t-derivative;
/// when `box_size` is set, H carries hard walls at 0 and box_size.
template <typename Scalar, typename Value, typename Derivative>
GreenResidualReport<Scalar> greens_residual(Value&& value, Derivative&& time_derivative,
                                            const PhysicalParams<Scalar>& params, IndexRange js, IndexRange rs,
                                            const std::vector<Scalar>& t_grid, Scalar t0 = Scalar(0),
                                            std::optional<int> box_size = std::nullopt) {
    for (Scalar t : t_grid)
        if (!(t > t0))
            throw UsageError("greens_residual: every sample time must be strictly later than t0");
    if (box_size && !IndexRange(1, *box_size - 1).contains(js))
        throw UsageError("greens_residual: box residual is sampled on interior sites only");

    const Scalar c = params.energy_scale() / Scalar(2);
    const std::complex<Scalar> ihbar(0, params.hbar());
    const auto k_at = [&](int j, int r, Scalar dt) -> std::complex<Scalar> {
        if (box_size && (j <= 0 || j >= *box_size))
            return {0, 0};
        return value(j, r, dt);
    };

    GreenResidualReport<Scalar> report;
    bool seen = false;
    for (Scalar t : t_grid) {
        const Scalar dt = t - t0;
        for (int j = js.first; j <= js.last; ++j)
            for (int r = rs.first; r <= rs.last; ++r) {
                const auto hk = c * (Scalar(2) * k_at(j, r, dt) - k_at(j + 1, r, dt) - k_at(j - 1, r, dt));
                const Scalar res = std::abs(ihbar * time_derivative(j, r, dt) - hk);
                if (!seen || res > report.max_abs_residual) {
                    report = {res, j, r, t};
                    seen = true;
                }
            }
    }
    return report;
}

/// Residual with the analytic time derivative of the kernel.
template <typename Scalar>
GreenResidualReport<Scalar> greens_residual(const PropagatorKernel<Scalar>& kernel, IndexRange js, IndexRange rs,
                                            const std::vector<Scalar>& t_grid, Scalar t0 = Scalar(0)) {
    return greens_residual<Scalar>([&](int j, int r, Scalar dt) { return kernel(j, r, dt); },
                                   [&](int j, int r, Scalar dt) { return kernel.time_derivative(j, r, dt); },
                                   kernel.params(), js, rs, t_grid, t0, kernel.box_size());
}

/// Same residual with the time derivative replaced by a central difference of step h.
template <typename Scalar>
GreenResidualReport<Scalar> greens_residual_fd(const PropagatorKernel<Scalar>& kernel, IndexRange js, IndexRange rs,
                                               const std::vector<Scalar>& t_grid, Scalar h, Scalar t0 = Scalar(0)) {
    for (Scalar t : t_grid)
        if (!(t - h > t0))
            throw UsageError("greens_residual_fd: difference stencil reaches t0");
    return greens_residual<Scalar>(
        [&](int j, int r, Scalar dt) { return kernel(j, r, dt); },
        [&](int j, int r, Scalar dt) { return (kernel(j, r, dt + h) - kernel(j, r, dt - h)) / (Scalar(2) * h); },
        kernel.params(), js, rs, t_grid, t0, kernel.box_size());
}

/// |k(j,t;r,t0) - sum_{n in window} k(j,t;n,t1) k(n,t1;r,t0)|. t1 == t0 is
/// accepted as the degenerate split.
template <typename Scalar>
Scalar composition_check(const PropagatorKernel<Scalar>& kernel, int j, int r, Scalar t0, Scalar t1, Scalar t,
                         IndexRange window) {
    if (!(t0 <= t1 && t1 <= t && t0 < t))
        throw UsageError("composition_check: times must satisfy t0 <= t1 <= t with t0 < t");
    if (const auto N = kernel.box_size(); N && !IndexRange(0, *N).contains(window))
        throw UsageError("composition_check: box window must lie within 0..N");

    const auto late = kernel.matrix(IndexRange::single(j), window, t - t1);
    const auto early = kernel.matrix(window, IndexRange::single(r), t1 - t0);
    CompensatedSum<std::complex<Scalar>> s;
    for (Eigen::Index n = 0; n < late.cols(); ++n)
        s.add(late(0, n) * early(n, 0));
    return std::abs(kernel(j, r, t - t0) - s.value());
}

} // namespace polyprop

#endif // POLYPROP_CONSISTENCY_HPP
