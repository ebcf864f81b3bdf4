#ifndef POLYPROP_SPECIAL_FUNCTIONS_HPP
#define POLYPROP_SPECIAL_FUNCTIONS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include <Eigen/Core>

#include "polyprop/errors.hpp"
#include "polyprop/summation.hpp"

namespace polyprop {

/// i^m for any integer m, exact (selected by m mod 4).
template <typename Scalar = double>
std::complex<Scalar> ipow(long m) {
    switch (((m % 4) + 4) % 4) {
    case 0: return {Scalar(1), Scalar(0)};
    case 1: return {Scalar(0), Scalar(1)};
    case 2: return {Scalar(-1), Scalar(0)};
    default: return {Scalar(0), Scalar(-1)};
    }
}

/// Order beyond which J_n(z) is negligible: ceil(|z| + 12|z|^(1/3) + 20).
template <typename Scalar>
int truncation_window(Scalar z) {
    using std::abs;
    using std::cbrt;
    using std::ceil;
    const Scalar a = abs(z);
    return static_cast<int>(ceil(a + Scalar(12) * cbrt(a) + Scalar(20)));
}

/// J_0(z) ... J_max_order(z) for a single argument.
template <typename Scalar = double>
struct BesselTable {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Scalar z{0};
    int max_order{0};
    Vector values;

    /// J_n(z) for |n| <= max_order, negative orders through J_{-n} = (-1)^n J_n.
    Scalar operator()(int n) const {
        const int m = std::abs(n);
        const Scalar v = values[m];
        return (n < 0 && (m & 1)) ? -v : v;
    }

    /// |J_0 + 2 sum_k J_{2k} - 1| over the stored orders.
    Scalar normalization_defect() const {
        CompensatedSum<Scalar> s;
        s.add(values[0] - Scalar(1));
        for (int k = 2; k <= max_order; k += 2)
            s.add(Scalar(2) * values[k]);
        using std::abs;
        return abs(s.value());
    }
};

namespace detail {

template <typename Scalar>
void check_bessel_argument(Scalar z) {
    using std::isfinite;
    if (!isfinite(z))
        throw DomainError("bessel: argument must be finite");
    if (z < Scalar(0))
        throw DomainError("bessel: argument must be nonnegative (apply J_n(-z) = (-1)^n J_n(z))");
}

} // namespace detail

/// Integer-order Bessel functions J_0..J_max_order at z >= 0 in one pass of
/// Miller's downward recurrence, normalized with J_0 + 2 sum J_2k = 1.
template <typename Scalar>
BesselTable<Scalar> bessel_table(Scalar z, int max_order) {
    detail::check_bessel_argument(z);
    if (max_order < 0)
        throw DomainError("bessel_table: max_order must be nonnegative");

    BesselTable<Scalar> table;
    table.z = z;
    table.max_order = max_order;
    table.values = BesselTable<Scalar>::Vector::Zero(max_order + 1);

    if (z == Scalar(0)) {
        table.values[0] = Scalar(1);
        return table;
    }

    if (z < Scalar(1e-8)) {
        // leading series term (z/2)^n / n!
        Scalar term(1);
        const Scalar half = z / Scalar(2);
        for (int n = 0; n <= max_order; ++n) {
            if (n > 0)
                term *= half / Scalar(n);
            table.values[n] = term;
        }
        return table;
    }

    const int start = std::max(truncation_window(z), max_order) + 15;
    const Scalar big(1e250);
    const Scalar rescale(1e-250);

    Scalar next(0);  // J_{n+1}
    Scalar cur(1);   // J_n, seeded at n = start
    CompensatedSum<Scalar> norm;
    int n = start;
    for (;;) {
        if (n <= max_order)
            table.values[n] = cur;
        if (n % 2 == 0)
            norm.add(n == 0 ? cur : Scalar(2) * cur);
        if (n == 0)
            break;
        const Scalar prev = Scalar(2 * n) / z * cur - next;
        next = cur;
        cur = prev;
        --n;
        using std::abs;
        if (abs(cur) > big) {
            cur *= rescale;
            next *= rescale;
            for (int k = n + 1; k <= max_order; ++k)
                table.values[k] *= rescale;
            const Scalar partial = norm.value() * rescale;
            norm = CompensatedSum<Scalar>{};
            norm.add(partial);
        }
    }
    table.values /= norm.value();
    return table;
}

/// J_n(z) for integer n and z >= 0.
template <typename Scalar>
Scalar bessel_jn(int n, Scalar z) {
    return bessel_table(z, std::abs(n))(n);
}

/// Truncated Jacobi-Anger sum  sum_{n=-window}^{window} i^n J_n(z) e^{i n phi},
/// which approximates e^{i z cos phi} once window >= W(z).
template <typename Scalar>
std::complex<Scalar> jacobi_anger(Scalar z, Scalar phi, int window) {
    if (window < 0)
        throw DomainError("jacobi_anger: window must be nonnegative");
    using std::abs;
    const auto table = bessel_table(abs(z), window);
    const bool flip = z < Scalar(0);
    CompensatedSum<std::complex<Scalar>> sum;
    for (int n = -window; n <= window; ++n) {
        Scalar jn = table(n);
        if (flip && (std::abs(n) & 1))
            jn = -jn;
        sum.add(ipow<Scalar>(n) * jn * std::polar(Scalar(1), Scalar(n) * phi));
    }
    return sum.value();
}

} // namespace polyprop

#endif // POLYPROP_SPECIAL_FUNCTIONS_HPP
