#ifndef POLYPROP_TEST_ORACLES_HPP
#define POLYPROP_TEST_ORACLES_HPP

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace oracle {

/// J_n(z) from the power series sum_k (-1)^k (z/2)^{2k+n} / (k! (k+n)!), in
/// long double, until |term| < 1e-18.
inline long double bessel_series(int n, long double z) {
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i)
        term *= (z / 2.0L) / i;
    long double sum = term;
    const long double q = (z / 2.0L) * (z / 2.0L);
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<long double>(k) * (k + n));
        sum += term;
        if (std::fabs(term) < 1e-18L && k > 2)
            break;
    }
    return sum;
}

/// Cyclic Jacobi rotations for a dense symmetric matrix. Returns eigenvalues in
/// ascending order and matching unit eigenvectors as columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q)
                off += a(p, q) * a(p, q);
        if (off < 1e-30)
            break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) < a(y, y); });
    Eigen::VectorXd values(n);
    Eigen::MatrixXd vectors(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        values[i] = a(order[i], order[i]);
        vectors.col(i) = v.col(order[i]);
        // first nonzero component positive
        for (Eigen::Index k = 0; k < n; ++k)
            if (std::abs(vectors(k, i)) > 1e-12) {
                if (vectors(k, i) < 0)
                    vectors.col(i) *= -1;
                break;
            }
    }
    return {values, vectors};
}

/// Interior box Hamiltonian: diagonal hbar^2/(m mu0^2), off-diagonal -hbar^2/(2 m mu0^2).
inline Eigen::MatrixXd box_interior_hamiltonian(int N, double hbar, double mass, double mu0) {
    const double s = hbar * hbar / (mass * mu0 * mu0);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N - 1, N - 1);
    for (int i = 0; i < N - 1; ++i) {
        h(i, i) = s;
        if (i + 1 < N - 1)
            h(i, i + 1) = h(i + 1, i) = -s / 2;
    }
    return h;
}

} // namespace oracle

#endif // POLYPROP_TEST_ORACLES_HPP
