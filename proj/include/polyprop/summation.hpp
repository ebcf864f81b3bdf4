#ifndef POLYPROP_SUMMATION_HPP
#define POLYPROP_SUMMATION_HPP

#include <cmath>
#include <complex>

namespace polyprop {

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Real>
class NeumaierReal {
public:
    void add(Real x) {
        const Real t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    Real value() const { return sum_ + comp_; }

private:
    Real sum_{0};
    Real comp_{0};
};

} // namespace detail

/// Neumaier-compensated accumulator for real or complex values. The result
/// depends only on the order of `add` calls, never on thread scheduling.
template <typename T>
class CompensatedSum {
public:
    void add(const T& x) { acc_.add(x); }
    CompensatedSum& operator+=(const T& x) {
        add(x);
        return *this;
    }
    T value() const { return acc_.value(); }

private:
    detail::NeumaierReal<T> acc_;
};

template <typename Real>
class CompensatedSum<std::complex<Real>> {
public:
    void add(const std::complex<Real>& x) {
        re_.add(x.real());
        im_.add(x.imag());
    }
    CompensatedSum& operator+=(const std::complex<Real>& x) {
        add(x);
        return *this;
    }
    std::complex<Real> value() const { return {re_.value(), im_.value()}; }

private:
    detail::NeumaierReal<Real> re_;
    detail::NeumaierReal<Real> im_;
};

} // namespace polyprop

#endif // POLYPROP_SUMMATION_HPP
