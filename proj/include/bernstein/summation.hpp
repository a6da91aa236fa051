#pragma once

#include <cmath>
#include <complex>

namespace bernstein
{

/// Neumaier-compensated accumulator. Terms must be added in a fixed order for
/// results to be reproducible across runs.
template <typename T>
class compensated_sum
{
public:
    compensated_sum &operator+=(T x)
    {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    T value() const
    {
        return sum_ + comp_;
    }

private:
    T sum_{};
    T comp_{};
};

template <typename T>
class compensated_sum<std::complex<T>>
{
public:
    compensated_sum &operator+=(std::complex<T> x)
    {
        re_ += x.real();
        im_ += x.imag();
        return *this;
    }

    std::complex<T> value() const
    {
        return {re_.value(), im_.value()};
    }

private:
    compensated_sum<T> re_;
    compensated_sum<T> im_;
};

} // namespace bernstein
