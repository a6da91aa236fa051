#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "error.hpp"
#include "sequence.hpp"

namespace bernstein
{

/// Constants of the peak-function growth bound
///     sup_z |f_l(z)| e^{-C |Im z|} <= A e^{B |Im l|}
/// and the exponential shift rate M of the weights. M > 2B + 4 is required for
/// the weighted sums built from these functions to converge.
class weight_parameters
{
public:
    weight_parameters() = default;

    weight_parameters(double M, double A, double B, double C) : M_(M), A_(A), B_(B), C_(C)
    {
        detail::require(M > 0 && A >= 0 && B >= 0 && C >= 0, "weight parameters: M must be positive, A, B, C nonnegative");
        detail::require(M > 2 * B + 4, "weight parameters: M must exceed 2B + 4");
    }

    double M() const noexcept
    {
        return M_;
    }
    double A() const noexcept
    {
        return A_;
    }
    double B() const noexcept
    {
        return B_;
    }
    double C() const noexcept
    {
        return C_;
    }

private:
    double M_ = 8;
    double A_ = 1;
    double B_ = 1;
    double C_ = 1;
};

/// +1 below the real axis, -1 above it.
inline double weight_sign(complex_t lambda)
{
    detail::require(lambda.imag() != 0, "weight sign undefined for a real node");
    return lambda.imag() < 0 ? 1.0 : -1.0;
}

namespace detail
{

inline constexpr double near_node_radius = 1e-4;

// sin(u)/u through order u^6; below 1e-4 the next term is < 1e-37.
inline complex_t sinc_series(complex_t u)
{
    const complex_t u2 = u * u;
    return 1.0 + u2 * (-1.0 / 6 + u2 * (1.0 / 120 - u2 / 5040.0));
}

inline complex_t sinc_direct(complex_t u)
{
    return std::sin(u) / u;
}

inline complex_t weight_from_sinc(complex_t sinc, double sign, double M, complex_t u)
{
    return sinc * sinc * sinc * std::exp(complex_t(0, sign * M) * u);
}

} // namespace detail

/// w_l(z) = (sin(z - l)/(z - l))^3 e^{i s_l M (z - l)}, with s_l the weight sign.
/// Equal to 1 at z = l and of modulus at most
/// 2 e^{(M+3)|Im z|} e^{-(M-3)|Im l|} / (1 + |z - l|^3).
inline complex_t weight_eval(complex_t lambda, const weight_parameters &params, complex_t z)
{
    const double sign = weight_sign(lambda);
    const complex_t u = z - lambda;
    if (u == complex_t(0, 0)) {
        return 1.0;
    }
    const complex_t s = std::abs(u) < detail::near_node_radius ? detail::sinc_series(u) : detail::sinc_direct(u);
    return detail::weight_from_sinc(s, sign, params.M(), u);
}

} // namespace bernstein
