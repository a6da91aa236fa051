#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "error.hpp"
#include "sequence.hpp"

namespace bernstein
{

/// Finite Blaschke product prod (z - l)/(z - conj l) over upper half-plane
/// zeros. Factors are multiplied in increasing |l|.
class blaschke_product
{
public:
    explicit blaschke_product(const discrete_sequence &upper_points)
        : zeros_(upper_points.points().begin(), upper_points.points().end())
    {
        for (const auto &p : zeros_) {
            if (!(p.imag() > 0)) {
                detail::fail(error_kind::validation,
                             "Blaschke zero " + to_string(p) + " is not in the upper half-plane");
            }
        }
        std::stable_sort(zeros_.begin(), zeros_.end(),
                         [](complex_t a, complex_t b) { return std::abs(a) < std::abs(b); });
    }

    complex_t operator()(complex_t z) const
    {
        detail::require(z.imag() >= 0, "Blaschke product is evaluated on the closed upper half-plane only");
        complex_t prod = 1.0;
        for (const auto &p : zeros_) {
            prod *= (z - p) / (z - std::conj(p));
        }
        return prod;
    }

private:
    std::vector<complex_t> zeros_;
};

inline complex_t blaschke_eval(const discrete_sequence &upper_points, complex_t z)
{
    return blaschke_product(upper_points)(z);
}

} // namespace bernstein
