#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <bernstein/bernstein.hpp>

namespace testing_support
{

using bernstein::complex_t;

// {k spacing + i offset : |k| <= n}, truncated at the largest modulus.
inline bernstein::discrete_sequence lattice(long n, double offset = 1.0, double spacing = 1.0, double shift = 0.0)
{
    std::vector<complex_t> pts;
    double r = 0;
    for (long k = -n; k <= n; ++k) {
        pts.emplace_back(static_cast<double>(k) * spacing + shift, offset);
        r = std::max(r, std::abs(pts.back()));
    }
    return bernstein::discrete_sequence(std::move(pts), r, "lattice");
}

inline std::vector<complex_t> random_points(std::mt19937_64 &rng, std::size_t n, double width, double height)
{
    std::uniform_real_distribution<double> ux(-width, width);
    std::uniform_real_distribution<double> uy(0.05, height);
    std::bernoulli_distribution up(0.5);
    std::vector<complex_t> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.emplace_back(ux(rng), up(rng) ? uy(rng) : -uy(rng));
    }
    return pts;
}

} // namespace testing_support
