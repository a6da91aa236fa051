#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "conditions.hpp"
#include "error.hpp"
#include "generating.hpp"
#include "interpolant.hpp"
#include "sequence.hpp"
#include "summation.hpp"

namespace bernstein
{

/// Callable returning log|f(z)|.
template <typename Fn>
concept log_abs_function = std::invocable<const Fn &, complex_t>
                           && std::same_as<std::invoke_result_t<const Fn &, complex_t>, double>;

/// Callable returning f(z).
template <typename Fn>
concept complex_function = std::invocable<const Fn &, complex_t>
                           && std::same_as<std::invoke_result_t<const Fn &, complex_t>, complex_t>;

namespace detail
{

template <complex_function Fn>
auto as_log_abs(const Fn &f)
{
    return [&f](complex_t z) {
        const complex_t v = f(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            fail(error_kind::numerical,
                 "function overflows at " + to_string(z) + "; evaluate log|f| directly instead");
        }
        return std::log(std::abs(v));
    };
}

} // namespace detail

// ---------------------------------------------------------------------------
// Jensen's formula
// ---------------------------------------------------------------------------

struct jensen_result {
    double residual = 0;     // |mean log|f| - log|f(center)| - N|
    double circle_mean = 0;  // (1/2pi) int log|f(c + r e^{it})| dt
    double center_log = 0;   // log|f(center)| (or the supplied leading-coefficient log)
    double counting = 0;     // N(center, radius) of the zeros
    std::size_t nodes = 0;   // trapezoid nodes in the accepted estimate
};

struct jensen_options {
    std::size_t quad_points = 64;
    double tolerance = 1e-9;
    std::size_t max_points = std::size_t{1} << 22;
    /// log|f^{(n)}(c)/n!| when f has a zero of order n at the centre
    std::optional<double> center_log_leading;
};

/// Checks Jensen's formula on the circle |z - center| = radius for the zeros
/// listed, which must be all zeros of f in the closed disc (others are ignored).
/// The circle mean is computed by a trapezoid rule doubled until successive
/// values agree to the tolerance.
template <log_abs_function Fn>
jensen_result jensen_check_log(const Fn &log_abs_f, std::span<const complex_t> zeros, complex_t center, double radius,
                               const jensen_options &opt = {})
{
    detail::require(radius > 0, "Jensen radius must be positive");
    detail::require(opt.quad_points >= 4, "Jensen quadrature needs at least 4 points");

    jensen_result res;
    std::size_t at_center = 0;
    compensated_sum<double> counting;
    for (const auto &a : zeros) {
        const double d = std::abs(a - center);
        if (d == 0) {
            ++at_center;
        } else if (d <= radius) {
            counting += std::log(radius / d);
        }
    }
    if (at_center > 0) {
        counting += static_cast<double>(at_center) * std::log(radius);
    }
    res.counting = counting.value();

    if (at_center > 0) {
        if (!opt.center_log_leading) {
            detail::fail(error_kind::validation, "f vanishes at the centre; supply the leading-coefficient logarithm");
        }
        res.center_log = *opt.center_log_leading;
    } else {
        res.center_log = log_abs_f(center);
        if (!std::isfinite(res.center_log)) {
            detail::fail(error_kind::validation, "f vanishes at the centre but no zero was listed there");
        }
    }

    auto too_close = [&](complex_t node) {
        return std::any_of(zeros.begin(), zeros.end(), [&](complex_t a) { return std::abs(node - a) < 1e-8; });
    };

    for (int attempt = 0; attempt < 2; ++attempt) {
        // second attempt rotates the grid by an irrational fraction of the first spacing
        const double rotation = attempt == 0 ? 0.0
                                             : (std::numbers::sqrt2 - 1) * 2 * std::numbers::pi
                                                   / static_cast<double>(opt.quad_points);
        bool hit = false;
        auto sample = [&](double theta) {
            const complex_t node = center + std::polar(radius, theta + rotation);
            if (too_close(node)) {
                hit = true;
                return 0.0;
            }
            const double v = log_abs_f(node);
            if (!std::isfinite(v) || v < std::log(1e-10)) {
                detail::fail(error_kind::validation,
                             "f is (nearly) zero on the circle at " + to_string(node) + "; choose another radius");
            }
            return v;
        };

        std::size_t n = opt.quad_points;
        compensated_sum<double> total;
        for (std::size_t j = 0; j < n && !hit; ++j) {
            total += sample(2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
        }
        if (hit) {
            continue;
        }
        double prev = total.value() / static_cast<double>(n);
        for (;;) {
            if (2 * n > opt.max_points) {
                detail::fail(error_kind::numerical, "Jensen quadrature did not settle");
            }
            // new nodes sit halfway between the old ones
            for (std::size_t j = 0; j < n && !hit; ++j) {
                total += sample(2 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n));
            }
            if (hit) {
                break;
            }
            n *= 2;
            const double cur = total.value() / static_cast<double>(n);
            if (std::abs(cur - prev) < opt.tolerance) {
                res.circle_mean = cur;
                res.nodes = n;
                res.residual = std::abs(res.circle_mean - res.center_log - res.counting);
                return res;
            }
            prev = cur;
        }
    }
    detail::fail(error_kind::numerical, "a quadrature node fell within 1e-8 of a zero on both grids");
}

template <complex_function Fn>
jensen_result jensen_check(const Fn &f, std::span<const complex_t> zeros, complex_t center, double radius,
                           const jensen_options &opt = {})
{
    return jensen_check_log(detail::as_log_abs(f), zeros, center, radius, opt);
}

template <complex_function Fn>
jensen_result jensen_check(const Fn &f, const discrete_sequence &zeros, complex_t center, double radius,
                           const jensen_options &opt = {})
{
    return jensen_check(f, zeros.points(), center, radius, opt);
}

/// Jensen check for a generating function, using its registered zeros.
inline jensen_result jensen_check(const generating_function &F, complex_t center, double radius,
                                  const jensen_options &opt = {})
{
    const auto zeros = F.zeros_in_disc(center, radius * (1 + 1e-12));
    return jensen_check_log([&F](complex_t z) { return F.log_abs(z); }, zeros, center, radius, opt);
}

// ---------------------------------------------------------------------------
// Exponential type
// ---------------------------------------------------------------------------

/// Fit of m(y) = max over a horizontal segment of log|f| against |y|.
struct exponential_type_estimate {
    double A_hat = 0;
    double sigma_hat = 0;
    double residual = 0;
    std::vector<double> heights_used;
    double upper_slope = 0; // fit over y > 0
    double lower_slope = 0; // fit over y < 0
    std::vector<double> upper_maxima;
    std::vector<double> lower_maxima;
};

namespace detail
{

struct line_fit {
    double intercept = 0;
    double slope = 0;
    double residual = 0;
};

inline line_fit least_squares(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    line_fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f.residual = std::max(f.residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
    }
    return f;
}

} // namespace detail

inline constexpr std::size_t type_fit_grid = 1024;

/// Fits log|f| <= A + B|Im z| from segment maxima at the given heights, in the
/// upper and lower half-planes separately; sigma_hat is the larger slope
/// (clamped at 0) and A_hat the intercept of that fit.
template <log_abs_function Fn>
exponential_type_estimate estimate_exponential_type_log(const Fn &log_abs_f, double half_width,
                                                        std::span<const double> heights)
{
    detail::require(half_width > 0, "half width must be positive");
    detail::require(heights.size() >= 4, "type fitting needs at least 4 heights");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        detail::require(heights[i] >= 1, "heights must be at least 1");
        detail::require(i == 0 || heights[i] > heights[i - 1], "heights must be increasing");
    }
    exponential_type_estimate est;
    est.heights_used.assign(heights.begin(), heights.end());
    for (int side : {1, -1}) {
        auto &maxima = side > 0 ? est.upper_maxima : est.lower_maxima;
        for (double y : heights) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < type_fit_grid; ++j) {
                const double x = -half_width + 2 * half_width * static_cast<double>(j) / (type_fit_grid - 1);
                const double v = log_abs_f(complex_t(x, side * y));
                if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
                    detail::fail(error_kind::numerical, "log|f| is not finite on the height-" + std::to_string(y)
                                                            + " segment; evaluate in log space");
                }
                m = std::max(m, v);
            }
            if (!std::isfinite(m)) {
                detail::fail(error_kind::numerical, "f vanishes on a whole fitting segment");
            }
            maxima.push_back(m);
        }
    }
    const auto up = detail::least_squares(heights, est.upper_maxima);
    const auto lo = detail::least_squares(heights, est.lower_maxima);
    est.upper_slope = up.slope;
    est.lower_slope = lo.slope;
    const auto &best = up.slope >= lo.slope ? up : lo;
    est.sigma_hat = std::max(0.0, best.slope);
    est.A_hat = best.intercept;
    if (best.slope < 0) {
        // decay in both directions: a flat bound through the largest maximum
        est.A_hat = std::max(*std::max_element(est.upper_maxima.begin(), est.upper_maxima.end()),
                             *std::max_element(est.lower_maxima.begin(), est.lower_maxima.end()));
    }
    est.residual = std::max(up.residual, lo.residual);
    return est;
}

template <complex_function Fn>
exponential_type_estimate estimate_exponential_type(const Fn &f, double half_width, std::span<const double> heights)
{
    return estimate_exponential_type_log(detail::as_log_abs(f), half_width, heights);
}

/// Type estimate of a generating function, evaluated in log space. Finite
/// products are refused: they are polynomials, not functions of exponential type.
inline exponential_type_estimate estimate_exponential_type(const generating_function &F, double half_width,
                                                           std::span<const double> heights)
{
    if (!F.in_bernstein_algebra()) {
        detail::fail(error_kind::validation, "finite products are polynomials; type estimation does not apply");
    }
    return estimate_exponential_type_log([&F](complex_t z) { return F.log_abs(z); }, half_width, heights);
}

// ---------------------------------------------------------------------------
// Interpolation quality
// ---------------------------------------------------------------------------

struct interpolation_quality {
    double max_node_residual = 0;
    double value_bound = 0;        // sup |v_l| e^{-C |Im l|}
    double stability_constant = 0; // sup_probe |f| e^{-sigma |Im z|} / value_bound
    double probe_sup = 0;          // sup_probe |f| e^{-sigma |Im z|}
    std::optional<exponential_type_estimate> type; // absent when f vanishes identically
    double min_weighted_derivative = 0; // min |F'(l)| e^{C_F |Im l|} with C_F = type of F
};

struct interpolation_report_options {
    std::vector<double> heights{1, 2, 3, 4};
    std::optional<double> half_width; // defaults to max |Re l| (at least 1)
};

/// Node residuals, measured stability constant and type of the interpolant.
inline interpolation_quality interpolation_report(const interpolant &itp, std::span<const complex_t> probe_grid,
                                                  const interpolation_report_options &opt = {})
{
    interpolation_quality q;
    q.value_bound = itp.value_bound();
    const auto &nodes = itp.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const complex_t f = interpolant_eval(itp, nodes[i]).value;
        q.max_node_residual = std::max(q.max_node_residual, std::abs(f - itp.values()[i]));
    }
    // |F'(l)| against e^{-C|Im l|}, with C the sine type pi / spacing
    double c_gen = std::numbers::pi;
    if (itp.generator().kind() == generator_kind::shifted_sine) {
        c_gen = std::numbers::pi / itp.generator().spacing();
    }
    q.min_weighted_derivative = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        q.min_weighted_derivative =
            std::min(q.min_weighted_derivative, std::abs(itp.derivatives()[i]) * std::exp(c_gen * std::abs(nodes[i].imag())));
    }
    if (itp.max_value() == 0) {
        return q;
    }
    double hw = 1;
    for (const auto &p : nodes.points()) {
        hw = std::max(hw, std::abs(p.real()));
    }
    hw = opt.half_width.value_or(hw);
    q.type = estimate_exponential_type([&itp](complex_t z) { return interpolant_eval(itp, z).value; }, hw, opt.heights);
    for (const auto &z : probe_grid) {
        const double v = std::abs(interpolant_eval(itp, z).value) * std::exp(-q.type->sigma_hat * std::abs(z.imag()));
        q.probe_sup = std::max(q.probe_sup, v);
    }
    q.stability_constant = q.value_bound > 0 ? q.probe_sup / q.value_bound : 0.0;
    return q;
}

/// Rectangular probe grid with n points per axis.
inline std::vector<complex_t> rectangular_grid(double xmin, double xmax, double ymin, double ymax, std::size_t n)
{
    detail::require(n >= 2, "grid needs at least two points per axis");
    std::vector<complex_t> g;
    g.reserve(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = ymin + (ymax - ymin) * static_cast<double>(j) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(n - 1);
            g.emplace_back(x, y);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Unions
// ---------------------------------------------------------------------------

struct union_report {
    double common_radius = 0; // both parts restricted to |z| <= common_radius
    std::pair<std::size_t, std::size_t> sizes;
    separation_profile separation;
    double c_first = 0;
    double c_second = 0;
    double c_union = 0;
    /// max over l in one part of N_other(l, |Im l|) / |Im l|
    double cross_term = 0;
    /// c_union <= max(c_first, c_second) + cross_term (up to rounding)
    bool local_counting_consistent = false;
    double balayage_first = 0;
    double balayage_second = 0;
    double balayage_union = 0;
    double additivity_error = 0;          // max_x |P_union(x) - P_1(x) - P_2(x)|
    double relative_additivity_error = 0; // the same divided by max_x P_union(x)
    std::vector<double> x_grid;
};

namespace detail
{

// max over points l of `from` of N_onto(l, |Im l|) / |Im l| (l is not in `onto`)
inline double cross_counting(const discrete_sequence &from, const discrete_sequence &onto)
{
    double worst = 0;
    for (const auto &l : from.points()) {
        const double r = std::abs(l.imag());
        if (std::abs(l) + r > std::min(from.truncation_radius(), onto.truncation_radius())) {
            continue;
        }
        compensated_sum<double> acc;
        for (const auto j : real_window(onto, l.real() - r, l.real() + r)) {
            const double d = std::abs(onto[j] - l);
            if (d <= r) {
                acc += std::log(r / d);
            }
        }
        worst = std::max(worst, acc.value() / r);
    }
    return worst;
}

} // namespace detail

/// Compares the interpolation diagnostics of two disjoint sequences with those
/// of their union: weak separation of the union, the local counting constants,
/// and additivity of the balayage on a shared grid (the union's default grid
/// unless one is given).
/// Both parts are first restricted to the smaller of the two truncation
/// radii, so parts and union describe the same disc.
inline union_report union_interpolation_check(const discrete_sequence &first_in, const discrete_sequence &second_in,
                                              double epsilon, double alpha,
                                              std::optional<std::vector<double>> x_grid = std::nullopt,
                                              unsigned threads = 1)
{
    const double radius = std::min(first_in.truncation_radius(), second_in.truncation_radius());
    const auto first = std::isfinite(radius) ? restrict_to(first_in, radius) : first_in;
    const auto second = std::isfinite(radius) ? restrict_to(second_in, radius) : second_in;
    detail::require(!first.empty() && !second.empty(), "both sequences need points inside the common truncation radius");
    for (const auto &p : first.points()) {
        for (const auto j : real_window(second, p.real(), p.real())) {
            if (second[j] == p) {
                detail::fail(error_kind::validation, "sequences intersect at " + to_string(p));
            }
        }
    }
    const auto both = merge(first, second);
    union_report rep;
    rep.common_radius = radius;
    rep.sizes = {first.size(), second.size()};
    rep.separation = check_weak_separation(both, epsilon, alpha);
    rep.c_first = local_counting_constant(first, threads).c_estimate;
    rep.c_second = local_counting_constant(second, threads).c_estimate;
    rep.c_union = local_counting_constant(both, threads).c_estimate;
    rep.cross_term = std::max(detail::cross_counting(first, second), detail::cross_counting(second, first));
    rep.local_counting_consistent =
        rep.c_union <= (std::max(rep.c_first, rep.c_second) + rep.cross_term) * (1 + 1e-12) + 1e-12;

    rep.x_grid = x_grid ? std::move(*x_grid) : default_x_grid(both);
    const auto b1 = poisson_balayage(first, rep.x_grid, std::nullopt, threads);
    const auto b2 = poisson_balayage(second, rep.x_grid, std::nullopt, threads);
    const auto bu = poisson_balayage(both, rep.x_grid, std::nullopt, threads);
    rep.balayage_first = b1.sup;
    rep.balayage_second = b2.sup;
    rep.balayage_union = bu.sup;
    for (std::size_t i = 0; i < rep.x_grid.size(); ++i) {
        rep.additivity_error =
            std::max(rep.additivity_error, std::abs(bu.values[i].second - b1.values[i].second - b2.values[i].second));
    }
    rep.relative_additivity_error = bu.sup > 0 ? rep.additivity_error / bu.sup : 0.0;
    return rep;
}

} // namespace bernstein
