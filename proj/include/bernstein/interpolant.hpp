#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "generating.hpp"
#include "sequence.hpp"
#include "summation.hpp"
#include "weights.hpp"

namespace bernstein
{

namespace detail
{

inline constexpr double stencil_step = 1e-3;

// F(z)/(z - a) near a zero a of F, from its Taylor expansion about a. F'(a) is
// exact; F'', F''', F'''' come from the values at a +- h and a +- 2h combined
// so that the h^2 error terms cancel.
inline complex_t divided_difference_near_zero(const generating_function &F, complex_t a, complex_t dF, complex_t z)
{
    const double h = stencil_step;
    const complex_t fp1 = F(a + h);
    const complex_t fm1 = F(a - h);
    const complex_t fp2 = F(a + 2 * h);
    const complex_t fm2 = F(a - 2 * h);
    const complex_t e1 = fp1 + fm1;
    const complex_t e2 = fp2 + fm2;
    const complex_t o1 = fp1 - fm1 - 2.0 * h * dF;
    const complex_t o2 = fp2 - fm2 - 4.0 * h * dF;
    const complex_t d2 = (16.0 * e1 - e2) / (12 * h * h);
    const complex_t d4 = (e2 - 4.0 * e1) / (h * h * h * h);
    const complex_t d3 = (32.0 * o1 - o2) / (8 * h * h * h);
    const complex_t u = z - a;
    return dF + u * (d2 / 2.0 + u * (d3 / 6.0 + u * (d4 / 24.0)));
}

inline complex_t peak_with_derivative(const generating_function &F, complex_t node, complex_t dF,
                                      const weight_parameters &params, complex_t z)
{
    const complex_t u = z - node;
    if (u == complex_t(0, 0)) {
        return 1.0;
    }
    const complex_t w = weight_eval(node, params, z);
    if (std::abs(u) < near_node_radius) {
        return w * divided_difference_near_zero(F, node, dF, z) / dF;
    }
    return w * F(z) / (dF * u);
}

} // namespace detail

/// w_node(z) F(z) / (F'(node) (z - node)): equal to 1 at the node and 0 at every
/// other zero of F.
inline complex_t peak_function_eval(const generating_function &F, complex_t node, const weight_parameters &params,
                                    complex_t z)
{
    const complex_t dF = F.derivative_at_zero(node);
    if (dF == complex_t(0, 0)) {
        detail::fail(error_kind::validation, "F'(" + to_string(node) + ") vanishes");
    }
    return detail::peak_with_derivative(F, node, dF, params, z);
}

/// f(z) = sum_l v_l w_l(z) F(z) / (F'(l)(z - l)) over the nodes of a truncation.
class interpolant
{
public:
    interpolant(generating_function generator, discrete_sequence nodes, std::vector<complex_t> values,
                weight_parameters params)
        : generator_(std::move(generator)), nodes_(std::move(nodes)), values_(std::move(values)), params_(params)
    {
        if (values_.size() != nodes_.size()) {
            detail::fail(error_kind::validation, "got " + std::to_string(values_.size()) + " values for "
                                                     + std::to_string(nodes_.size()) + " nodes");
        }
        derivatives_.reserve(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto &v = values_[i];
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                detail::fail(error_kind::validation, "value " + std::to_string(i) + " is not finite");
            }
            if (!generator_.match_zero(nodes_[i])) {
                detail::fail(error_kind::validation, "node " + std::to_string(i) + " (" + to_string(nodes_[i])
                                                         + ") is not a zero of the generator");
            }
            const complex_t d = generator_.derivative_at_zero(nodes_[i]);
            if (d == complex_t(0, 0)) {
                detail::fail(error_kind::validation, "generator derivative vanishes at node " + std::to_string(i));
            }
            derivatives_.push_back(d);
            value_bound_ = std::max(value_bound_, std::abs(v) * std::exp(-params_.C() * std::abs(nodes_[i].imag())));
            max_value_ = std::max(max_value_, std::abs(v));
        }
        // densest unit window of node real parts
        std::vector<double> re;
        for (const auto &p : nodes_.points()) {
            re.push_back(p.real());
        }
        std::sort(re.begin(), re.end());
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < re.size(); ++hi) {
            while (re[hi] - re[lo] >= 1) {
                ++lo;
            }
            unit_density_ = std::max(unit_density_, hi - lo + 1);
        }
    }

    const generating_function &generator() const noexcept
    {
        return generator_;
    }
    const discrete_sequence &nodes() const noexcept
    {
        return nodes_;
    }
    std::span<const complex_t> values() const noexcept
    {
        return values_;
    }
    const weight_parameters &params() const noexcept
    {
        return params_;
    }
    std::span<const complex_t> derivatives() const noexcept
    {
        return derivatives_;
    }

    /// K = sup_l |v_l| e^{-C |Im l|}.
    double value_bound() const noexcept
    {
        return value_bound_;
    }
    double max_value() const noexcept
    {
        return max_value_;
    }
    /// Largest number of nodes whose real parts fit in a half-open unit window.
    std::size_t unit_density() const noexcept
    {
        return unit_density_;
    }

private:
    generating_function generator_;
    discrete_sequence nodes_;
    std::vector<complex_t> values_;
    weight_parameters params_;
    std::vector<complex_t> derivatives_;
    double value_bound_ = 0;
    double max_value_ = 0;
    std::size_t unit_density_ = 0;
};

struct interpolant_value {
    complex_t value{};
    double r_cut = 0;         // horizontal cut-off; nodes with |Re(z - l)| > r_cut are omitted
    double tail_bound = 0;    // bound on the omitted terms (0 when nothing is omitted)
    std::size_t terms = 0;
};

/// Sums the terms of the nodes within horizontal distance r_cut of z.
///
/// For an omitted node |term| <= K G / |z - l|^4, with
/// G = 2 e^{3|Im(z-l)| - s_l M Im(z-l)} e^{C|Im l|} |F(z)| / |F'(l)|, so the
/// omitted terms sum to at most K * K_tail / r_cut^2 with K_tail = 3 rho max G and
/// rho the unit-window node density. Without an explicit r_cut the smallest
/// integer r_cut with tail bound < 1e-10 sup|v| is used.
inline interpolant_value interpolant_eval(const interpolant &itp, complex_t z, std::optional<double> r_cut = std::nullopt)
{
    interpolant_value out;
    const auto &nodes = itp.nodes();
    if (nodes.empty() || itp.max_value() == 0) {
        out.r_cut = r_cut.value_or(1);
        return out;
    }
    const auto &F = itp.generator();
    const double M = itp.params().M();
    const double C = itp.params().C();
    const double Fz = std::abs(F(z));
    double g_max = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const complex_t u = z - nodes[i];
        const double s = weight_sign(nodes[i]);
        const double g = 2 * std::exp(3 * std::abs(u.imag()) - s * M * u.imag() + C * std::abs(nodes[i].imag())) * Fz
                         / std::abs(itp.derivatives()[i]);
        g_max = std::max(g_max, g);
    }
    const double k_tail = 3.0 * static_cast<double>(itp.unit_density()) * g_max;
    if (r_cut) {
        detail::require(*r_cut >= 1, "r_cut must be at least 1");
        out.r_cut = *r_cut;
    } else {
        const double target = 1e-10 * itp.max_value();
        out.r_cut = std::max(1.0, std::ceil(std::sqrt(itp.value_bound() * k_tail / target)));
        if (!std::isfinite(out.r_cut)) {
            out.r_cut = std::numeric_limits<double>::infinity();
        }
    }
    compensated_sum<complex_t> acc;
    bool omitted = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(z.real() - nodes[i].real()) > out.r_cut) {
            omitted = true;
            continue;
        }
        const complex_t v = itp.values()[i];
        if (v == complex_t(0, 0)) {
            continue;
        }
        acc += v * detail::peak_with_derivative(F, nodes[i], itp.derivatives()[i], itp.params(), z);
        ++out.terms;
    }
    out.value = acc.value();
    out.tail_bound = omitted ? itp.value_bound() * k_tail / (out.r_cut * out.r_cut) : 0.0;
    return out;
}

/// Weighted sum G(z) = sum_l w_l(z) f_l(z)^2 sin(z - l) over a peak family.
/// G vanishes on the nodes and G'(l) = w_l(l) f_l(l)^2 = 1 at each node.
class vanishing_assembly
{
public:
    using peak_fn = std::function<complex_t(complex_t)>;

    static constexpr double peak_tolerance = 1e-8;

    vanishing_assembly(std::vector<std::pair<complex_t, peak_fn>> peaks, weight_parameters params)
        : peaks_(std::move(peaks)), params_(params)
    {
        for (std::size_t i = 0; i < peaks_.size(); ++i) {
            for (std::size_t j = 0; j < peaks_.size(); ++j) {
                const complex_t v = peaks_[i].second(peaks_[j].first);
                const double expected = i == j ? 1.0 : 0.0;
                if (!(std::abs(v - expected) <= peak_tolerance)) {
                    detail::fail(error_kind::validation, "peak function of node " + std::to_string(i) + " takes value "
                                                             + to_string(v) + " at node " + std::to_string(j));
                }
            }
        }
    }

    complex_t operator()(complex_t z) const
    {
        compensated_sum<complex_t> acc;
        for (const auto &[node, f] : peaks_) {
            const complex_t fz = f(z);
            acc += weight_eval(node, params_, z) * fz * fz * std::sin(z - node);
        }
        return acc.value();
    }

    /// sum_l |w_l(z) f_l(z)^2|, a magnitude scale for G(z).
    double scale(complex_t z) const
    {
        double s = 0;
        for (const auto &[node, f] : peaks_) {
            const complex_t fz = f(z);
            s += std::abs(weight_eval(node, params_, z) * fz * fz);
        }
        return s;
    }

    std::size_t size() const noexcept
    {
        return peaks_.size();
    }
    complex_t node(std::size_t i) const
    {
        return peaks_[i].first;
    }

private:
    std::vector<std::pair<complex_t, peak_fn>> peaks_;
    weight_parameters params_;
};

inline complex_t assemble_vanishing_function(const vanishing_assembly &assembly, complex_t z)
{
    return assembly(z);
}

/// Peak family of a generating function restricted to the given nodes.
inline std::vector<std::pair<complex_t, vanishing_assembly::peak_fn>>
peak_family(const generating_function &F, const discrete_sequence &nodes, const weight_parameters &params)
{
    std::vector<std::pair<complex_t, vanishing_assembly::peak_fn>> out;
    for (const auto &node : nodes.points()) {
        const complex_t dF = F.derivative_at_zero(node);
        out.emplace_back(node, [F, node, dF, params](complex_t z) {
            return detail::peak_with_derivative(F, node, dF, params, z);
        });
    }
    return out;
}

} // namespace bernstein
