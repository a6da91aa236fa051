#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "summation.hpp"

namespace bernstein
{

using complex_t = std::complex<double>;

inline std::string to_string(complex_t z)
{
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

/// A finite truncation of a discrete sequence in the plane.
///
/// The truncation radius R is the radius of the origin-centred disc inside
/// which the point list is claimed to be complete. Queries that need points
/// beyond R throw rather than silently under-count. An explicit finite list
/// that is the whole sequence uses R = +inf.
///
/// Points must be pairwise distinct, finite and off the real axis. A sequence
/// meeting the real axis has to be shifted vertically by the caller (the real
/// axis can be replaced by any horizontal line free of points).
class discrete_sequence
{
public:
    discrete_sequence() = default;

    discrete_sequence(std::initializer_list<complex_t> points,
                      double truncation_radius = std::numeric_limits<double>::infinity(),
                      std::string family_tag = "custom")
        : discrete_sequence(std::vector<complex_t>(points), truncation_radius, std::move(family_tag))
    {
    }

    explicit discrete_sequence(std::vector<complex_t> points,
                               double truncation_radius = std::numeric_limits<double>::infinity(),
                               std::string family_tag = "custom")
        : points_(std::move(points)), truncation_radius_(truncation_radius), family_tag_(std::move(family_tag))
    {
        detail::require(truncation_radius_ > 0 && !std::isnan(truncation_radius_),
                        "truncation radius must be positive");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto &p = points_[i];
            if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
                detail::fail(error_kind::validation, "point " + std::to_string(i) + " is not finite");
            }
            if (p.imag() == 0) {
                detail::fail(error_kind::validation,
                             "point " + std::to_string(i) + " (" + to_string(p)
                                 + ") lies on the real axis; shift the reference line so that no point is real");
            }
            if (std::abs(p) > truncation_radius_) {
                detail::fail(error_kind::validation, "point " + std::to_string(i) + " (" + to_string(p)
                                                         + ") lies outside the truncation radius");
            }
        }
        by_real_.resize(points_.size());
        std::iota(by_real_.begin(), by_real_.end(), std::size_t{0});
        std::sort(by_real_.begin(), by_real_.end(), [this](std::size_t a, std::size_t b) {
            const auto &pa = points_[a];
            const auto &pb = points_[b];
            return pa.real() < pb.real() || (pa.real() == pb.real() && pa.imag() < pb.imag());
        });
        for (std::size_t k = 1; k < by_real_.size(); ++k) {
            if (points_[by_real_[k]] == points_[by_real_[k - 1]]) {
                detail::fail(error_kind::validation, "duplicate point " + to_string(points_[by_real_[k]]) + " at indices "
                                                         + std::to_string(std::min(by_real_[k], by_real_[k - 1])) + " and "
                                                         + std::to_string(std::max(by_real_[k], by_real_[k - 1])));
            }
        }
    }

    std::span<const complex_t> points() const noexcept
    {
        return points_;
    }
    std::size_t size() const noexcept
    {
        return points_.size();
    }
    bool empty() const noexcept
    {
        return points_.empty();
    }
    const complex_t &operator[](std::size_t i) const
    {
        return points_[i];
    }
    double truncation_radius() const noexcept
    {
        return truncation_radius_;
    }
    const std::string &family_tag() const noexcept
    {
        return family_tag_;
    }

    /// Indices of the points sorted by (real part, imaginary part).
    std::span<const std::size_t> order_by_real() const noexcept
    {
        return by_real_;
    }

    /// Radius of the largest disc about z on which the truncation is complete.
    double complete_reach(complex_t z) const
    {
        return truncation_radius_ - std::abs(z);
    }

private:
    std::vector<complex_t> points_;
    double truncation_radius_ = std::numeric_limits<double>::infinity();
    std::string family_tag_ = "custom";
    std::vector<std::size_t> by_real_;
};

/// Indices (ascending) of the points with lo <= Re <= hi.
inline std::vector<std::size_t> real_window(const discrete_sequence &seq, double lo, double hi)
{
    const auto order = seq.order_by_real();
    const auto first = std::partition_point(order.begin(), order.end(),
                                            [&](std::size_t i) { return seq[i].real() < lo; });
    const auto last = std::partition_point(first, order.end(), [&](std::size_t i) { return seq[i].real() <= hi; });
    std::vector<std::size_t> out(first, last);
    std::sort(out.begin(), out.end());
    return out;
}

/// Shifts every point by a. A finite truncation radius shrinks to R - |a| and
/// shifted points outside the new radius are dropped, so the completeness claim
/// stays valid about the origin.
inline discrete_sequence translate(const discrete_sequence &seq, complex_t a)
{
    const double r = seq.truncation_radius() - std::abs(a);
    detail::require(r > 0, "translation moves the origin outside the truncation");
    std::vector<complex_t> pts;
    pts.reserve(seq.size());
    for (const auto &p : seq.points()) {
        if (std::abs(p + a) <= r) {
            pts.push_back(p + a);
        }
    }
    return discrete_sequence(std::move(pts), r, seq.family_tag());
}

/// The points of modulus <= r, as a sequence complete up to r (r must not
/// exceed the current truncation radius).
inline discrete_sequence restrict_to(const discrete_sequence &seq, double r)
{
    detail::require(r > 0 && r <= seq.truncation_radius(), "restriction radius must lie in (0, truncation radius]");
    std::vector<complex_t> pts;
    for (const auto &p : seq.points()) {
        if (std::abs(p) <= r) {
            pts.push_back(p);
        }
    }
    return discrete_sequence(std::move(pts), r, seq.family_tag());
}

/// Union of two disjoint sequences, complete up to the smaller truncation
/// radius. Throws if they share a point or a point lies beyond that radius.
inline discrete_sequence merge(const discrete_sequence &a, const discrete_sequence &b)
{
    std::vector<complex_t> pts(a.points().begin(), a.points().end());
    pts.insert(pts.end(), b.points().begin(), b.points().end());
    // the constructor rejects duplicates, i.e. a common point
    return discrete_sequence(std::move(pts), std::min(a.truncation_radius(), b.truncation_radius()), "union");
}

/// n(z,t): number of points in the closed disc of radius t about z.
inline std::size_t counting_function(const discrete_sequence &seq, complex_t z, double t)
{
    detail::require(t >= 0, "counting radius must be nonnegative");
    std::size_t n = 0;
    for (const auto &p : seq.points()) {
        if (std::abs(p - z) <= t) {
            ++n;
        }
    }
    return n;
}

namespace detail
{

inline void require_complete(const discrete_sequence &seq, complex_t z, double r)
{
    if (r > seq.complete_reach(z)) {
        std::ostringstream os;
        os.precision(17);
        os << "radius " << r << " about " << to_string(z) << " exceeds the truncation (complete only up to "
           << seq.complete_reach(z) << ")";
        fail(error_kind::incomplete_truncation, os.str());
    }
}

} // namespace detail

/// N(z,r) = int_0^r (n(z,t) - n(z,0))/t dt + n(z,0) log r, evaluated as the
/// equivalent finite sum of logarithms.
inline double integrated_counting(const discrete_sequence &seq, complex_t z, double r)
{
    detail::require(r > 0, "integration radius must be positive");
    detail::require_complete(seq, z, r);
    compensated_sum<double> acc;
    std::size_t at_center = 0;
    for (const auto &p : seq.points()) {
        const double d = std::abs(p - z);
        if (d == 0) {
            ++at_center;
        } else if (d <= r) {
            acc += std::log(r / d);
        }
    }
    if (at_center > 0) {
        acc += static_cast<double>(at_center) * std::log(r);
    }
    return acc.value();
}

struct counting_profile {
    complex_t center{};
    std::size_t n_at_zero = 0;
    std::vector<std::pair<double, std::size_t>> samples; // (t, n(center,t))
    std::vector<std::pair<double, double>> integrated;   // (r, N(center,r))
};

/// Tabulates n and N about one centre. Radii beyond the complete reach are
/// left out of the integrated table.
inline counting_profile make_counting_profile(const discrete_sequence &seq, complex_t center, std::span<const double> radii)
{
    counting_profile prof;
    prof.center = center;
    prof.n_at_zero = counting_function(seq, center, 0.0);
    for (double t : radii) {
        prof.samples.emplace_back(t, counting_function(seq, center, t));
        if (t > 0 && t <= seq.complete_reach(center)) {
            prof.integrated.emplace_back(t, integrated_counting(seq, center, t));
        }
    }
    return prof;
}

/// d(z, seq).
inline double nearest_distance(const discrete_sequence &seq, complex_t z)
{
    detail::require(!seq.empty(), "nearest distance of an empty sequence is undefined");
    double best = std::numeric_limits<double>::infinity();
    for (const auto &p : seq.points()) {
        best = std::min(best, std::abs(p - z));
    }
    return best;
}

struct separation_witness {
    std::size_t first = 0;
    std::size_t second = 0;
    complex_t first_point{};
    complex_t second_point{};
    double distance = 0;
    double radius_sum = 0; // delta_first + delta_second
};

/// Result of a weak-separation query with radii delta = epsilon * exp(-alpha |Im|).
struct separation_profile {
    double epsilon = 0;
    double alpha = 0;
    bool feasible = true;
    /// Pair minimising distance / radius_sum among the pairs examined.
    std::vector<separation_witness> witnesses;
};

namespace detail
{

inline double separation_radius(complex_t p, double epsilon, double alpha)
{
    return epsilon * std::exp(-alpha * std::abs(p.imag()));
}

} // namespace detail

/// Checks that the discs D(lambda, epsilon e^{-alpha |Im lambda|}) are pairwise
/// disjoint, i.e. |l - l'| >= delta_l + delta_l' for every pair. On failure the
/// witness is the pair with the smallest distance-to-radius-sum ratio.
inline separation_profile check_weak_separation(const discrete_sequence &seq, double epsilon, double alpha)
{
    detail::require(epsilon > 0 && alpha > 0, "weak separation needs epsilon > 0 and alpha > 0");
    separation_profile prof{epsilon, alpha, true, {}};
    const auto order = seq.order_by_real();
    const auto pts = seq.points();
    double worst_ratio = std::numeric_limits<double>::infinity();
    std::optional<separation_witness> worst;
    // radii never exceed epsilon, so only pairs with real gap < 2 epsilon can overlap
    for (std::size_t a = 0; a < order.size(); ++a) {
        const auto &p = pts[order[a]];
        const double dp = detail::separation_radius(p, epsilon, alpha);
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const auto &q = pts[order[b]];
            if (q.real() - p.real() >= 2 * epsilon) {
                break;
            }
            const double rs = dp + detail::separation_radius(q, epsilon, alpha);
            const double d = std::abs(p - q);
            if (d < rs && d / rs < worst_ratio) {
                worst_ratio = d / rs;
                worst = separation_witness{std::min(order[a], order[b]), std::max(order[a], order[b]),
                                           pts[std::min(order[a], order[b])], pts[std::max(order[a], order[b])], d, rs};
            }
        }
    }
    if (worst) {
        prof.feasible = false;
        prof.witnesses.push_back(*worst);
    }
    return prof;
}

/// Largest epsilon for which the sequence is weakly separated at the given
/// alpha, with the pair that pins it. Infinite for fewer than two points.
inline separation_profile max_separation_epsilon(const discrete_sequence &seq, double alpha)
{
    detail::require(alpha > 0, "weak separation needs alpha > 0");
    const auto order = seq.order_by_real();
    const auto pts = seq.points();
    double best = std::numeric_limits<double>::infinity();
    std::optional<separation_witness> pin;
    for (std::size_t a = 0; a < order.size(); ++a) {
        const auto &p = pts[order[a]];
        const double wp = std::exp(-alpha * std::abs(p.imag()));
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const auto &q = pts[order[b]];
            // ratio >= distance / 2 >= real gap / 2
            if (q.real() - p.real() >= 2 * best) {
                break;
            }
            const double ws = wp + std::exp(-alpha * std::abs(q.imag()));
            const double d = std::abs(p - q);
            if (d / ws < best) {
                best = d / ws;
                const auto i = std::min(order[a], order[b]);
                const auto j = std::max(order[a], order[b]);
                pin = separation_witness{i, j, pts[i], pts[j], d, 0};
            }
        }
    }
    separation_profile prof{best, alpha, true, {}};
    if (pin) {
        pin->radius_sum = best * (std::exp(-alpha * std::abs(pin->first_point.imag()))
                                  + std::exp(-alpha * std::abs(pin->second_point.imag())));
        prof.witnesses.push_back(*pin);
    }
    return prof;
}

} // namespace bernstein
