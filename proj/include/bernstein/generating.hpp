#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "sequence.hpp"
#include "weights.hpp"

namespace bernstein
{

enum class generator_kind { shifted_sine, perturbed_sine, finite_product };

inline const char *to_string(generator_kind k)
{
    switch (k) {
        case generator_kind::shifted_sine:
            return "shifted_sine";
        case generator_kind::perturbed_sine:
            return "perturbed_sine";
        case generator_kind::finite_product:
            return "finite_product";
    }
    return "unknown";
}

/// One perturbed pair: the sine zeros +-k are replaced by p_{+-k} = +-k + i eps.
struct perturbed_index {
    std::int64_t k = 0; // positive
    double epsilon = 0;
};

namespace detail
{

inline constexpr double pi = std::numbers::pi;
inline constexpr double zero_match_tol = 1e-12;
// beyond this height products are accumulated as complex logarithms
inline constexpr double log_space_height = 50;

inline double parity(std::int64_t n)
{
    return (n % 2 == 0) ? 1.0 : -1.0;
}

// sin(pi w) with the integer part of Re w removed exactly first.
inline complex_t sin_pi(complex_t w)
{
    const double n = std::nearbyint(w.real());
    const complex_t r(w.real() - n, w.imag());
    return parity(static_cast<std::int64_t>(n)) * std::sin(pi * r);
}

inline complex_t cos_pi(complex_t w)
{
    const double n = std::nearbyint(w.real());
    const complex_t r(w.real() - n, w.imag());
    return parity(static_cast<std::int64_t>(n)) * std::cos(pi * r);
}

// A branch of log sin(pi w), accurate for large |Im w|.
inline complex_t log_sin_pi(complex_t w)
{
    if (std::abs(w.imag()) < 1) {
        return std::log(sin_pi(w));
    }
    const double n = std::nearbyint(w.real());
    const complex_t r(w.real() - n, w.imag());
    const complex_t i(0, 1);
    complex_t out;
    if (r.imag() > 0) {
        // sin(pi r) = (i/2) e^{-i pi r} (1 - e^{2 i pi r})
        out = std::log(complex_t(0, 0.5)) - i * pi * r + std::log(1.0 - std::exp(2.0 * i * pi * r));
    } else {
        out = std::log(complex_t(0, -0.5)) + i * pi * r + std::log(1.0 - std::exp(-2.0 * i * pi * r));
    }
    if (static_cast<std::int64_t>(n) % 2 != 0) {
        out += complex_t(0, pi);
    }
    return out;
}

inline complex_t sinc_pi_series(complex_t h)
{
    // sin(pi h)/(pi h) through order 6
    const complex_t x2 = (pi * h) * (pi * h);
    return 1.0 + x2 * (-1.0 / 6 + x2 * (1.0 / 120 - x2 / 5040.0));
}

} // namespace detail

/// A structured entire function with a known zero set:
///  - shifted_sine:   sin(pi (z - shift) / spacing), zeros shift + n spacing;
///  - perturbed_sine: sin(pi z) with each pair of zeros +-k, k in I, moved to
///                    +-k + i eps_k;
///  - finite_product: prod (z - zeta). Polynomials are not of exponential type
///                    bounded on the line, so this kind is for diagnostics only.
class generating_function
{
public:
    static generating_function shifted_sine(complex_t shift, double spacing = 1.0)
    {
        detail::require(spacing > 0 && std::isfinite(spacing), "sine spacing must be positive");
        generating_function g;
        g.kind_ = generator_kind::shifted_sine;
        g.shift_ = shift;
        g.spacing_ = spacing;
        return g;
    }

    static generating_function perturbed_sine(std::vector<perturbed_index> perturbed, double delta)
    {
        detail::require(delta > 0, "perturbed sine needs delta > 0");
        std::sort(perturbed.begin(), perturbed.end(), [](auto a, auto b) { return a.k < b.k; });
        for (std::size_t i = 0; i < perturbed.size(); ++i) {
            const auto &p = perturbed[i];
            detail::require(p.k > 0, "perturbed indices are stored as positive k (the pair +-k)");
            detail::require(i == 0 || perturbed[i - 1].k != p.k, "perturbed index repeated");
            detail::require(p.epsilon > 0 && p.epsilon <= 5 * delta * (1 + 1e-12),
                            "perturbation eps_k must lie in (0, 5 delta]");
        }
        generating_function g;
        g.kind_ = generator_kind::perturbed_sine;
        g.perturbed_ = std::move(perturbed);
        g.delta_ = delta;
        return g;
    }

    static generating_function finite_product(std::vector<complex_t> zeros)
    {
        std::stable_sort(zeros.begin(), zeros.end(), [](complex_t a, complex_t b) { return std::abs(a) < std::abs(b); });
        generating_function g;
        g.kind_ = generator_kind::finite_product;
        g.finite_zeros_ = std::move(zeros);
        return g;
    }

    generator_kind kind() const noexcept
    {
        return kind_;
    }
    complex_t shift() const noexcept
    {
        return shift_;
    }
    double spacing() const noexcept
    {
        return spacing_;
    }
    double delta() const noexcept
    {
        return delta_;
    }
    const std::vector<perturbed_index> &perturbed() const noexcept
    {
        return perturbed_;
    }
    const std::vector<complex_t> &finite_zeros() const noexcept
    {
        return finite_zeros_;
    }

    /// Whether the function is of exponential type and bounded on a line.
    bool in_bernstein_algebra() const noexcept
    {
        return kind_ != generator_kind::finite_product;
    }

    std::optional<double> perturbation_of(std::int64_t k) const
    {
        const auto ak = k < 0 ? -k : k;
        const auto it = std::lower_bound(perturbed_.begin(), perturbed_.end(), ak,
                                         [](const perturbed_index &p, std::int64_t v) { return p.k < v; });
        if (it != perturbed_.end() && it->k == ak) {
            return it->epsilon;
        }
        return std::nullopt;
    }

    complex_t operator()(complex_t z) const
    {
        switch (kind_) {
            case generator_kind::shifted_sine:
                if (std::abs(z.imag() - shift_.imag()) / spacing_ > detail::log_space_height) {
                    return std::exp(log_value(z));
                }
                return detail::sin_pi((z - shift_) / spacing_);
            case generator_kind::finite_product: {
                complex_t prod = 1.0;
                for (const auto &zeta : finite_zeros_) {
                    prod *= z - zeta;
                }
                return prod;
            }
            case generator_kind::perturbed_sine:
                if (std::abs(z.imag()) > detail::log_space_height) {
                    return std::exp(log_value(z));
                }
                return perturbed_value(z);
        }
        return 0.0;
    }

    /// A branch of log F(z). Real part is log|F(z)| (-inf at zeros).
    complex_t log_value(complex_t z) const
    {
        switch (kind_) {
            case generator_kind::shifted_sine:
                return detail::log_sin_pi((z - shift_) / spacing_);
            case generator_kind::finite_product: {
                complex_t acc = 0.0;
                for (const auto &zeta : finite_zeros_) {
                    acc += std::log(z - zeta);
                }
                return acc;
            }
            case generator_kind::perturbed_sine: {
                if (std::abs(z.imag()) <= detail::log_space_height) {
                    return std::log(perturbed_value(z));
                }
                complex_t acc = detail::log_sin_pi(z);
                for (const auto &p : perturbed_) {
                    acc += std::log(pair_factor(p, z));
                }
                return acc;
            }
        }
        return 0.0;
    }

    double log_abs(complex_t z) const
    {
        return log_value(z).real();
    }

    /// The registered zero within 1e-12 of z0, if any.
    std::optional<complex_t> match_zero(complex_t z0) const
    {
        switch (kind_) {
            case generator_kind::shifted_sine: {
                const complex_t w = (z0 - shift_) / spacing_;
                const double n = std::nearbyint(w.real());
                const complex_t zero = shift_ + n * spacing_;
                if (std::abs(z0 - zero) <= detail::zero_match_tol * std::max(1.0, std::abs(zero))) {
                    return zero;
                }
                return std::nullopt;
            }
            case generator_kind::finite_product:
                for (const auto &zeta : finite_zeros_) {
                    if (std::abs(z0 - zeta) <= detail::zero_match_tol * std::max(1.0, std::abs(zeta))) {
                        return zeta;
                    }
                }
                return std::nullopt;
            case generator_kind::perturbed_sine: {
                const double tol = detail::zero_match_tol * std::max(1.0, std::abs(z0));
                const double n = std::nearbyint(z0.real());
                const auto k = static_cast<std::int64_t>(n);
                if (const auto eps = perturbation_of(k)) {
                    const complex_t p(n, *eps);
                    if (std::abs(z0 - p) <= tol) {
                        return p;
                    }
                } else if (std::abs(z0 - n) <= tol) {
                    return complex_t(n, 0);
                }
                return std::nullopt;
            }
        }
        return std::nullopt;
    }

    /// F'(z0) at a registered zero, from the structured factorisation (the
    /// vanishing factor is replaced by its derivative).
    complex_t derivative_at_zero(complex_t z0) const
    {
        const auto zero = match_zero(z0);
        if (!zero) {
            detail::fail(error_kind::validation, to_string(z0) + " is not a registered zero of the " + to_string(kind_));
        }
        const complex_t a = *zero;
        switch (kind_) {
            case generator_kind::shifted_sine: {
                const double n = std::nearbyint(((a - shift_) / spacing_).real());
                return detail::pi / spacing_ * detail::parity(static_cast<std::int64_t>(n));
            }
            case generator_kind::finite_product: {
                complex_t prod = 1.0;
                bool skipped = false;
                for (const auto &zeta : finite_zeros_) {
                    if (!skipped && zeta == a) {
                        skipped = true;
                        continue;
                    }
                    prod *= a - zeta;
                }
                return prod;
            }
            case generator_kind::perturbed_sine: {
                const auto k = static_cast<std::int64_t>(std::nearbyint(a.real()));
                if (a.imag() == 0) {
                    complex_t prod = detail::pi * detail::parity(k);
                    for (const auto &p : perturbed_) {
                        prod *= pair_factor(p, a);
                    }
                    return prod;
                }
                const auto ak = k < 0 ? -k : k;
                const double kk = static_cast<double>(ak);
                const double eps = a.imag();
                const complex_t pk(kk, eps);
                const complex_t pmk(-kk, eps);
                const complex_t other = k > 0 ? pmk : pk;
                // d/dz of (z - p_k)(z - p_{-k}) / ((z - k)(z + k)) * (-k^2 / (p_k p_{-k})) at z = a
                const complex_t dpair = (a - other) / ((a - kk) * (a + kk)) * (-kk * kk / (pk * pmk));
                complex_t prod = detail::sin_pi(a) * dpair;
                for (const auto &p : perturbed_) {
                    if (p.k != ak) {
                        prod *= pair_factor(p, a);
                    }
                }
                return prod;
            }
        }
        return 0.0;
    }

    /// All zeros in the closed disc |z - center| <= radius.
    std::vector<complex_t> zeros_in_disc(complex_t center, double radius) const
    {
        std::vector<complex_t> out;
        auto keep = [&](complex_t z) {
            if (std::abs(z - center) <= radius) {
                out.push_back(z);
            }
        };
        switch (kind_) {
            case generator_kind::shifted_sine: {
                const complex_t w = (center - shift_) / spacing_;
                const double lo = std::floor(w.real() - radius / spacing_) - 1;
                const double hi = std::ceil(w.real() + radius / spacing_) + 1;
                for (double n = lo; n <= hi; ++n) {
                    keep(shift_ + n * spacing_);
                }
                break;
            }
            case generator_kind::finite_product:
                for (const auto &z : finite_zeros_) {
                    keep(z);
                }
                break;
            case generator_kind::perturbed_sine: {
                const double lo = std::floor(center.real() - radius) - 1;
                const double hi = std::ceil(center.real() + radius) + 1;
                for (double n = lo; n <= hi; ++n) {
                    const auto k = static_cast<std::int64_t>(n);
                    if (const auto eps = perturbation_of(k)) {
                        keep(complex_t(n, *eps));
                    } else {
                        keep(complex_t(n, 0));
                    }
                }
                break;
            }
        }
        return out;
    }

    /// Distance from z to the nearest zero, optionally ignoring the zero at
    /// the origin (which the perturbed sine keeps by construction).
    double zero_distance(complex_t z, bool skip_origin = false) const
    {
        double best = std::numeric_limits<double>::infinity();
        auto consider = [&](complex_t zero) {
            if (skip_origin && zero == complex_t(0, 0)) {
                return;
            }
            best = std::min(best, std::abs(z - zero));
        };
        switch (kind_) {
            case generator_kind::finite_product:
                for (const auto &zeta : finite_zeros_) {
                    consider(zeta);
                }
                return best;
            case generator_kind::shifted_sine: {
                const complex_t w = (z - shift_) / spacing_;
                const double n = std::nearbyint(w.real());
                for (double m = n - 1; m <= n + 1; ++m) {
                    consider(shift_ + m * spacing_);
                }
                return best;
            }
            case generator_kind::perturbed_sine: {
                for (const auto &p : perturbed_) {
                    consider(complex_t(static_cast<double>(p.k), p.epsilon));
                    consider(complex_t(-static_cast<double>(p.k), p.epsilon));
                }
                // nearest unperturbed integers on each side
                const double base = std::floor(z.real());
                for (int dir : {-1, 1}) {
                    double m = dir < 0 ? base : base + 1;
                    for (;; m += dir) {
                        const auto k = static_cast<std::int64_t>(m);
                        if (perturbation_of(k) || (skip_origin && k == 0)) {
                            continue;
                        }
                        consider(complex_t(m, 0));
                        break;
                    }
                }
                return best;
            }
        }
        return best;
    }

private:
    // (1 - eps(eps + 2iz)/(z^2 - k^2)) / (1 + eps^2/k^2), the grouped +-k factor.
    static complex_t pair_factor(const perturbed_index &p, complex_t z)
    {
        const double k = static_cast<double>(p.k);
        const double e = p.epsilon;
        return (1.0 - e * (e + complex_t(0, 2) * z) / (z * z - k * k)) / (1.0 + e * e / (k * k));
    }

    complex_t perturbed_value(complex_t z) const
    {
        const double n = std::nearbyint(z.real());
        const auto kn = static_cast<std::int64_t>(n);
        const auto near_eps = perturbation_of(kn);
        const bool near_pole = kn != 0 && near_eps && std::abs(z - n) < near_node_radius;
        complex_t prod = 1.0;
        for (const auto &p : perturbed_) {
            if (near_pole && p.k == (kn < 0 ? -kn : kn)) {
                continue;
            }
            prod *= pair_factor(p, z);
        }
        if (!near_pole) {
            return detail::sin_pi(z) * prod;
        }
        // sin(pi z) times the +-k factor, with sin(pi z)/(z^2 - k^2) evaluated jointly
        const double k = std::abs(n);
        const double e = *near_eps;
        const complex_t h = z - n;
        const complex_t s = detail::parity(kn) * std::sin(detail::pi * h);
        const complex_t q = detail::parity(kn) * detail::pi * detail::sinc_pi_series(h) / (z + n);
        const complex_t joint = (s - e * (e + complex_t(0, 2) * z) * q) / (1.0 + e * e / (k * k));
        return joint * prod;
    }

    static constexpr double near_node_radius = 1e-4;

    generator_kind kind_ = generator_kind::shifted_sine;
    complex_t shift_{};
    double spacing_ = 1;
    std::vector<perturbed_index> perturbed_;
    double delta_ = 0;
    std::vector<complex_t> finite_zeros_;
};

inline complex_t generating_eval(const generating_function &F, complex_t z)
{
    return F(z);
}

inline double generating_log_abs(const generating_function &F, complex_t z)
{
    return F.log_abs(z);
}

inline complex_t generating_derivative_at_zero(const generating_function &F, complex_t z0)
{
    return F.derivative_at_zero(z0);
}

// ---------------------------------------------------------------------------
// Perturbed sine construction
// ---------------------------------------------------------------------------

/// Lower-bound certificate of a perturbed sine on the sequence it was built for.
struct sine_certificate {
    double epsilon = 0;           // min of |F(l)| (|l| >= delta) and |F(l)|/|l| (|l| < delta)
    double min_abs_value = 0;     // min |F(l)|
    double min_zero_distance = 0; // min distance from a nonzero zero of F to the sequence
    double origin_distance = 0;   // d(0, sequence); the origin zero is kept by construction
};

struct perturbed_sine_result {
    generating_function function;
    sine_certificate certificate;
};

namespace detail
{

// min |l - l'| among points with |Im| < 1
inline double near_line_gap(const discrete_sequence &seq)
{
    std::vector<complex_t> near;
    for (const auto &p : seq.points()) {
        if (std::abs(p.imag()) < 1) {
            near.push_back(p);
        }
    }
    std::sort(near.begin(), near.end(), [](complex_t a, complex_t b) { return a.real() < b.real(); });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < near.size(); ++a) {
        for (std::size_t b = a + 1; b < near.size(); ++b) {
            if (near[b].real() - near[a].real() >= best) {
                break;
            }
            best = std::min(best, std::abs(near[a] - near[b]));
        }
    }
    return best;
}

} // namespace detail

/// Moves the sine zeros that come within delta of the sequence.
///
/// I = {k >= 1 : some l has |l - k| < delta or |l + k| < delta}. For each k in I,
/// eps_k is the first value of delta/2, delta, 3 delta/2, ..., 5 delta with
/// |+-k + i eps_k - l| >= delta for every l; the same eps_k is used for -k.
/// Requires delta <= gap/10, with gap the minimal distance between points with
/// |Im| < 1.
inline perturbed_sine_result build_perturbed_sine(const discrete_sequence &seq, double delta)
{
    detail::require(delta > 0 && std::isfinite(delta), "delta must be positive");
    const double gap = detail::near_line_gap(seq);
    if (!(delta <= gap / 10)) {
        std::ostringstream os;
        os.precision(17);
        os << "delta " << delta << " exceeds a tenth of the minimal gap " << gap << " among points with |Im| < 1";
        detail::fail(error_kind::validation, os.str());
    }

    std::vector<std::int64_t> indices;
    for (const auto &p : seq.points()) {
        if (std::abs(p.imag()) >= delta) {
            continue;
        }
        for (double m = std::ceil(p.real() - delta); m <= std::floor(p.real() + delta); ++m) {
            if (m != 0 && std::abs(p - m) < delta) {
                indices.push_back(static_cast<std::int64_t>(std::abs(m)));
            }
        }
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

    std::vector<perturbed_index> perturbed;
    for (const auto k : indices) {
        const double kk = static_cast<double>(k);
        std::optional<double> chosen;
        for (int step = 1; step <= 10 && !chosen; ++step) {
            const double eps = 0.5 * delta * step;
            const complex_t pk(kk, eps);
            const complex_t pmk(-kk, eps);
            const bool ok = std::all_of(seq.points().begin(), seq.points().end(), [&](complex_t l) {
                return std::abs(pk - l) >= delta && std::abs(pmk - l) >= delta;
            });
            if (ok) {
                chosen = eps;
            }
        }
        if (!chosen) {
            std::ostringstream os;
            os.precision(17);
            os << "no admissible eps_k in (0, 5 delta] for k = " << k << "; nearby points:";
            for (const auto &l : seq.points()) {
                if (std::abs(std::abs(l.real()) - kk) <= 6 * delta && std::abs(l.imag()) <= 6 * delta) {
                    os << ' ' << to_string(l);
                }
            }
            detail::fail(error_kind::construction, os.str());
        }
        perturbed.push_back({k, *chosen});
    }

    perturbed_sine_result res{generating_function::perturbed_sine(std::move(perturbed), delta), {}};
    auto &cert = res.certificate;
    cert.epsilon = std::numeric_limits<double>::infinity();
    cert.min_abs_value = std::numeric_limits<double>::infinity();
    cert.min_zero_distance = std::numeric_limits<double>::infinity();
    cert.origin_distance = seq.empty() ? std::numeric_limits<double>::infinity() : nearest_distance(seq, 0);
    for (const auto &l : seq.points()) {
        const double v = std::abs(res.function(l));
        const double m = std::abs(l);
        cert.min_abs_value = std::min(cert.min_abs_value, v);
        cert.epsilon = std::min(cert.epsilon, m >= delta ? v : v / m);
        cert.min_zero_distance = std::min(cert.min_zero_distance, res.function.zero_distance(l, true));
    }
    return res;
}

} // namespace bernstein
