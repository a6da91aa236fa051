#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "detail/parallel.hpp"
#include "error.hpp"
#include "sequence.hpp"
#include "summation.hpp"

namespace bernstein
{

/// Half-plane Poisson kernel |Im l| / |x - l|^2 at a real point x.
inline double poisson_kernel(complex_t lambda, double x)
{
    const double dx = x - lambda.real();
    const double y = lambda.imag();
    return std::abs(y) / (dx * dx + y * y);
}

// ---------------------------------------------------------------------------
// Zero-set diagnostics
// ---------------------------------------------------------------------------

struct favorov_diagnostics {
    double base_point = 0; // b
    std::vector<std::pair<double, complex_t>> partial_sums;   // (R, sum_{0<|l|<R} 1/l)
    std::vector<std::pair<double, double>> density_curve;     // (t, n(0,t)/t)
    double linear_density = 0;                                // max of density_curve
    std::vector<std::pair<double, double>> increment_curve;   // (t, [n(0,t+1)-n(0,t)]/t)
    std::vector<std::pair<double, double>> balance_integral;  // (x, int_0^inf [n(b,t)-n(x,t)] dt/t)
    double balance_sup = -std::numeric_limits<double>::infinity();
    double balance_argmax = 0;
};

namespace detail
{

inline void require_off_sequence(const discrete_sequence &seq, double x, const char *what)
{
    for (const auto &p : seq.points()) {
        if (p == complex_t(x, 0)) {
            fail(error_kind::validation, std::string(what) + " coincides with a point of the sequence");
        }
    }
}

} // namespace detail

/// Default base point for the balance integral: the real part of the centroid.
inline double default_base_point(const discrete_sequence &seq)
{
    if (seq.empty()) {
        return 0;
    }
    compensated_sum<double> acc;
    for (const auto &p : seq.points()) {
        acc += p.real();
    }
    double b = acc.value() / static_cast<double>(seq.size());
    // points are off the real axis, but keep b off the sequence regardless
    while (std::any_of(seq.points().begin(), seq.points().end(), [b](complex_t p) { return p == complex_t(b, 0); })) {
        b = std::nextafter(b, std::numeric_limits<double>::infinity());
    }
    return b;
}

/// Balance integral int_0^inf [n(b,t) - n(x,t)] dt/t. For a finite point set the
/// integrand is a step function vanishing for large t, and the integral equals
/// sum_l log(|l - x| / |l - b|).
inline double balance_integral(const discrete_sequence &seq, double b, double x)
{
    compensated_sum<double> acc;
    for (const auto &p : seq.points()) {
        acc += std::log(std::abs(p - x)) - std::log(std::abs(p - b));
    }
    return acc.value();
}

namespace detail
{

struct point_columns {
    std::vector<double> re;
    std::vector<double> im2;

    explicit point_columns(const discrete_sequence &seq)
    {
        re.reserve(seq.size());
        im2.reserve(seq.size());
        for (const auto &p : seq.points()) {
            re.push_back(p.real());
            im2.push_back(p.imag() * p.imag());
        }
    }
};

// sum_l log |l - x|^2 as the log of running products kept in [2^-600, 2^600]
// by exponent extraction; factors too extreme for that are logged directly.
// Four interleaved lanes, combined in a fixed order.
inline double log_dist2_sum(const point_columns &c, double x)
{
    constexpr double big = 0x1p600;
    constexpr double small = 0x1p-600;
    double prod[4] = {1, 1, 1, 1};
    long expo = 0;
    compensated_sum<double> direct;
    auto renorm = [&](double &p) {
        if (p > big || p < small) {
            int e = 0;
            p = std::frexp(p, &e);
            expo += e;
        }
    };
    for (std::size_t i = 0; i < c.re.size(); ++i) {
        const double dx = c.re[i] - x;
        const double d2 = dx * dx + c.im2[i];
        if (d2 > 0x1p300 || d2 < 0x1p-300) {
            direct += std::log(d2);
            continue;
        }
        double &p = prod[i & 3];
        p *= d2;
        renorm(p);
    }
    double total = 0;
    for (double p : prod) {
        total += std::log(p);
    }
    return total + static_cast<double>(expo) * std::numbers::ln2 + direct.value();
}

} // namespace detail

/// Finite-truncation diagnostics for the four zero-set conditions:
/// (a) partial sums of 1/l over discs D(0,R), (b) the density n(0,t)/t,
/// (c) the unit-window increments, (d) the balance integral over x_grid.
/// These are estimates from finite data, not verdicts.
inline favorov_diagnostics favorov_report(const discrete_sequence &seq, double b, std::span<const double> x_grid,
                                          std::span<const double> radii, unsigned threads = 1)
{
    detail::require_off_sequence(seq, b, "base point b");
    for (double x : x_grid) {
        detail::require(std::isfinite(x), "x grid must be finite");
        detail::require_off_sequence(seq, x, "grid point");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        detail::require(radii[i] > 0, "radii must be positive");
        detail::require(i == 0 || radii[i] > radii[i - 1], "radii must be increasing");
        if (radii[i] > seq.truncation_radius()) {
            detail::fail(error_kind::incomplete_truncation,
                         "radius " + std::to_string(radii[i]) + " exceeds the truncation radius");
        }
    }

    favorov_diagnostics rep;
    rep.base_point = b;

    // (a): accumulate in increasing modulus so each partial sum extends the previous one
    std::vector<std::size_t> by_mod(seq.size());
    for (std::size_t i = 0; i < by_mod.size(); ++i) {
        by_mod[i] = i;
    }
    std::sort(by_mod.begin(), by_mod.end(), [&](std::size_t a, std::size_t c) {
        const double ma = std::abs(seq[a]);
        const double mc = std::abs(seq[c]);
        return ma < mc || (ma == mc && a < c);
    });
    compensated_sum<complex_t> partial;
    std::size_t next = 0;
    for (double r : radii) {
        while (next < by_mod.size() && std::abs(seq[by_mod[next]]) < r) {
            const auto &p = seq[by_mod[next]];
            if (p != complex_t(0, 0)) {
                partial += 1.0 / p;
            }
            ++next;
        }
        rep.partial_sums.emplace_back(r, partial.value());
    }

    // (b), (c)
    for (double t : radii) {
        const double n = static_cast<double>(counting_function(seq, 0, t));
        rep.density_curve.emplace_back(t, n / t);
        rep.linear_density = std::max(rep.linear_density, n / t);
        if (t + 1 <= seq.truncation_radius()) {
            const double n1 = static_cast<double>(counting_function(seq, 0, t + 1));
            rep.increment_curve.emplace_back(t, (n1 - n) / t);
        }
    }

    // (d)
    const detail::point_columns cols(seq);
    const double base = detail::log_dist2_sum(cols, b);
    std::vector<double> vals(x_grid.size());
    detail::parallel_for(x_grid.size(), threads,
                         [&](std::size_t i) { vals[i] = 0.5 * (detail::log_dist2_sum(cols, x_grid[i]) - base); });
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        rep.balance_integral.emplace_back(x_grid[i], vals[i]);
        if (vals[i] > rep.balance_sup) {
            rep.balance_sup = vals[i];
            rep.balance_argmax = x_grid[i];
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Local counting condition N(l, |Im l|) <= C |Im l|
// ---------------------------------------------------------------------------

struct local_counting_entry {
    std::size_t index = 0;
    complex_t point{};
    double integrated = 0; // N(l, |Im l|)
    double ratio = 0;      // N / |Im l|
};

struct local_counting_result {
    double c_estimate = 0;
    std::optional<std::size_t> argmax; // index into the sequence
    std::vector<local_counting_entry> per_point;
    std::vector<std::size_t> skipped; // |l| + |Im l| beyond the truncation radius
};

/// Estimates the constant C of N(l, |Im l|) <= C |Im l| over the truncation.
/// Points whose disc reaches past the truncation radius are skipped and listed.
inline local_counting_result local_counting_constant(const discrete_sequence &seq, unsigned threads = 1)
{
    local_counting_result res;
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto &p = seq[i];
        if (std::abs(p) + std::abs(p.imag()) <= seq.truncation_radius()) {
            eligible.push_back(i);
        } else {
            res.skipped.push_back(i);
        }
    }
    std::vector<local_counting_entry> entries(eligible.size());
    detail::parallel_for(eligible.size(), threads, [&](std::size_t e) {
        const std::size_t i = eligible[e];
        const auto &p = seq[i];
        const double r = std::abs(p.imag());
        compensated_sum<double> acc;
        for (std::size_t j : real_window(seq, p.real() - r, p.real() + r)) {
            const double d = std::abs(seq[j] - p);
            if (j == i) {
                acc += std::log(r);
            } else if (d <= r) {
                acc += std::log(r / d);
            }
        }
        entries[e] = local_counting_entry{i, p, acc.value(), acc.value() / r};
    });
    res.per_point = std::move(entries);
    for (const auto &en : res.per_point) {
        if (!res.argmax || en.ratio > res.c_estimate) {
            res.c_estimate = en.ratio;
            res.argmax = en.index;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Poisson balayage sum_l |Im l| / |x - l|^2
// ---------------------------------------------------------------------------

struct balayage_result {
    double sup = 0;
    double argmax = 0;
    std::vector<std::pair<double, double>> values; // (x, balayage)
    std::optional<double> tail_bound;              // caller-supplied, from family metadata
};

inline double poisson_balayage_at(const discrete_sequence &seq, double x)
{
    compensated_sum<double> acc;
    for (const auto &p : seq.points()) {
        acc += poisson_kernel(p, x);
    }
    return acc.value();
}

namespace detail
{

// All terms are positive, so branch-free Kahan summation suffices; four
// interleaved lanes, combined in a fixed order.
inline double balayage_columns(const point_columns &c, std::span<const double> abs_im, double x)
{
    double s[4] = {0, 0, 0, 0};
    double comp[4] = {0, 0, 0, 0};
    const std::size_t n = c.re.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            const double dx = x - c.re[i + l];
            const double y = abs_im[i + l] / (dx * dx + c.im2[i + l]) - comp[l];
            const double t = s[l] + y;
            comp[l] = (t - s[l]) - y;
            s[l] = t;
        }
    }
    compensated_sum<double> acc;
    for (std::size_t l = 0; l < 4; ++l) {
        acc += s[l];
        acc += -comp[l];
    }
    for (; i < n; ++i) {
        acc += poisson_kernel(complex_t(c.re[i], std::sqrt(c.im2[i])), x);
    }
    return acc.value();
}

} // namespace detail

/// Evaluates the balayage exactly over the truncation at every grid point and
/// returns the grid supremum. The tail bound, if known to the caller (e.g. from
/// lattice metadata), is carried through unchanged.
inline balayage_result poisson_balayage(const discrete_sequence &seq, std::span<const double> x_grid,
                                        std::optional<double> tail_bound = std::nullopt, unsigned threads = 1)
{
    detail::require(!x_grid.empty(), "balayage needs a nonempty x grid");
    balayage_result res;
    res.tail_bound = tail_bound;
    const detail::point_columns cols(seq);
    std::vector<double> abs_im(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        abs_im[i] = std::abs(seq[i].imag());
    }
    std::vector<double> vals(x_grid.size());
    detail::parallel_for(x_grid.size(), threads,
                         [&](std::size_t i) { vals[i] = detail::balayage_columns(cols, abs_im, x_grid[i]); });
    res.sup = -1;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        res.values.emplace_back(x_grid[i], vals[i]);
        if (vals[i] > res.sup) {
            res.sup = vals[i];
            res.argmax = x_grid[i];
        }
    }
    return res;
}

/// Bound on the balayage lost by truncating the lattice {k s + i c : |k| <= N}
/// at real points |x| <= x_max. Requires N s > x_max + s.
inline std::optional<double> lattice_balayage_tail(double imag_offset, double spacing, long half_width, double x_max)
{
    const double edge = static_cast<double>(half_width) * spacing - x_max - spacing;
    if (edge <= 0) {
        return std::nullopt;
    }
    // each side: sum_{k>N} |c|/(ks - x)^2 <= (|c|/s) int_{edge}^inf du/u^2
    return 2 * std::abs(imag_offset) / (spacing * edge);
}

/// Deterministic candidate grid for the balayage supremum: the real parts
/// offset by +-1e-6, the midpoints between consecutive distinct real parts, and
/// 512 uniform points across the window of real parts.
inline std::vector<double> default_x_grid(const discrete_sequence &seq)
{
    std::vector<double> re;
    re.reserve(seq.size());
    for (const auto &p : seq.points()) {
        re.push_back(p.real());
    }
    std::sort(re.begin(), re.end());
    re.erase(std::unique(re.begin(), re.end()), re.end());
    std::vector<double> grid;
    grid.reserve(3 * re.size() + 512);
    for (std::size_t i = 0; i < re.size(); ++i) {
        grid.push_back(re[i] - 1e-6);
        grid.push_back(re[i] + 1e-6);
        if (i + 1 < re.size()) {
            grid.push_back(0.5 * (re[i] + re[i + 1]));
        }
    }
    double lo = re.empty() ? -1 : re.front();
    double hi = re.empty() ? 1 : re.back();
    if (lo == hi) {
        lo -= 1;
        hi += 1;
    }
    for (int k = 0; k < 512; ++k) {
        grid.push_back(lo + (hi - lo) * k / 511.0);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline std::vector<double> uniform_x_grid(const discrete_sequence &seq, std::size_t n)
{
    detail::require(n >= 2, "uniform x grid needs at least two points");
    double lo = -1;
    double hi = 1;
    if (!seq.empty()) {
        lo = hi = seq[0].real();
        for (const auto &p : seq.points()) {
            lo = std::min(lo, p.real());
            hi = std::max(hi, p.real());
        }
        if (lo == hi) {
            lo -= 1;
            hi += 1;
        }
    }
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) {
        grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Pairwise Carleson sums
// ---------------------------------------------------------------------------

struct carleson_entry {
    std::size_t index = 0;
    complex_t point{};
    double value = 0;
};

struct carleson_result {
    double sup = 0;
    std::optional<std::size_t> argmax;
    std::vector<carleson_entry> upper; // sum over l' in the upper half-plane, l' != l
    std::vector<carleson_entry> lower; // mirror quantity in the lower half-plane
};

namespace detail
{

inline std::vector<carleson_entry> carleson_half(const discrete_sequence &seq, bool upper, unsigned threads)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if ((seq[i].imag() > 0) == upper) {
            idx.push_back(i);
        }
    }
    std::vector<double> re(idx.size());
    std::vector<double> im(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        re[k] = seq[idx[k]].real();
        im[k] = std::abs(seq[idx[k]].imag());
    }
    std::vector<carleson_entry> out(idx.size());
    parallel_for(idx.size(), threads, [&](std::size_t a) {
        // |l - conj(l')|^2 = (Re l - Re l')^2 + (|Im l| + |Im l'|)^2 within one half-plane
        double s = 0;
        for (std::size_t b = 0; b < idx.size(); ++b) {
            if (b == a) {
                continue;
            }
            const double dx = re[a] - re[b];
            const double dy = im[a] + im[b];
            s += im[b] / (dx * dx + dy * dy);
        }
        out[a] = carleson_entry{idx[a], seq[idx[a]], s};
    });
    return out;
}

} // namespace detail

/// sup over l in the upper half-plane of sum_{l' != l, Im l' > 0} Im l' / |l - conj l'|^2,
/// together with the mirror quantity for the lower half-plane; the larger of
/// the two is reported as sup.
inline carleson_result carleson_pairwise(const discrete_sequence &seq, unsigned threads = 1)
{
    carleson_result res;
    res.upper = detail::carleson_half(seq, true, threads);
    res.lower = detail::carleson_half(seq, false, threads);
    for (const auto *half : {&res.upper, &res.lower}) {
        for (const auto &e : *half) {
            if (!res.argmax || e.value > res.sup) {
                res.sup = e.value;
                res.argmax = e.index;
            }
        }
    }
    return res;
}

/// For a real x, let l be the point of the x's half-plane side (upper half-plane
/// when `upper`) nearest to x. Returns the largest ratio over l' != l in that
/// half-plane of P(l', x) / (|Im l'| / |l - conj l'|^2). The triangle inequality
/// bounds this ratio by 4. Returns 0 when the half-plane holds fewer than two points.
inline double necessity_linkage_ratio(const discrete_sequence &seq, double x, bool upper = true)
{
    std::optional<std::size_t> nearest;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if ((seq[i].imag() > 0) != upper) {
            continue;
        }
        const double d = std::abs(seq[i] - x);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    double worst = 0;
    if (!nearest) {
        return worst;
    }
    const auto l = seq[*nearest];
    for (std::size_t j = 0; j < seq.size(); ++j) {
        if (j == *nearest || (seq[j].imag() > 0) != upper) {
            continue;
        }
        const auto lp = seq[j];
        const double pair = std::abs(lp.imag()) / std::norm(l - std::conj(lp));
        worst = std::max(worst, poisson_kernel(lp, x) / pair);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Aggregate report and thresholds
// ---------------------------------------------------------------------------

struct kernel_sample {
    complex_t point{};
    double x = 0;
    double value = 0;
};

struct condition_report {
    favorov_diagnostics favorov;
    local_counting_result local_counting;
    balayage_result balayage;
    carleson_result carleson;
    separation_profile separation;
    std::vector<kernel_sample> kernel_samples; // largest contributions at the balayage argmax
};

struct analysis_options {
    std::optional<double> base_point;            // defaults to default_base_point
    std::optional<std::vector<double>> x_grid;   // defaults to default_x_grid
    std::vector<double> radii;                   // Favorov radii; empty -> derived from the truncation
    double separation_alpha = 1.0;
    std::optional<double> balayage_tail;
    std::size_t kernel_sample_count = 8;
    unsigned threads = 1;
};

/// Radii 1, 2, 4, ... up to the truncation radius (or the point spread for
/// untruncated sequences).
inline std::vector<double> default_radii(const discrete_sequence &seq)
{
    double limit = seq.truncation_radius();
    if (!std::isfinite(limit)) {
        limit = 1;
        for (const auto &p : seq.points()) {
            limit = std::max(limit, std::abs(p));
        }
    }
    std::vector<double> radii;
    for (double r = 1; r <= limit; r *= 2) {
        radii.push_back(r);
    }
    if (radii.empty() || radii.back() < limit) {
        radii.push_back(limit);
    }
    return radii;
}

inline condition_report analyze(const discrete_sequence &seq, const analysis_options &opt = {})
{
    detail::require(!seq.empty(), "cannot analyze an empty sequence");
    condition_report rep;
    const std::vector<double> grid = opt.x_grid ? *opt.x_grid : default_x_grid(seq);
    const std::vector<double> radii = opt.radii.empty() ? default_radii(seq) : opt.radii;
    rep.favorov = favorov_report(seq, opt.base_point.value_or(default_base_point(seq)), grid, radii, opt.threads);
    rep.local_counting = local_counting_constant(seq, opt.threads);
    rep.balayage = poisson_balayage(seq, grid, opt.balayage_tail, opt.threads);
    rep.carleson = carleson_pairwise(seq, opt.threads);
    rep.separation = max_separation_epsilon(seq, opt.separation_alpha);

    std::vector<kernel_sample> ks;
    ks.reserve(seq.size());
    for (const auto &p : seq.points()) {
        ks.push_back({p, rep.balayage.argmax, poisson_kernel(p, rep.balayage.argmax)});
    }
    const auto take = std::min(opt.kernel_sample_count, ks.size());
    std::partial_sort(ks.begin(), ks.begin() + static_cast<std::ptrdiff_t>(take), ks.end(),
                      [](const kernel_sample &a, const kernel_sample &b) {
                          return a.value > b.value
                                 || (a.value == b.value
                                     && (a.point.real() < b.point.real()
                                         || (a.point.real() == b.point.real() && a.point.imag() < b.point.imag())));
                      });
    ks.resize(take);
    rep.kernel_samples = std::move(ks);
    return rep;
}

struct threshold_set {
    std::optional<double> local_counting;
    std::optional<double> balayage;
    std::optional<double> carleson;
    std::optional<double> linear_density;
    std::optional<double> balance;
};

struct verdict {
    std::string name;
    double value = 0;
    double threshold = 0;
    bool passed = false;
};

/// Compares estimated constants against caller-chosen thresholds. Only the
/// thresholds that are set produce a verdict.
inline std::vector<verdict> apply_thresholds(const condition_report &rep, const threshold_set &th)
{
    std::vector<verdict> out;
    auto add = [&](const char *name, double value, const std::optional<double> &limit) {
        if (limit) {
            out.push_back({name, value, *limit, value <= *limit});
        }
    };
    add("local_counting", rep.local_counting.c_estimate, th.local_counting);
    add("balayage", rep.balayage.sup, th.balayage);
    add("carleson", rep.carleson.sup, th.carleson);
    add("linear_density", rep.favorov.linear_density, th.linear_density);
    add("balance", rep.favorov.balance_sup, th.balance);
    return out;
}

} // namespace bernstein
