#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"

using namespace bernstein;
using testing_support::lattice;

namespace
{

constexpr double pi = std::numbers::pi;

double brute_balayage(const discrete_sequence &seq, double x)
{
    long double s = 0;
    for (const auto &p : seq.points()) {
        const long double dx = x - p.real();
        s += std::abs(p.imag()) / (dx * dx + static_cast<long double>(p.imag()) * p.imag());
    }
    return static_cast<double>(s);
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

} // namespace

TEST(Favorov, PartialSumsOnLattice)
{
    const long n = 2000;
    const auto seq = lattice(n);
    const std::vector<double> radii{1.5, 10.5, 100.5, 2000.0};
    const auto grid = linspace(-0.5, 0.5, 5);
    const auto rep = favorov_report(seq, 0.25, grid, radii);
    ASSERT_EQ(rep.partial_sums.size(), radii.size());
    for (std::size_t r = 0; r < radii.size(); ++r) {
        // |k + i| < R  <=>  k^2 + 1 < R^2
        long double s = 1;
        for (long k = 1; static_cast<double>(k * k + 1) < radii[r] * radii[r]; ++k) {
            s += 2.0L / (static_cast<long double>(k) * k + 1);
        }
        EXPECT_NEAR(rep.partial_sums[r].second.real(), 0.0, 1e-12);
        EXPECT_NEAR(rep.partial_sums[r].second.imag(), -static_cast<double>(s), 1e-12);
    }
    // sum_{k in Z} 1/(k^2+1) = pi coth pi; the tail beyond 2000 is below 2/2000
    EXPECT_NEAR(rep.partial_sums.back().second.imag(), -pi / std::tanh(pi), 2.0 / 1998);
}

TEST(Favorov, LinearDensityApproachesTwo)
{
    const auto seq = lattice(5000);
    const std::vector<double> radii{100, 1000, 4000};
    const auto rep = favorov_report(seq, 0.5, std::vector<double>{0.25}, radii);
    ASSERT_EQ(rep.density_curve.size(), 3u);
    for (const auto &[t, d] : rep.density_curve) {
        EXPECT_NEAR(d, 2.0, 1.0 / t + 1e-12) << "t=" << t;
        EXPECT_LE(d, rep.linear_density);
    }
    for (const auto &[t, inc] : rep.increment_curve) {
        EXPECT_NEAR(inc, 2.0 / t, 2.0 / t);
    }
}

TEST(Favorov, BalanceVanishesAtMirrorPoint)
{
    // symmetric about Re z = c; mirror of b is 2c - b
    const double c = 0.375;
    std::vector<complex_t> pts;
    std::mt19937_64 rng(31);
    for (auto p : testing_support::random_points(rng, 20, 5, 2)) {
        pts.push_back(p);
        pts.emplace_back(2 * c - p.real(), p.imag());
    }
    const discrete_sequence seq(pts);
    const double b = -1.25;
    EXPECT_NEAR(balance_integral(seq, b, 2 * c - b), 0.0, 1e-12);
    EXPECT_EQ(balance_integral(seq, b, b), 0.0);
}

TEST(Favorov, BalanceMatchesDirectLogSum)
{
    std::mt19937_64 rng(37);
    const discrete_sequence seq(testing_support::random_points(rng, 300, 50, 3));
    const auto grid = linspace(-60, 60, 101);
    const double b = default_base_point(seq);
    const auto rep = favorov_report(seq, b, grid, std::vector<double>{});
    ASSERT_EQ(rep.balance_integral.size(), grid.size());
    double sup = -1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        long double s = 0;
        for (const auto &p : seq.points()) {
            s += std::log(static_cast<long double>(std::abs(p - grid[i])))
                 - std::log(static_cast<long double>(std::abs(p - b)));
        }
        EXPECT_NEAR(rep.balance_integral[i].second, static_cast<double>(s), 1e-10);
        sup = std::max(sup, rep.balance_integral[i].second);
    }
    EXPECT_EQ(rep.balance_sup, sup);
}

TEST(Favorov, BalanceAsStepFunctionIntegral)
{
    // int_0^T [n(b,t) - n(x,t)] dt/t by midpoint rule in log t, as an oracle
    std::mt19937_64 rng(41);
    const discrete_sequence seq(testing_support::random_points(rng, 12, 3, 2));
    const double b = 0.1;
    const double x = 1.7;
    const std::size_t steps = 200000;
    const double a = std::log(1e-3);
    const double e = std::log(50.0);
    const double h = (e - a) / static_cast<double>(steps);
    double s = 0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = std::exp(a + (static_cast<double>(i) + 0.5) * h);
        s += static_cast<double>(counting_function(seq, b, t)) - static_cast<double>(counting_function(seq, x, t));
    }
    EXPECT_NEAR(balance_integral(seq, b, x), s * h, 2 * h * static_cast<double>(seq.size()));
}

TEST(Favorov, RadiiBeyondTruncationFail)
{
    const auto seq = lattice(10);
    try {
        favorov_report(seq, 0.5, std::vector<double>{0.25}, std::vector<double>{1, 20});
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.kind(), error_kind::incomplete_truncation);
    }
    EXPECT_THROW(favorov_report(seq, 0.5, std::vector<double>{0.25}, std::vector<double>{2, 1}), error);
}

TEST(LocalCounting, LatticeConstantIsZero)
{
    const auto res = local_counting_constant(lattice(100));
    EXPECT_EQ(res.c_estimate, 0.0);
    for (const auto &e : res.per_point) {
        EXPECT_NEAR(e.integrated, 0.0, 1e-15);
    }
    // |k + i| + 1 exceeds the radius sqrt(100^2 + 1) for |k| >= 99
    EXPECT_EQ(res.skipped.size(), 4u);
}

TEST(LocalCounting, CloseNeighbourRaisesConstant)
{
    std::vector<complex_t> pts{{0.0, 2.0}, {std::exp(-10.0), 2.0}};
    for (int k = 5; k <= 8; ++k) {
        pts.emplace_back(10.0 * k, 1.0);
        pts.emplace_back(-10.0 * k, -1.0);
    }
    const auto res = local_counting_constant(discrete_sequence(pts));
    ASSERT_EQ(res.per_point.size(), pts.size());
    // N(2i, 2) = log(2 / e^-10) + log 2 (the centre's own n(z,0) log r term)
    EXPECT_NEAR(res.per_point[0].integrated, 10 + 2 * std::log(2.0), 1e-12);
    EXPECT_GE(res.per_point[0].ratio, (10 + std::log(2.0)) / 2);
    EXPECT_GE(res.c_estimate, 5.35);
}

TEST(LocalCounting, Singleton)
{
    const auto res = local_counting_constant(discrete_sequence({{0.0, 1.0}}));
    EXPECT_EQ(res.c_estimate, 0.0);
    ASSERT_EQ(res.per_point.size(), 1u);
}

TEST(LocalCounting, MatchesIntegratedCounting)
{
    std::mt19937_64 rng(43);
    const discrete_sequence seq(testing_support::random_points(rng, 80, 8, 3));
    const auto res = local_counting_constant(seq);
    double c = 0;
    for (const auto &e : res.per_point) {
        const double r = std::abs(e.point.imag());
        EXPECT_NEAR(e.integrated, integrated_counting(seq, e.point, r), 1e-12);
        c = std::max(c, e.ratio);
    }
    EXPECT_EQ(res.c_estimate, c);
}

TEST(LocalCounting, ClusteredFamilyGrows)
{
    std::vector<complex_t> pts;
    for (int j = 1; j <= 12; ++j) {
        pts.emplace_back(0.0, j);
        pts.emplace_back(std::exp(-j), j);
    }
    const auto res = local_counting_constant(discrete_sequence(pts));
    // the e^-j term alone gives log(j e^j) / j = 1 + log(j)/j
    for (const auto &e : res.per_point) {
        const double j = e.point.imag();
        EXPECT_GE(e.ratio, 1 + std::log(j) / j - 1e-12);
    }
}

TEST(Balayage, LatticeClosedForm)
{
    const auto seq = lattice(10000);
    const auto res = poisson_balayage(seq, linspace(-0.5, 0.5, 101));
    const double closed = pi * std::sinh(2 * pi) / (std::cosh(2 * pi) - 1);
    EXPECT_NEAR(res.sup, closed, 1e-3);
    EXPECT_NEAR(res.argmax, 0.0, 1e-12);
    for (const auto &[x, v] : res.values) {
        EXPECT_LE(v, res.sup);
        EXPECT_NEAR(v, brute_balayage(seq, x), 1e-12);
    }
}

TEST(Balayage, TailBoundCoversTruncation)
{
    const long n = 1000;
    const auto seq = lattice(n);
    const auto tail = lattice_balayage_tail(1, 1, n, 0.5);
    ASSERT_TRUE(tail);
    for (double x : {-0.5, 0.0, 0.3, 0.5}) {
        // sum over all k of 1/((x-k)^2+1) = pi sinh(2pi) / (cosh(2pi) - cos(2pi x))
        const double full = pi * std::sinh(2 * pi) / (std::cosh(2 * pi) - std::cos(2 * pi * x));
        const double got = poisson_balayage_at(seq, x);
        EXPECT_LE(got, full);
        EXPECT_LE(full - got, *tail);
    }
}

TEST(Balayage, SinglePoint)
{
    const discrete_sequence seq({{0.0, 1.0}});
    const auto res = poisson_balayage(seq, linspace(-2, 2, 41));
    EXPECT_DOUBLE_EQ(res.sup, 1.0);
    for (const auto &[x, v] : res.values) {
        EXPECT_NEAR(v, 1 / (x * x + 1), 1e-16);
    }
}

TEST(Balayage, AdditiveOverUnion)
{
    std::vector<complex_t> pa_pts;
    std::vector<complex_t> pb_pts;
    for (int k = -200; k <= 200; ++k) {
        pa_pts.emplace_back(k, 1.0);
        pb_pts.emplace_back(k + 0.5, 1.0);
    }
    const discrete_sequence a(pa_pts);
    const discrete_sequence b(pb_pts);
    const auto u = merge(a, b);
    for (double x : linspace(-3, 3, 61)) {
        const double pa = poisson_balayage_at(a, x);
        const double pb = poisson_balayage_at(b, x);
        EXPECT_NEAR(poisson_balayage_at(u, x), pa + pb, 4e-16 * (pa + pb));
    }
}

TEST(Balayage, HorizontalTranslationInvariance)
{
    std::mt19937_64 rng(47);
    const auto pts = testing_support::random_points(rng, 50, 5, 2);
    const discrete_sequence seq(pts);
    for (double a : {0.5, -2.25, 3.125}) {
        std::vector<complex_t> moved;
        for (const auto &p : pts) {
            moved.push_back(p + a);
        }
        const discrete_sequence shifted(moved);
        for (double x : linspace(-6, 6, 25)) {
            EXPECT_NEAR(poisson_balayage_at(shifted, x + a), poisson_balayage_at(seq, x),
                        1e-13 * poisson_balayage_at(seq, x));
        }
    }
}

TEST(Balayage, DensityScaling)
{
    const auto base = poisson_balayage(lattice(10000), linspace(0, 1, 21)).sup;
    for (int m : {2, 5, 10}) {
        const auto seq = lattice(10000L * m, 1.0, 1.0 / m);
        const auto s = poisson_balayage(seq, linspace(0, 1.0 / m, 11)).sup;
        EXPECT_GE(s / base, m * 0.95) << "m=" << m;
        EXPECT_LE(s / base, m * 1.05) << "m=" << m;
    }
}

TEST(Balayage, ThreadCountDoesNotChangeValues)
{
    std::mt19937_64 rng(53);
    const discrete_sequence seq(testing_support::random_points(rng, 500, 20, 4));
    const auto grid = default_x_grid(seq);
    const auto one = poisson_balayage(seq, grid, std::nullopt, 1);
    const auto four = poisson_balayage(seq, grid, std::nullopt, 4);
    ASSERT_EQ(one.values.size(), four.values.size());
    for (std::size_t i = 0; i < one.values.size(); ++i) {
        EXPECT_EQ(one.values[i].second, four.values[i].second);
    }
}

TEST(DefaultGrid, ContainsCandidates)
{
    const discrete_sequence seq({{0.0, 1.0}, {2.0, -1.0}, {2.0, 3.0}});
    const auto grid = default_x_grid(seq);
    EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
    for (double x : {-1e-6, 1e-6, 1.0, 2 - 1e-6, 2 + 1e-6, 0.0, 2.0}) {
        EXPECT_NE(std::find(grid.begin(), grid.end(), x), grid.end()) << x;
    }
    EXPECT_EQ(grid.size(), 5u + 512u);
}

TEST(Carleson, LatticeClosedForm)
{
    const auto res = carleson_pairwise(lattice(10000));
    const double closed = pi / 2 / std::tanh(2 * pi) - 0.25;
    ASSERT_EQ(res.upper.size(), 20001u);
    EXPECT_TRUE(res.lower.empty());
    // central point sees the full symmetric sum up to the truncation
    EXPECT_NEAR(res.upper[10000].value, closed, 1e-3);
    EXPECT_NEAR(res.sup, closed, 1e-3);
}

TEST(Carleson, TwoPoints)
{
    const auto res = carleson_pairwise(discrete_sequence({{0.0, 1.0}, {0.0, 3.0}}));
    ASSERT_EQ(res.upper.size(), 2u);
    EXPECT_DOUBLE_EQ(res.upper[0].value, 3.0 / 16);
    EXPECT_DOUBLE_EQ(res.upper[1].value, 1.0 / 16);
    EXPECT_DOUBLE_EQ(res.sup, 3.0 / 16);
    EXPECT_EQ(res.argmax, 0u);
}

TEST(Carleson, MirrorSymmetry)
{
    std::mt19937_64 rng(59);
    auto pts = testing_support::random_points(rng, 40, 5, 3);
    for (auto &p : pts) {
        p = {p.real(), std::abs(p.imag())};
    }
    std::vector<complex_t> mirrored;
    for (const auto &p : pts) {
        mirrored.push_back(std::conj(p));
    }
    const auto up = carleson_pairwise(discrete_sequence(pts));
    const auto down = carleson_pairwise(discrete_sequence(mirrored));
    ASSERT_EQ(up.upper.size(), down.lower.size());
    for (std::size_t i = 0; i < up.upper.size(); ++i) {
        EXPECT_EQ(up.upper[i].value, down.lower[i].value);
    }
    EXPECT_EQ(up.sup, down.sup);
}

TEST(Carleson, MatchesBruteForce)
{
    std::mt19937_64 rng(61);
    const discrete_sequence seq(testing_support::random_points(rng, 60, 5, 3));
    const auto res = carleson_pairwise(seq);
    for (const auto *half : {&res.upper, &res.lower}) {
        for (const auto &e : *half) {
            double s = 0;
            for (const auto &q : seq.points()) {
                if (q != e.point && (q.imag() > 0) == (e.point.imag() > 0)) {
                    s += std::abs(q.imag()) / std::norm(e.point - std::conj(q));
                }
            }
            EXPECT_NEAR(e.value, s, 1e-13 * s);
            EXPECT_LE(e.value, res.sup);
        }
    }
}

TEST(NecessityLinkage, RatioBoundedByFour)
{
    std::mt19937_64 rng(67);
    for (int rep = 0; rep < 20; ++rep) {
        const discrete_sequence seq(testing_support::random_points(rng, 50, 10, 4));
        for (double x : linspace(-12, 12, 49)) {
            EXPECT_LE(necessity_linkage_ratio(seq, x, true), 4.0);
            EXPECT_LE(necessity_linkage_ratio(seq, x, false), 4.0);
        }
    }
}

TEST(NecessityLinkage, FactorTwoIsNotUniform)
{
    // i is nearest to 0, yet P(l', 0) exceeds 2 Im l' / |i - conj l'|^2
    const discrete_sequence seq({{0.0, 1.0}, {0.87, 0.5}});
    const double ratio = necessity_linkage_ratio(seq, 0.0);
    EXPECT_NEAR(ratio, (0.87 * 0.87 + 1.5 * 1.5) / (0.87 * 0.87 + 0.25), 1e-12);
    EXPECT_GT(ratio, 2.9);
}

TEST(Analyze, ReportSupsDominateSamples)
{
    std::mt19937_64 rng(71);
    const discrete_sequence seq(testing_support::random_points(rng, 120, 10, 3), 40.0);
    const auto rep = analyze(seq);
    for (const auto &[x, v] : rep.balayage.values) {
        EXPECT_LE(v, rep.balayage.sup);
    }
    for (const auto &[x, v] : rep.favorov.balance_integral) {
        EXPECT_LE(v, rep.favorov.balance_sup);
    }
    for (const auto &e : rep.local_counting.per_point) {
        EXPECT_LE(e.ratio, rep.local_counting.c_estimate);
    }
    ASSERT_EQ(rep.kernel_samples.size(), 8u);
    for (std::size_t i = 0; i < rep.kernel_samples.size(); ++i) {
        const auto &k = rep.kernel_samples[i];
        EXPECT_EQ(k.x, rep.balayage.argmax);
        EXPECT_DOUBLE_EQ(k.value, poisson_kernel(k.point, k.x));
        EXPECT_LE(k.value, rep.balayage.sup);
        if (i > 0) {
            EXPECT_LE(k.value, rep.kernel_samples[i - 1].value);
        }
    }
}

TEST(Analyze, ThresholdVerdicts)
{
    const auto rep = analyze(lattice(50));
    threshold_set th;
    th.balayage = 3.2;
    th.carleson = 1.0;
    const auto v = apply_thresholds(rep, th);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].name, "balayage");
    EXPECT_TRUE(v[0].passed);
    EXPECT_EQ(v[1].name, "carleson");
    EXPECT_FALSE(v[1].passed);
}

TEST(Analyze, EmptySequenceRejected)
{
    EXPECT_THROW(analyze(discrete_sequence({})), error);
}
