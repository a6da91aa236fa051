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
const std::vector<double> type_heights{5, 10, 20, 40};

// Regression bound frozen from the first measurement (0.0020285).
constexpr double unit_values_stability_bound = 2.03e-3;

} // namespace

// ---------------------------------------------------------------------------
// Jensen
// ---------------------------------------------------------------------------

TEST(Jensen, MeanValueOfLogModulus)
{
    const auto res = jensen_check([](complex_t z) { return z; }, std::span<const complex_t>{}, complex_t(1, 0), 0.5);
    EXPECT_LT(res.residual, 1e-9);
    EXPECT_EQ(res.counting, 0.0);
}

TEST(Jensen, SineWithoutZerosInDisc)
{
    const auto F = generating_function::shifted_sine(0.0);
    const auto res = jensen_check(F, complex_t(0, 1), 0.9);
    EXPECT_LT(res.residual, 1e-9);
}

TEST(Jensen, SineTwoZeros)
{
    const auto F = generating_function::shifted_sine(0.0);
    const auto res = jensen_check(F, complex_t(0.5, 0), 1.0);
    EXPECT_NEAR(res.counting, 2 * std::log(2.0), 1e-15);
    EXPECT_LT(res.residual, 1e-8);
    // the same check through a plain callable and an explicit zero list
    const std::vector<complex_t> zeros{0.0, 1.0};
    const auto alt = jensen_check([](complex_t z) { return std::sin(pi * z); }, std::span<const complex_t>(zeros),
                                  complex_t(0.5, 0), 1.0);
    EXPECT_LT(alt.residual, 1e-8);
}

TEST(Jensen, RandomAdmissibleCircles)
{
    std::mt19937_64 rng(201);
    const std::vector<generating_function> fs{
        generating_function::shifted_sine(complex_t(0.2, 1), 1.0),
        build_perturbed_sine(discrete_sequence({{1.0, 1e-3}, {-2.02, -0.01}, {4.0, 2.0}}), 0.05).function,
        generating_function::finite_product({{0.0, 1.0}, {1.5, 0.5}, {-2.0, 2.0}, {0.5, 3.0}}),
    };
    std::uniform_real_distribution<double> uc(-3, 3);
    std::uniform_real_distribution<double> ur(0.3, 3);
    for (const auto &F : fs) {
        int done = 0;
        while (done < 20) {
            const complex_t c(uc(rng), uc(rng));
            const double r = ur(rng);
            // admissible: no zero at the centre or within 0.05 of the circle
            const auto nearby = F.zeros_in_disc(c, r + 0.05);
            bool ok = F.zero_distance(c) > 1e-3;
            for (const auto &a : nearby) {
                ok = ok && std::abs(std::abs(a - c) - r) > 0.05;
            }
            if (!ok) {
                continue;
            }
            const auto res = jensen_check(F, c, r);
            EXPECT_LT(res.residual, 1e-8) << to_string(F.kind()) << " c=" << c << " r=" << r;
            ++done;
        }
    }
}

TEST(Jensen, ZeroAtCentreNeedsLeadingCoefficient)
{
    const auto f = [](complex_t z) { return z * (z - 2.0); };
    const std::vector<complex_t> zeros{0.0, 2.0};
    EXPECT_THROW(jensen_check(f, std::span<const complex_t>(zeros), complex_t(0, 0), 1.0), error);
    jensen_options opt;
    opt.center_log_leading = std::log(2.0); // f(z)/z -> -2
    const auto res = jensen_check(f, std::span<const complex_t>(zeros), complex_t(0, 0), 1.0, opt);
    EXPECT_LT(res.residual, 1e-9);
}

TEST(Jensen, ZeroOnCircleFails)
{
    const auto F = generating_function::shifted_sine(0.0);
    try {
        jensen_check(F, complex_t(0.5, 0), 0.5);
        FAIL();
    } catch (const error &e) {
        EXPECT_TRUE(e.kind() == error_kind::numerical || e.kind() == error_kind::validation);
    }
}

TEST(Jensen, RotatedGridRetry)
{
    // a listed zero sits exactly on the first grid's node at angle 0; the
    // function is modified so that it does not really vanish there
    const std::vector<complex_t> listed{complex_t(1.5, 0)};
    const auto f = [](complex_t z) { return z - complex_t(0, 3); };
    EXPECT_NO_THROW(jensen_check(f, std::span<const complex_t>(listed), complex_t(0, 0), 1.5));
}

// ---------------------------------------------------------------------------
// exponential type
// ---------------------------------------------------------------------------

TEST(ExponentialType, Sine)
{
    const auto est = estimate_exponential_type(generating_function::shifted_sine(0.0), 10, type_heights);
    EXPECT_NEAR(est.sigma_hat, pi, 1e-2 * pi);
    EXPECT_NEAR(est.A_hat, -std::log(2.0), 1e-6);
    EXPECT_EQ(est.heights_used, type_heights);
    EXPECT_LT(est.residual, 1e-6);
}

TEST(ExponentialType, Constant)
{
    const auto est = estimate_exponential_type([](complex_t) { return complex_t(1, 0); }, 10, type_heights);
    EXPECT_EQ(est.sigma_hat, 0.0);
    EXPECT_EQ(est.A_hat, 0.0);
}

TEST(ExponentialType, PerturbedSine)
{
    const auto F = build_perturbed_sine(discrete_sequence({{1.0, 1e-3}, {-2.01, 0.02}, {3.0, -0.03}}), 0.05).function;
    const auto est = estimate_exponential_type(F, 10, type_heights);
    EXPECT_NEAR(est.sigma_hat, pi, 2e-2 * pi);
}

TEST(ExponentialType, ScaledShiftedSines)
{
    for (double sigma : {1.0, pi, 5.0}) {
        for (const complex_t a : {complex_t(0.3, 0.7), complex_t(-2, -1.5), complex_t(0, 0.25)}) {
            const auto est = estimate_exponential_type([&](complex_t z) { return std::sin(sigma * (z - a)); }, 10,
                                                       type_heights);
            EXPECT_NEAR(est.sigma_hat, sigma, 1e-2 * sigma) << sigma << " " << a;
        }
    }
}

TEST(ExponentialType, Refusals)
{
    EXPECT_THROW(estimate_exponential_type(generating_function::finite_product({{0.0, 1.0}}), 10, type_heights), error);
    EXPECT_THROW(estimate_exponential_type(generating_function::shifted_sine(0.0), 10, std::vector<double>{1, 2, 3}),
                 error);
    EXPECT_THROW(estimate_exponential_type(generating_function::shifted_sine(0.0), 10, std::vector<double>{0.5, 2, 3, 4}),
                 error);
    try {
        estimate_exponential_type([](complex_t z) { return std::exp(complex_t(0, -400) * z); }, 10, type_heights);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.kind(), error_kind::numerical);
    }
}

TEST(ExponentialType, LogSpaceAvoidsOverflow)
{
    // |sin(pi z)| overflows a double near Im z = 226; the log-space path does not
    const auto est =
        estimate_exponential_type(generating_function::shifted_sine(0.0), 10, std::vector<double>{100, 200, 300, 400});
    EXPECT_NEAR(est.sigma_hat, pi, 1e-9);
}

// ---------------------------------------------------------------------------
// interpolation quality
// ---------------------------------------------------------------------------

namespace
{

interpolant lattice_interpolant(std::vector<complex_t> values)
{
    return interpolant(generating_function::shifted_sine(complex_t(0, 1)), lattice(50), std::move(values),
                       weight_parameters(8, 1, 0, 0));
}

} // namespace

TEST(InterpolationReport, ZeroValues)
{
    const auto itp = lattice_interpolant(std::vector<complex_t>(101, 0.0));
    const auto q = interpolation_report(itp, rectangular_grid(-5, 5, -1, 1, 5));
    EXPECT_EQ(q.max_node_residual, 0.0);
    EXPECT_EQ(q.stability_constant, 0.0);
    EXPECT_FALSE(q.type);
}

TEST(InterpolationReport, AlternatingValues)
{
    std::vector<complex_t> v;
    for (int k = -50; k <= 50; ++k) {
        v.emplace_back(k % 2 ? -1.0 : 1.0, 0.0);
    }
    const auto q = interpolation_report(lattice_interpolant(v), rectangular_grid(-50, 50, -2, 2, 21));
    EXPECT_LT(q.max_node_residual, 1e-8);
    EXPECT_NEAR(q.min_weighted_derivative, pi * std::exp(pi), 1e-12);
}

TEST(InterpolationReport, UnitValuesStability)
{
    const auto q = interpolation_report(lattice_interpolant(std::vector<complex_t>(101, 1.0)),
                                        rectangular_grid(-50, 50, -2, 2, 41));
    EXPECT_LT(q.max_node_residual, 1e-8);
    EXPECT_TRUE(std::isfinite(q.stability_constant));
    EXPECT_GT(q.stability_constant, 0);
    EXPECT_LE(q.stability_constant, unit_values_stability_bound);
    ASSERT_TRUE(q.type);
    EXPECT_GT(q.type->sigma_hat, 0);
}

TEST(Grid, RectangularLayout)
{
    const auto g = rectangular_grid(-5, 5, -5, 5, 201);
    ASSERT_EQ(g.size(), 40401u);
    EXPECT_EQ(g.front(), complex_t(-5, -5));
    EXPECT_EQ(g.back(), complex_t(5, 5));
}

// ---------------------------------------------------------------------------
// union check
// ---------------------------------------------------------------------------

TEST(Union, HalfShiftIsAdditive)
{
    std::vector<complex_t> a;
    std::vector<complex_t> b;
    for (int k = -300; k <= 300; ++k) {
        a.emplace_back(k, 1.0);
        b.emplace_back(k + 0.5, 1.0);
    }
    const auto rep = union_interpolation_check(discrete_sequence(a), discrete_sequence(b), 0.2, 0.1);
    EXPECT_LT(rep.relative_additivity_error, 1e-15);
    EXPECT_LE(rep.balayage_union, (rep.balayage_first + rep.balayage_second) * (1 + 1e-12));
    EXPECT_GE(rep.balayage_union, std::max(rep.balayage_first, rep.balayage_second));
    EXPECT_TRUE(rep.separation.feasible);
}

TEST(Union, InterleavedLatticesSeparated)
{
    const auto rep = union_interpolation_check(lattice(200, 1.0), lattice(200, 2.0), 0.2, 0.1);
    EXPECT_TRUE(rep.separation.feasible);
    EXPECT_LT(rep.relative_additivity_error, 1e-15);
    EXPECT_TRUE(rep.local_counting_consistent);
    EXPECT_EQ(rep.sizes.first, 401u);
    EXPECT_EQ(rep.sizes.second, 399u); // k = +-200 at height 2 lie beyond the common radius
}

TEST(Union, NearCollisionFlagged)
{
    const auto first = lattice(20, 1.0);
    const discrete_sequence second({{3.0 + 1e-9, 1.0}, {0.5, 2.0}});
    const auto rep = union_interpolation_check(first, second, 0.2, 0.1);
    EXPECT_FALSE(rep.separation.feasible);
    ASSERT_EQ(rep.separation.witnesses.size(), 1u);
    const auto &w = rep.separation.witnesses[0];
    EXPECT_LT(w.distance, 2e-9);
}

TEST(Union, IntersectionRejected)
{
    EXPECT_THROW(union_interpolation_check(lattice(5), discrete_sequence({{2.0, 1.0}}), 0.2, 0.1), error);
}
