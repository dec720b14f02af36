#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "permthermo/asymptotics.hpp"

using namespace permthermo;

TEST(Asymptotics, DensityVanishesOnCoincidentRows)
{
    EXPECT_EQ(plancherel_density(std::vector<double>{0.5, 0.5, -1.0}), 0.0);
    EXPECT_EQ(plancherel_density(std::vector<double>{0.0, 0.0}), 0.0);
}

TEST(Asymptotics, DensityReflectionSymmetry)
{
    const std::vector<double> z{1.1, 0.2, -1.3};
    const std::vector<double> r{1.3, -0.2, -1.1}; // reversed and negated
    EXPECT_NEAR(plancherel_density(z), plancherel_density(r), 1e-15);
}

TEST(Asymptotics, NormalisationByQuadrature)
{
    EXPECT_NEAR(plancherel_expectation(2, [](const std::vector<double>&) { return 1.0; }), 1.0, 1e-10);
    EXPECT_NEAR(plancherel_expectation(3, [](const std::vector<double>&) { return 1.0; }), 1.0, 1e-9);
}

TEST(Asymptotics, QuadratureCoefficients)
{
    EXPECT_NEAR(energy_coefficient(2).value, std::sqrt(2.0 / M_PI), 1e-6);
    EXPECT_NEAR(energy_coefficient(3).value, 2.25 * std::sqrt(3.0 / M_PI), 1e-6);
    EXPECT_TRUE(energy_coefficient(3).quadrature);
    EXPECT_THROW(energy_coefficient(8), std::invalid_argument);
}

TEST(Asymptotics, ScaledShapeFromPartition)
{
    const auto s = ScaledShape::from_partition(Partition{6, 3, 0});
    EXPECT_NEAR(s.zeta[0], 1.0, 1e-15);
    EXPECT_NEAR(s.zeta[0] + s.zeta[1] + s.zeta[2], 0.0, 1e-15);
}

TEST(Asymptotics, SamplerShapesAreOrderedAndTraceless)
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        const auto s = sample_scaled_shape(4, rng);
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            sum += s.zeta[i];
            if (i > 0)
                EXPECT_GE(s.zeta[i - 1], s.zeta[i]);
        }
        EXPECT_NEAR(sum, 0.0, 1e-12);
    }
}

TEST(Asymptotics, SamplerMatchesQuadratureMoment)
{
    const double exact = plancherel_expectation(2, [](const std::vector<double>& z) { return z[0]; });
    const auto mc = plancherel_monte_carlo(2, 1000000, 7, [](const std::vector<double>& z) { return z[0]; });
    EXPECT_LT(std::abs(mc.mean - exact), 3.0 * mc.std_error);
    const auto e3 = energy_coefficient_monte_carlo(3, 1000000, 7);
    EXPECT_NEAR(e3.value / energy_coefficient_closed_form(3), 1.0, 0.01);
    EXPECT_LT(std::abs(e3.value - energy_coefficient_closed_form(3)), 3.0 * e3.std_error);
}

TEST(Asymptotics, MonteCarloIsReproducibleAcrossThreadCounts)
{
    const auto a = plancherel_monte_carlo(4, 200000, 42, energy_integrand, 1);
    const auto b = plancherel_monte_carlo(4, 200000, 42, energy_integrand, 4);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    const auto c = plancherel_monte_carlo(4, 200000, 43, energy_integrand, 1);
    EXPECT_NE(a.mean, c.mean);
}

TEST(Asymptotics, FiniteSizeEnergyConverges)
{
    const double e2 = energy_coefficient_closed_form(2);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int n : {50, 200, 1000, 5000}) {
        const double ratio = -exact_ground_energy_average(n, 2) / std::sqrt(static_cast<double>(n));
        const double gap = std::abs(ratio - e2) / e2;
        EXPECT_LT(gap, prev_gap) << n;
        prev_gap = gap;
    }
    EXPECT_NEAR(-exact_ground_energy_average(2000, 2) / std::sqrt(2000.0), e2, 0.02 * e2);
}

TEST(Asymptotics, EntropyAsymptote)
{
    EXPECT_NEAR(entropy_asymptote(3, 100.0), 1.5 * std::log(100.0), 1e-12);
    const double ratio = exact_entropy_infinite_temperature(10000, 2) / entropy_asymptote(2, 10000);
    EXPECT_GT(ratio, 0.9);
    EXPECT_LT(ratio, 1.1);
    for (int n : {1, 5, 50, 500})
        EXPECT_LE(exact_spin_entropy_infinite_temperature(n, HalfInt::integer(1)), std::log(2.0 * n + 1.0) + 1e-12);
}

TEST(Asymptotics, SpinOneLimitDistribution)
{
    for (double n : {100.0, 1000.0}) {
        const double norm = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double J) { return spin1_limit_distribution(n, J); }, 0.0, std::numeric_limits<double>::infinity(), 15,
            1e-12);
        EXPECT_NEAR(norm, 1.0, 1e-6);
    }
    std::vector<double> mean_over_sqrt;
    for (double n : {100.0, 1000.0, 10000.0}) {
        const double m = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double J) { return J * spin1_limit_distribution(n, J); }, 0.0,
            std::numeric_limits<double>::infinity(), 15, 1e-12);
        mean_over_sqrt.push_back(m / std::sqrt(n));
    }
    EXPECT_NEAR(mean_over_sqrt[0], mean_over_sqrt[2], 1e-8);
    EXPECT_NEAR(energy_coefficient_closed_form(3) / spin1_limits().energy, 27.0 / 16.0, 1e-12);
    EXPECT_DOUBLE_EQ(spin1_limits().entropy, 0.5);
}

namespace {

/// sup_J |p_exact(J) − f(J)| / max p_exact for the spin-1 ensemble.
template <class F>
double spin1_sup_deviation(int n, F f)
{
    double dev = 0.0, pmax = 0.0;
    for (const auto& [J, p] : spin_plancherel(n, HalfInt::integer(1))) {
        pmax = std::max(pmax, p);
        dev = std::max(dev, std::abs(p - f(J.value())));
    }
    return dev / pmax;
}

} // namespace

TEST(Asymptotics, SpinOneExactDistributionConverges)
{
    // the printed density converges like 1/√n
    std::vector<double> dev;
    for (int n : {100, 400, 1600})
        dev.push_back(spin1_sup_deviation(n, [&](double J) { return spin1_limit_distribution(n, J); }));
    EXPECT_NEAR(dev[0] / dev[1], 2.0, 0.2);
    EXPECT_NEAR(dev[1] / dev[2], 2.0, 0.2);
    // evaluating the density at J + 1/2 removes the leading correction
    EXPECT_LT(spin1_sup_deviation(400, [](double J) { return spin1_limit_distribution(400, J + 0.5); }), 0.02);
}

TEST(Asymptotics, SpinOneEnergyCoefficient)
{
    // E_{∞,0} = −Σ p^J J for the spin ensemble
    const int n = 20000;
    double e = 0.0;
    for (const auto& [J, p] : spin_plancherel(n, HalfInt::integer(1)))
        e -= p * J.value();
    EXPECT_NEAR(-e / std::sqrt(static_cast<double>(n)), spin1_limits().energy, 0.01 * spin1_limits().energy);
}
