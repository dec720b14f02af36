#include <gtest/gtest.h>

#include "oracles.hpp"
#include "permthermo/otto.hpp"

using namespace permthermo;

TEST(Otto, ParameterValidation)
{
    EXPECT_NO_THROW((OttoParams{0.1, 1.0, 0.5, 5.0}.validate()));
    EXPECT_THROW((OttoParams{1.0, 0.5, 0.5, 5.0}.validate()), std::invalid_argument);
    EXPECT_THROW((OttoParams{0.1, 1.0, 0.05, 5.0}.validate()), std::invalid_argument);
    EXPECT_THROW((OttoParams{0.1, 1.0, 1.5, 5.0}.validate()), std::invalid_argument);
    EXPECT_THROW((OttoParams{0.0, 1.0, 0.5, 5.0}.validate()), std::invalid_argument);
}

TEST(Otto, TrivialZeros)
{
    const auto ens = Ensemble::sud(4, SpectrumSpec::ladder(3));
    const OttoParams no_compression{0.1, 1.0, 1.0, 5.0};
    EXPECT_NEAR(collective_work(ens, no_compression), 0.0, 1e-15);
    EXPECT_NEAR(distinguishable_work(ens, no_compression), 0.0, 1e-15);
    const OttoParams same_temperature{0.1, 1.0, 0.1, 5.0};
    EXPECT_NEAR(collective_work(ens, same_temperature), 0.0, 1e-15);
    EXPECT_NEAR(distinguishable_work(ens, same_temperature), 0.0, 1e-15);
    const auto opt = optimal_work_outputs(4, 3, 0.1, 1.0, 1.0);
    EXPECT_EQ(opt.collective, 0.0);
    EXPECT_EQ(opt.distinguishable, 0.0);
}

TEST(Otto, TwoParticleWorkMatchesExplicitMatrices)
{
    const auto spec = SpectrumSpec::ladder(2);
    const OttoParams op{0.1, 1.0, 0.5, 5.0};
    const double ref = (1 - op.kappa) * (oracle::two_particle_block_gibbs_energy(spec.levels(), op.beta_h, op.beta0) -
                                         oracle::two_particle_block_gibbs_energy(spec.levels(), op.kappa * op.beta_c,
                                                                                 op.beta0));
    EXPECT_NEAR(collective_work(Ensemble::sud(2, spec), op), ref, 1e-13);
}

TEST(Otto, DistinguishableWorkFactorises)
{
    const auto spec = SpectrumSpec::ladder(3);
    const OttoParams op{0.05, 1.0, 0.5, 5.0};
    const double single = distinguishable_work(Ensemble::sud(1, spec), op);
    EXPECT_NEAR(distinguishable_work(Ensemble::sud(10, spec), op), 10.0 * single, 1e-12);
    const double ref = (1 - op.kappa) * (oracle::independent_thermal_energy(10, spec.levels(), op.beta_h) -
                                         oracle::independent_thermal_energy(10, spec.levels(), op.kappa * op.beta_c));
    EXPECT_NEAR(distinguishable_work(Ensemble::sud(10, spec), op), ref, 1e-12);
}

TEST(Otto, EngineSign)
{
    const auto ens = Ensemble::sud(5, SpectrumSpec::ladder(3));
    for (double kappa : {0.15, 0.3, 0.5, 0.8, 0.99})
        EXPECT_GT(distinguishable_work(ens, OttoParams{0.1, 1.0, kappa, 5.0}), 0.0);
}

TEST(Otto, RatioLimits)
{
    EXPECT_DOUBLE_EQ(work_ratio_limit(10, 3, SymmetryKind::sud), 3.25);
    EXPECT_DOUBLE_EQ(work_ratio_limit(10, 3, SymmetryKind::spin), 5.5);
    for (int d = 2; d <= 6; ++d)
        EXPECT_DOUBLE_EQ(work_ratio_limit(1, d, SymmetryKind::sud), 1.0);
}

TEST(Otto, RatioApproachesLimitAlongPath)
{
    const auto ens = Ensemble::sud(10, SpectrumSpec::ladder(3));
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double scale : {1e-1, 1e-2, 1e-3}) {
        const OttoParams op{scale, 4.0 * scale, 0.5, 20.0};
        const double r = collective_work(ens, op) / distinguishable_work(ens, op);
        const double gap = std::abs(r - 3.25);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 0.01 * 3.25);
}

TEST(Otto, GapFamilyWorkOrdering)
{
    for (double bc : {1.0, 2.0})
        for (int k = 0; k <= 20; ++k) {
            const double delta = 0.1 * k;
            const auto ens = Ensemble::sud(7, parameterised_hamiltonian(delta));
            const OttoParams op{0.1, bc, 0.5, 3.0};
            EXPECT_GT(collective_work(ens, op), distinguishable_work(ens, op)) << "delta=" << delta;
        }
}

TEST(Otto, OptimalOutputsRatio)
{
    for (int d = 2; d <= 6; ++d) {
        const auto o = optimal_work_outputs(7, d, 1e-3, 4e-3, 0.5);
        EXPECT_NEAR(o.collective / o.distinguishable, (7.0 + d) / (d + 1.0), 1e-12);
    }
    // even d reproduces (1−κ)(κβ_c−β_h) n(n+d)(d−1)²/(4(d+1))
    const auto o4 = optimal_work_outputs(4, 4, 1e-3, 4e-3, 0.5);
    EXPECT_NEAR(o4.collective, 0.5 * 1e-3 * 4 * 8 * 9 / (4.0 * 5), 1e-15);
}

TEST(Otto, GridSearchRecoversTwoLevelOptimum)
{
    const OttoParams op{1e-3, 4e-3, 0.5, std::numeric_limits<double>::infinity()};
    const auto best = optimise_spectrum(4, 4, op, 41);
    const auto closed = optimal_work_outputs(4, 4, op.beta_h, op.beta_c, op.kappa);
    EXPECT_NEAR(best.work / closed.collective, 1.0, 0.01);
    // optimum spectrum is two-valued
    EXPECT_NEAR(best.spectrum[0], best.spectrum[1], 1e-12);
    EXPECT_NEAR(best.spectrum[2], best.spectrum[3], 1e-12);
}
