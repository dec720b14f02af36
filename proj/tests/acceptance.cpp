// Acceptance suite: one PASS/FAIL line per criterion, each at its stated
// tolerance and runtime budget. Exit status is nonzero if any line fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "permthermo/permthermo.hpp"

using namespace permthermo;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<void(Outcome&)>& body)
{
    Outcome o;
    const auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream budget;
    budget << "runtime " << secs << " s < " << budget_s << " s";
    o.require(secs < budget_s, budget.str());
    std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass)
        ++failures;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

int main()
{
    criterion(1, "combinatorial exactness", 1.0, [](Outcome& o) {
        int checked = 0;
        for (int d = 2; d <= 4; ++d)
            for (int n = 1; n <= 8; ++n) {
                BigInt total = 0, power = 1;
                for (const auto& p : enumerate_partitions(n, d))
                    total += irrep_multiplicity_exact(p) * irrep_dimension_exact(p);
                for (int k = 0; k < n; ++k)
                    power *= d;
                o.require(total == power, "sum rule n=" + std::to_string(n) + " d=" + std::to_string(d));
                ++checked;
            }
        int spin_checked = 0;
        for (int n = 1; n <= 10; ++n)
            for (const auto& [J, m] : spin_multiplicities(n, HalfInt::from_twice(1))) {
                const double hook = oracle::hook_length_multiplicity({(n + J.twice) / 2, (n - J.twice) / 2});
                o.require(static_cast<double>(m) == hook, "spin n=" + std::to_string(n) + " J=" + J.to_string());
                ++spin_checked;
            }
        o.detail << checked << " (n,d) sum rules exact, " << spin_checked << " spin-1/2 multiplicities match hook formula";
    });

    criterion(2, "character oracle", 10.0, [](Outcome& o) {
        double worst = 0.0;
        int count = 0;
        for (int d = 2; d <= 3; ++d) {
            const auto spec = SpectrumSpec::ladder(d);
            for (int n = 1; n <= 6; ++n)
                for (const auto& p : enumerate_partitions(n, d))
                    for (double beta : {0.1, 1.0, 5.0}) {
                        const double ref = oracle::ssyt_partition_function(p.parts(), spec.levels(), beta);
                        worst = std::max(worst, rel(block_partition_function(p, spec, beta), ref));
                        ++count;
                    }
        }
        o.require(worst < 1e-10, "relative error above 1e-10");
        o.detail << count << " (lambda, beta) cases vs tableau sums, max rel err " << worst;
    });

    criterion(3, "steady-state structure", 300.0, [](Outcome& o) {
        const std::vector<std::pair<int, int>> cases{{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}};
        const double beta = 1.0;
        double worst_gibbs = 0.0, worst_drift = 0.0;
        for (const auto& [n, d] : cases) {
            const auto spec = SpectrumSpec::ladder(d);
            const auto ens = Ensemble::sud(n, spec);
            const auto sys = CollectiveSystem::sud(n, spec);
            const Lindbladian L(sys, RateModel{1.0, beta, false});
            const auto proj = isotypic_projectors(sys);
            const int null = nullspace_dimension(L.superoperator());
            const long expected = symmetric_nullspace_count(ens);
            o.detail << " (" << n << "," << d << "): null=" << null << " expected=" << expected
                     << " sum m^2=" << block_commutant_dimension(ens) << ";";
            o.require(null == expected, "null-space dimension (" + std::to_string(n) + "," + std::to_string(d) + ")");
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                Trajectory tr;
                const auto res = steady_state(L, random_density_matrix(sys.dim(), seed), {},
                                              trajectory_recorder(tr, proj, sys.energies(), beta));
                worst_gibbs = std::max(worst_gibbs, verify_block_gibbs(res.rho, beta, proj, sys.energies()).max_residual());
                worst_drift = std::max(worst_drift, population_drift(tr));
            }
        }
        o.require(worst_gibbs < 1e-6, "block-Gibbs residual");
        o.require(worst_drift < 1e-8, "population drift");
        o.detail << " max block-Gibbs residual " << worst_gibbs << ", max population drift " << worst_drift;
    });

    criterion(4, "formula-vs-simulation closure", 300.0, [](Outcome& o) {
        double worst = 0.0;
        int count = 0;
        for (int d = 2; d <= 3; ++d)
            for (int n = 1; n <= 3; ++n)
                for (double beta0 : {0.5, 3.0}) {
                    const double beta = 1.0;
                    const auto spec = SpectrumSpec::ladder(d);
                    const auto sys = CollectiveSystem::sud(n, spec);
                    const Lindbladian L(sys, RateModel{1.0, beta, false});
                    const auto res = steady_state(L, gibbs_state(sys.energies(), beta0));
                    const double sim = state_energy(res.rho, sys.energies());
                    const double formula = steady_state_quantities(Ensemble::sud(n, spec), beta, beta0).energy;
                    worst = std::max(worst, std::abs(sim - formula));
                    ++count;
                }
        o.require(worst < 1e-8, "energy mismatch above 1e-8");
        o.detail << count << " runs, max |tr(H rho_inf) - E| = " << worst;
    });

    criterion(5, "Otto work ratio", 10.0, [](Outcome& o) {
        const OttoParams op{1e-3, 4e-3, 0.5, 20.0};
        const auto su3 = Ensemble::sud(10, SpectrumSpec::ladder(3));
        const auto spin1 = Ensemble::spin(10, HalfInt::integer(1));
        const double r3 = collective_work(su3, op) / distinguishable_work(su3, op);
        const double rs = collective_work(spin1, op) / distinguishable_work(spin1, op);
        o.require(rel(r3, 3.25) < 0.01, "SU(3) ratio");
        o.require(rel(rs, 5.5) < 0.01, "spin-1 ratio");
        o.detail << "SU(3) " << r3 << " (target 3.25), spin-1 " << rs << " (target 5.5)";
    });

    criterion(6, "asymptotic energy coefficients", 120.0, [](Outcome& o) {
        const double e2 = energy_coefficient(2).value, e3 = energy_coefficient(3).value;
        o.require(std::abs(e2 - std::sqrt(2.0 / M_PI)) < 1e-6, "E_2 quadrature");
        o.require(std::abs(e3 - 2.25 * std::sqrt(3.0 / M_PI)) < 1e-6, "E_3 quadrature");
        o.detail << "E2=" << e2 << " E3=" << e3;
        const double targets[] = {4.19, 6.76, 9.91, 13.6};
        for (int d = 4; d <= 7; ++d) {
            const auto c = energy_coefficient(d, 1000000, 1);
            o.require(rel(c.value, targets[d - 4]) < 0.02, "E_" + std::to_string(d));
            o.detail << " E" << d << "=" << c.value << "+-" << c.std_error;
        }
    });

    criterion(7, "entropy scaling", 60.0, [](Outcome& o) {
        const double r2 = exact_entropy_infinite_temperature(10000, 2) / entropy_asymptote(2, 10000);
        const double r3 = exact_entropy_infinite_temperature(200, 3) / entropy_asymptote(3, 200);
        o.require(r2 >= 0.85 && r2 <= 1.15, "d=2 ratio");
        o.require(r3 >= 0.85 && r3 <= 1.15, "d=3 ratio");
        // prefactors of ln n from the growth between n and 2n
        const double ln2 = std::log(2.0);
        const double su3 = (exact_entropy_infinite_temperature(200, 3) - exact_entropy_infinite_temperature(100, 3)) / ln2;
        const double sp1 = (exact_spin_entropy_infinite_temperature(200, HalfInt::integer(1)) -
                            exact_spin_entropy_infinite_temperature(100, HalfInt::integer(1))) /
                           ln2;
        const double ratio = su3 / sp1;
        o.require(rel(ratio, 3.0) < 0.15, "SU(3)/spin-1 prefactor ratio");
        o.detail << "d=2 n=1e4 ratio " << r2 << ", d=3 n=200 ratio " << r3 << ", prefactors SU(3) " << su3
                 << " spin-1 " << sp1 << " ratio " << ratio;
    });

    criterion(8, "high-temperature expansion", 5.0, [](Outcome& o) {
        const auto spec = SpectrumSpec::ladder(3);
        const double q = high_temperature_coefficient(6, spec);
        const double e = steady_state_quantities(Ensemble::sud(6, spec), 1e-3, 50.0).energy;
        const double ratio = e / (-2e-3 * q);
        o.require(std::abs(ratio - 1.0) < 0.01, "E / (-2 beta q)");
        double worst = 0.0;
        for (int d = 2; d <= 4; ++d)
            for (int n = 1; n <= 6; ++n)
                for (const auto& s : {SpectrumSpec::ladder(d), SpectrumSpec::two_level(d)})
                    worst = std::max(worst, rel(symmetric_subspace_variance(n, s) / s.mean_square(),
                                                symmetric_variance_ratio(n, d)));
        o.require(worst < 1e-12, "variance ratio");
        o.detail << "E/(-2 beta q) = " << ratio << ", variance ratio max rel err " << worst;
    });

    criterion(9, "scaled-down figure data", 120.0, [](Outcome& o) {
        // energy and entropy curves: SU(2) spin-1 deviates more than SU(3); all changes vanish at beta = beta0
        {
            const int n = 7;
            const double beta0 = 2.0;
            const auto su3 = Ensemble::sud(n, SpectrumSpec::ladder(3));
            const auto sp1 = Ensemble::spin(n, HalfInt::integer(1));
            int violations = 0;
            for (int k = 0; k < 49; ++k) {
                const double beta = 0.2 + 0.1 * k;
                const double dev3 = std::abs(steady_state_quantities(su3, beta, beta0).energy - thermal_energy(su3, beta));
                const double dev1 = std::abs(steady_state_quantities(sp1, beta, beta0).energy - thermal_energy(sp1, beta));
                if (dev1 < dev3)
                    ++violations;
            }
            o.require(violations == 0, "spin-1 deviation below SU(3)");
            double at_b0 = 0.0;
            for (const auto* ens : {&su3, &sp1}) {
                const auto c = relaxation_changes(*ens, beta0, beta0);
                at_b0 = std::max({at_b0, std::abs(c.delta_entropy), std::abs(c.delta_free_energy)});
            }
            o.require(at_b0 < 1e-12, "changes at beta = beta0");
            o.detail << "deviation ordering violations " << violations << ";";
        }
        // work ratio against hot-bath temperature: above 1, rising toward the limit
        {
            const auto ens = Ensemble::sud(7, SpectrumSpec::ladder(3));
            double prev = 0.0;
            bool ok = true;
            for (double bh : {0.4, 0.2, 0.1, 0.05, 0.01}) {
                const OttoParams op{bh, 1.0, 0.5, 5.0};
                const double r = collective_work(ens, op) / distinguishable_work(ens, op);
                ok = ok && r > 1.0 && r > prev && r < work_ratio_limit(7, 3, SymmetryKind::sud);
                prev = r;
            }
            o.require(ok, "work ratio ordering");
        }
        // work against gap: collective beats distinguishable everywhere
        {
            int violations = 0;
            for (double bc : {1.0, 2.0})
                for (int k = 0; k <= 20; ++k) {
                    const auto ens = Ensemble::sud(7, parameterised_hamiltonian(0.1 * k));
                    const OttoParams op{0.1, bc, 0.5, 3.0};
                    if (!(collective_work(ens, op) > distinguishable_work(ens, op)))
                        ++violations;
                }
            o.require(violations == 0, "W_col > W_dis");
            o.detail << " W_col<=W_dis cases " << violations << ";";
        }
        // free-energy change for d = 3, 5, 7: curves cross zero together at beta = beta0;
        // per-irrep terms recombine to the total
        {
            const int n = 5;
            const double beta0 = 1.0;
            double at_b0 = 0.0, recombine = 0.0;
            for (int d : {3, 5, 7}) {
                const auto ens = Ensemble::sud(n, SpectrumSpec::ladder(d));
                at_b0 = std::max(at_b0, std::abs(relaxation_changes(ens, beta0, beta0).delta_free_energy));
                const auto c = relaxation_changes(ens, 3.0, beta0);
                const auto p = block_probabilities(ens, beta0);
                double s = 0.0;
                for (std::size_t i = 0; i < p.size(); ++i)
                    s += p[i] * c.per_irrep_delta_free_energy[i];
                recombine = std::max(recombine, std::abs(s - c.delta_free_energy));
            }
            o.require(at_b0 < 1e-12, "free-energy curves at beta0");
            o.require(recombine < 1e-12, "per-irrep recombination");
            o.detail << " max |dF| at beta0 " << at_b0 << ", recombination err " << recombine;
        }
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
