// Quantum Otto cycle with a collectively coupled working medium: work per
// cycle for frozen block occupations versus full thermalisation, the
// limiting advantage ratio and spectrum optimisation.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "permthermo/thermo.hpp"

namespace permthermo {

struct OttoParams {
    double beta_h = 0.1;
    double beta_c = 1.0;
    double kappa = 0.5;
    double beta0 = 5.0; ///< +∞ allowed: symmetric block only

    void validate() const
    {
        if (!(beta_h > 0.0) || !(beta_c > beta_h) || std::isinf(beta_c))
            throw std::invalid_argument("OttoParams: need 0 < beta_h < beta_c < inf");
        if (!(kappa <= 1.0) || !(kappa >= beta_h / beta_c))
            throw std::invalid_argument("OttoParams: kappa must lie in [beta_h/beta_c, 1]");
        if (!(beta0 >= 0.0))
            throw std::invalid_argument("OttoParams: beta0 must be >= 0");
    }
};

/// Mean energy with frozen occupations p^λ_{β₀} at bath β.
inline double frozen_energy(const Ensemble& ens, const std::vector<double>& p, double beta)
{
    const auto lz = ens.block_log_z(beta);
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        e -= p[i] * lz[i].d_log_value;
    return e;
}

/// W^col = (1−κ)(E_{β_h,β₀} − E_{κβ_c,β₀}).
inline double collective_work(const Ensemble& ens, const OttoParams& op)
{
    op.validate();
    const auto p = block_probabilities(ens, op.beta0);
    return (1.0 - op.kappa) * (frozen_energy(ens, p, op.beta_h) - frozen_energy(ens, p, op.kappa * op.beta_c));
}

/// W^dis = (1−κ)(E_{β_h,β_h} − E_{κβ_c,κβ_c}), with E(γ_β) = −n ∂_β ln z_β.
inline double distinguishable_work(const Ensemble& ens, const OttoParams& op)
{
    op.validate();
    return (1.0 - op.kappa) * (thermal_energy(ens, op.beta_h) - thermal_energy(ens, op.kappa * op.beta_c));
}

/// W^col/W^dis for β₀ → ∞ and β_h, κβ_c → 0.
inline double work_ratio_limit(int n, int d, SymmetryKind kind)
{
    if (kind == SymmetryKind::sud)
        return (n + d) / (d + 1.0);
    return (n * (d - 1.0) + 2.0) / (d + 1.0);
}

/// Three-level family used for the gap scan.
inline SpectrumSpec parameterised_hamiltonian(double delta) { return SpectrumSpec::h_delta(delta); }

inline double two_level_variance(int d, bool upper_heavy) { return SpectrumSpec::two_level(d, upper_heavy).mean_square(); }

struct OptimalWork {
    double collective = 0.0;
    double distinguishable = 0.0;
};

/// High-temperature optimum over spectra with spread d−1:
/// W^col* = (1−κ)(κβ_c−β_h)·n(n+d)/(d+1)·var*, W^dis* = (1−κ)(κβ_c−β_h)·n·var*.
/// var* = (d−1)²/4 for even d; for odd d both placements of the extra level
/// give the same variance, (d−1)²/4·(1−1/d²).
inline OptimalWork optimal_work_outputs(int n, int d, double beta_h, double beta_c, double kappa)
{
    const double var = std::max(two_level_variance(d, true), two_level_variance(d, false));
    const double pre = (1.0 - kappa) * (kappa * beta_c - beta_h);
    return OptimalWork{pre * symmetric_variance_ratio(n, d) * var, pre * n * var};
}

struct SpectrumOptimum {
    SpectrumSpec spectrum;
    double work = 0.0;
    long evaluations = 0;
};

/// Deterministic grid search for the spectrum maximising W^col at fixed
/// spread ε_max − ε_min = d−1. The d−2 interior levels range over `points`
/// equally spaced values; every non-decreasing assignment is tried.
inline SpectrumOptimum optimise_spectrum(int n, int d, const OttoParams& op, int points = 201)
{
    op.validate();
    if (d < 2)
        throw std::invalid_argument("optimise_spectrum: d must be >= 2");
    if (points < 2)
        throw std::invalid_argument("optimise_spectrum: need at least two grid points");
    SpectrumOptimum best;
    best.work = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(std::max(d - 2, 0), 0);
    const double step = (d - 1.0) / (points - 1);
    auto evaluate = [&] {
        std::vector<double> lv{0.0};
        for (int i : idx)
            lv.push_back(i * step);
        lv.push_back(d - 1.0);
        const auto spec = SpectrumSpec::from_levels(lv, true);
        const double w = collective_work(Ensemble::sud(n, spec), op);
        ++best.evaluations;
        if (w > best.work + 1e-15) {
            best.work = w;
            best.spectrum = spec;
        }
    };
    if (idx.empty()) {
        evaluate();
        return best;
    }
    while (true) {
        evaluate();
        int k = static_cast<int>(idx.size()) - 1;
        while (k >= 0 && idx[k] == points - 1)
            --k;
        if (k < 0)
            break;
        ++idx[k];
        for (std::size_t j = k + 1; j < idx.size(); ++j)
            idx[j] = idx[k];
    }
    return best;
}

} // namespace permthermo
