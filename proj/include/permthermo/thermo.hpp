// Steady-state thermodynamics of block-Gibbs states: energy, reduced entropy
// and reduced free energy, their per-irrep decomposition and the closed-form
// limits at high bath temperature.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "permthermo/ensemble.hpp"

namespace permthermo {

/// Occupation p^λ_{β₀} = m_λ Z^λ_{β₀} / Z_{β₀} of each block, in block order.
/// β₀ = +∞ places all weight on the symmetric irrep (maximal J for spins).
inline std::vector<double> block_probabilities(const Ensemble& ens, double beta0)
{
    if (!(beta0 >= 0.0))
        throw std::invalid_argument("block_probabilities: beta0 must be >= 0");
    std::vector<double> p(ens.blocks().size(), 0.0);
    if (std::isinf(beta0)) {
        p[ens.symmetric_index()] = 1.0;
        return p;
    }
    const auto lz = ens.block_log_z(beta0);
    const double ltot = ens.total_log_z(beta0).log_value;
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = std::exp(ens.blocks()[i].log_mult + lz[i].log_value - ltot);
    return p;
}

struct IrrepTerm {
    std::string label;
    double dim = 0.0;
    double probability = 0.0;  ///< p^λ_{β₀}
    double energy = 0.0;       ///< E^λ = −∂_β ln Z^λ_β
    double entropy = 0.0;      ///< S^λ = ln Z^λ_β + β E^λ
    std::optional<double> free_energy; ///< F^λ = −ln Z^λ_β / β, absent at β = 0
};

struct ThermoPoint {
    double beta = 0.0;
    double beta0 = 0.0;
    double energy = 0.0;
    double reduced_entropy = 0.0;
    std::optional<double> reduced_free_energy; ///< absent at β = 0
    std::vector<IrrepTerm> per_irrep;
};

/// E, S̃, F̃ of the steady state ρ_{β,β₀} (bath β, preparation β₀).
inline ThermoPoint steady_state_quantities(const Ensemble& ens, double beta, double beta0)
{
    if (!(beta >= 0.0) || std::isinf(beta))
        throw std::invalid_argument("steady_state_quantities: beta must be finite and >= 0");
    const auto p = block_probabilities(ens, beta0);
    const auto lz = ens.block_log_z(beta);
    ThermoPoint tp;
    tp.beta = beta;
    tp.beta0 = beta0;
    double f = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        IrrepTerm t;
        t.label = ens.blocks()[i].label;
        t.dim = ens.blocks()[i].dim;
        t.probability = p[i];
        t.energy = -lz[i].d_log_value;
        t.entropy = lz[i].log_value + beta * t.energy;
        if (beta > 0.0)
            t.free_energy = -lz[i].log_value / beta;
        tp.energy += p[i] * t.energy;
        tp.reduced_entropy += p[i] * t.entropy;
        if (beta > 0.0)
            f += p[i] * *t.free_energy;
        tp.per_irrep.push_back(std::move(t));
    }
    if (beta > 0.0)
        tp.reduced_free_energy = f;
    return tp;
}

/// Von Neumann entropy of the full steady state, adding the block-mixing and
/// degeneracy-space terms that S̃ leaves out:
/// S = S̃ + Σ p^λ (ln m_λ − ln p^λ).
inline double full_entropy(const Ensemble& ens, const ThermoPoint& tp)
{
    double s = tp.reduced_entropy;
    for (std::size_t i = 0; i < tp.per_irrep.size(); ++i) {
        const double p = tp.per_irrep[i].probability;
        if (p > 0.0)
            s += p * (ens.blocks()[i].log_mult - std::log(p));
    }
    return s;
}

/// Non-equilibrium free energy E − S/β of ρ_{β,β₀}. Unlike F̃ this is bounded
/// below by its Gibbs value at the same β.
inline double nonequilibrium_free_energy(const Ensemble& ens, double beta, double beta0)
{
    if (!(beta > 0.0))
        throw std::invalid_argument("nonequilibrium_free_energy: beta must be > 0");
    const ThermoPoint tp = steady_state_quantities(ens, beta, beta0);
    return tp.energy - full_entropy(ens, tp) / beta;
}

/// Mean energy of the full Gibbs state, −n ∂_β ln z_β.
inline double thermal_energy(const Ensemble& ens, double beta) { return -ens.total_log_z(beta).d_log_value; }

/// Relaxation changes ΔS̃ = S̃_{β,β₀} − S̃_{β₀,β₀} and
/// ΔF̃ = F̃_{β,β₀} − (E_{β₀,β₀} − S̃_{β₀,β₀}/β). The reference free energy is
/// evaluated with the bath temperature β, so both terms share F = E − S̃/β.
struct RelaxationChanges {
    double delta_entropy = 0.0;
    double delta_free_energy = 0.0;
    std::vector<double> per_irrep_delta_free_energy;
};

inline RelaxationChanges relaxation_changes(const Ensemble& ens, double beta, double beta0)
{
    if (!(beta > 0.0))
        throw std::invalid_argument("relaxation_changes: beta must be > 0");
    if (std::isinf(beta0))
        throw std::invalid_argument("relaxation_changes: beta0 must be finite");
    const ThermoPoint now = steady_state_quantities(ens, beta, beta0);
    const ThermoPoint ref = steady_state_quantities(ens, beta0, beta0);
    RelaxationChanges c;
    c.delta_entropy = now.reduced_entropy - ref.reduced_entropy;
    c.delta_free_energy = *now.reduced_free_energy - (ref.energy - ref.reduced_entropy / beta);
    for (std::size_t i = 0; i < now.per_irrep.size(); ++i) {
        const auto& a = now.per_irrep[i];
        const auto& r = ref.per_irrep[i];
        c.per_irrep_delta_free_energy.push_back(*a.free_energy - (r.energy - r.entropy / beta));
    }
    return c;
}

// ---------------------------------------------------------------------------
// high-temperature limits with β₀ → ∞

/// q^d_n = n(n+d)⟨⟨ε²⟩⟩ / (2(d+1)).
inline double high_temperature_coefficient(int n, const SpectrumSpec& spec)
{
    const int d = spec.d();
    return n * (n + d) * spec.mean_square() / (2.0 * (d + 1));
}

/// Q^s_n = ns(1+ns)/6.
inline double high_temperature_coefficient_spin(int n, HalfInt s)
{
    const double ns = n * s.value();
    return ns * (1.0 + ns) / 6.0;
}

/// Leading behaviour E ≈ −2βq, S̃ ≈ ln d_sym − β²q, F̃ ≈ −ln d_sym/β − βq.
struct HighTemperatureLimit {
    double energy = 0.0;
    double reduced_entropy = 0.0;
    double reduced_free_energy = 0.0;
};

inline HighTemperatureLimit high_temperature_limit(double q, double dim_dominant, double beta)
{
    return HighTemperatureLimit{-2.0 * beta * q, std::log(dim_dominant) - beta * beta * q,
                                -std::log(dim_dominant) / beta - beta * q};
}

/// ⟨⟨ε²⟩⟩_n / ⟨⟨ε²⟩⟩_1 = n(n+d)/(d+1) for the uniform mixture on the
/// symmetric subspace.
inline double symmetric_variance_ratio(int n, int d) { return n * (n + d) / (d + 1.0); }

/// Largest single-particle variance at fixed spread ε_max − ε_min = d−1.
inline double optimal_single_particle_variance(int d)
{
    const double base = (d - 1.0) * (d - 1.0) / 4.0;
    return d % 2 == 0 ? base : base * (1.0 - 1.0 / (double(d) * d));
}

/// Energy variance of the uniform mixture over the symmetric subspace,
/// enumerated over occupation vectors (n₁, …, n_d).
inline double symmetric_subspace_variance(int n, const SpectrumSpec& spec)
{
    const int d = spec.d();
    std::vector<int> occ(d, 0);
    double count = 0.0, sum = 0.0, sum2 = 0.0;
    auto rec = [&](auto&& self, int k, int remaining) -> void {
        if (k == d - 1) {
            occ[k] = remaining;
            double e = 0.0;
            for (int i = 0; i < d; ++i)
                e += occ[i] * spec[i];
            count += 1.0;
            sum += e;
            sum2 += e * e;
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            occ[k] = v;
            self(self, k + 1, remaining - v);
        }
    };
    rec(rec, 0, n);
    const double mean = sum / count;
    return sum2 / count - mean * mean;
}

} // namespace permthermo
