// Large-n behaviour at β₀ = 0: the limiting Plancherel-type density of
// rescaled Young diagrams, the energy coefficients ℰ_d, entropy growth and
// the spin-1 limiting distribution.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "permthermo/characters.hpp"
#include "permthermo/partitions.hpp"
#include "permthermo/su_cartan.hpp"

namespace permthermo {

/// ζ_i = (λ_i − n/d)/√n, descending with zero sum.
struct ScaledShape {
    std::vector<double> zeta;

    static ScaledShape from_partition(const Partition& lambda)
    {
        ScaledShape s;
        const double n = lambda.n(), d = lambda.d();
        for (int v : lambda.parts())
            s.zeta.push_back((v - n / d) / std::sqrt(n));
        return s;
    }

    int d() const { return static_cast<int>(zeta.size()); }
};

/// C_d = d^{(d(d−1)+1)/2} (d/2π)^{(d−1)/2} / (1!2!⋯(d−1)!).
inline double plancherel_normalization(int d)
{
    if (d < 2)
        throw std::invalid_argument("plancherel_normalization: d must be >= 2");
    double log_c = 0.5 * (d * (d - 1.0) + 1.0) * std::log(d) + 0.5 * (d - 1.0) * std::log(d / (2.0 * M_PI));
    for (int k = 1; k < d; ++k)
        log_c -= std::lgamma(k + 1.0);
    return std::exp(log_c);
}

/// φ_d(ζ) = C_d Π_{i<j}(ζ_i − ζ_j)² e^{−(d/2)Σζ²}, a density in the d−1 free
/// coordinates ζ_1 … ζ_{d−1}.
inline double plancherel_density(const std::vector<double>& zeta)
{
    const int d = static_cast<int>(zeta.size());
    double v = plancherel_normalization(d);
    double sq = 0.0;
    for (int i = 0; i < d; ++i) {
        sq += zeta[i] * zeta[i];
        for (int j = i + 1; j < d; ++j)
            v *= (zeta[i] - zeta[j]) * (zeta[i] - zeta[j]);
    }
    return v * std::exp(-0.5 * d * sq);
}

inline double plancherel_density(const ScaledShape& s) { return plancherel_density(s.zeta); }

namespace detail {

template <class F>
double gk(F f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

} // namespace detail

/// ∫ φ_d f over the ordered, zero-sum domain, by nested adaptive
/// Gauss–Kronrod quadrature. d = 2: ζ = (x, −x), x ≥ 0. d = 3: ζ_1 ≥ 0 and
/// −ζ_1/2 ≤ ζ_2 ≤ ζ_1, with ζ_3 = −ζ_1 − ζ_2.
template <class F>
double plancherel_expectation(int d, F f)
{
    const double inf = std::numeric_limits<double>::infinity();
    if (d == 2) {
        return detail::gk(
            [&](double x) {
                const std::vector<double> z{x, -x};
                return plancherel_density(z) * f(z);
            },
            0.0, inf);
    }
    if (d == 3) {
        return detail::gk(
            [&](double z1) {
                if (z1 <= 0.0)
                    return 0.0;
                return detail::gk(
                    [&](double z2) {
                        const std::vector<double> z{z1, z2, -z1 - z2};
                        return plancherel_density(z) * f(z);
                    },
                    -z1 / 2.0, z1);
            },
            0.0, inf);
    }
    throw std::invalid_argument("plancherel_expectation: quadrature only for d = 2, 3");
}

/// Σ_{k<d} (d−k) ζ_k (1-based k); ℰ_d is its mean under φ_d.
inline double energy_integrand(const std::vector<double>& zeta)
{
    const int d = static_cast<int>(zeta.size());
    double v = 0.0;
    for (int k = 0; k < d - 1; ++k)
        v += (d - 1.0 - k) * zeta[k];
    return v;
}

/// Traceless Hermitian Gaussian matrix with density ∝ exp(−(d/2) tr H²);
/// its sorted eigenvalues are distributed as φ_d.
template <class Rng>
ScaledShape sample_scaled_shape(int d, Rng& rng)
{
    std::normal_distribution<double> diag(0.0, std::sqrt(1.0 / d));
    std::normal_distribution<double> off(0.0, std::sqrt(0.5 / d));
    Eigen::MatrixXcd h(d, d);
    for (int i = 0; i < d; ++i) {
        h(i, i) = diag(rng);
        for (int j = i + 1; j < d; ++j) {
            h(i, j) = cplx(off(rng), off(rng));
            h(j, i) = std::conj(h(i, j));
        }
    }
    const cplx tr = h.trace() / static_cast<double>(d);
    for (int i = 0; i < d; ++i)
        h(i, i) -= tr;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    ScaledShape s;
    s.zeta.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
    std::sort(s.zeta.begin(), s.zeta.end(), std::greater<>());
    return s;
}

inline ScaledShape sample_scaled_shape(int d, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return sample_scaled_shape(d, rng);
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

/// Seed of batch b, derived from the master seed only.
inline std::uint64_t batch_seed(std::uint64_t master, std::uint64_t batch)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
    std::uint32_t w[2];
    seq.generate(w, w + 2);
    return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

/// Mean of f(ζ) over φ_d by sampling. Batches of fixed size run on worker
/// threads and are reduced in batch order, so the result depends only on
/// (d, samples, seed).
template <class F>
MonteCarloEstimate plancherel_monte_carlo(int d, long samples, std::uint64_t seed, F f, unsigned threads = 0)
{
    if (d < 2)
        throw std::invalid_argument("plancherel_monte_carlo: d must be >= 2");
    if (samples < 2)
        throw std::invalid_argument("plancherel_monte_carlo: need at least two samples");
    constexpr long kBatch = 50000;
    const long nbatch = (samples + kBatch - 1) / kBatch;
    std::vector<double> sum(nbatch, 0.0), sum2(nbatch, 0.0);
    auto run = [&](long b) {
        std::mt19937_64 rng(batch_seed(seed, b));
        const long count = std::min(kBatch, samples - b * kBatch);
        for (long k = 0; k < count; ++k) {
            const double v = f(sample_scaled_shape(d, rng).zeta);
            sum[b] += v;
            sum2[b] += v * v;
        }
    };
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<long>(threads, nbatch));
    if (threads <= 1) {
        for (long b = 0; b < nbatch; ++b)
            run(b);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (long b = t; b < nbatch; b += threads)
                    run(b);
            });
        for (auto& th : pool)
            th.join();
    }
    double s = 0.0, s2 = 0.0;
    for (long b = 0; b < nbatch; ++b) {
        s += sum[b];
        s2 += sum2[b];
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.mean = s / samples;
    const double var = std::max(0.0, (s2 / samples - est.mean * est.mean) * samples / (samples - 1.0));
    est.std_error = std::sqrt(var / samples);
    return est;
}

struct EnergyCoefficient {
    double value = 0.0;
    double std_error = 0.0; ///< zero for quadrature
    long samples = 0;       ///< zero for quadrature
    bool quadrature = false;
};

inline EnergyCoefficient energy_coefficient_quadrature(int d)
{
    EnergyCoefficient c;
    c.value = plancherel_expectation(d, energy_integrand);
    c.quadrature = true;
    return c;
}

inline EnergyCoefficient energy_coefficient_monte_carlo(int d, long samples = 1000000, std::uint64_t seed = 1)
{
    const auto est = plancherel_monte_carlo(d, samples, seed, energy_integrand);
    return EnergyCoefficient{est.mean, est.std_error, est.samples, false};
}

/// ℰ_d with E_{∞,0} → −ℰ_d √n: quadrature for d ≤ 3, sampling up to d = 7.
inline EnergyCoefficient energy_coefficient(int d, long samples = 1000000, std::uint64_t seed = 1)
{
    if (d < 2 || d > 7)
        throw std::invalid_argument("energy_coefficient: d must lie in [2, 7]");
    return d <= 3 ? energy_coefficient_quadrature(d) : energy_coefficient_monte_carlo(d, samples, seed);
}

/// Exact Σ_λ p^λ_0 E_λ for the ladder spectrum, i.e. E_{∞,0} at finite n.
inline double exact_ground_energy_average(int n, int d)
{
    const SpectrumSpec ladder = SpectrumSpec::ladder(d);
    double e = 0.0;
    for (const auto& p : enumerate_partitions(n, d))
        e += plancherel_prob(p) * block_ground_energy(p, ladder);
    return e;
}

/// d(d−1)/4 · ln n.
inline double entropy_asymptote(int d, double n) { return d * (d - 1.0) / 4.0 * std::log(n); }

/// Exact S̃_{0,0} = Σ_λ p^λ_0 ln d_λ.
inline double exact_entropy_infinite_temperature(int n, int d)
{
    double s = 0.0;
    for (const auto& p : enumerate_partitions(n, d))
        s += plancherel_prob(p) * log_irrep_dimension(p);
    return s;
}

/// Spin-s analogue Σ_J p^J_0 ln(2J+1).
inline double exact_spin_entropy_infinite_temperature(int n, HalfInt s)
{
    double out = 0.0;
    for (const auto& [J, p] : spin_plancherel(n, s))
        out += p * std::log(J.twice + 1.0);
    return out;
}

/// p(n, J) ≈ (3√3/2√π) J²/n^{3/2} e^{−3J²/4n}.
inline double spin1_limit_distribution(double n, double J)
{
    return 3.0 * std::sqrt(3.0) / (2.0 * std::sqrt(M_PI)) * J * J / std::pow(n, 1.5) * std::exp(-3.0 * J * J / (4.0 * n));
}

struct Spin1Limits {
    double energy = 0.0;  ///< E_{∞,0} → −energy·√n
    double entropy = 0.0; ///< S̃_{0,0} → entropy·ln n
};

inline Spin1Limits spin1_limits() { return Spin1Limits{4.0 / std::sqrt(3.0 * M_PI), 0.5}; }

/// Analytic ℰ_2 = √(2/π) and ℰ_3 = (9/4)√(3/π).
inline double energy_coefficient_closed_form(int d)
{
    if (d == 2)
        return std::sqrt(2.0 / M_PI);
    if (d == 3)
        return 2.25 * std::sqrt(3.0 / M_PI);
    throw std::invalid_argument("energy_coefficient_closed_form: only d = 2, 3");
}

} // namespace permthermo
