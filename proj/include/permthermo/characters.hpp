// Per-irrep partition functions Z^λ_β = tr exp(−β H^λ), i.e. Schur polynomials
// evaluated at Boltzmann weights x_k = exp(−β ε_k).
//
// Three evaluators are provided:
//   * bialternant ratio det A[λ+δ] / det A[δ]       (distinct weights)
//   * Jacobi–Trudi determinant det h_{λ_i−i+j}      (any weights)
//   * Gelfand–Tsetlin branching, log domain          (any weights, any β)
// The first two are the textbook routes; the branching evaluator sums only
// positive terms scaled by the block ground state and carries the analytic
// β-derivative, which is what the thermodynamics layer uses.
#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "permthermo/partitions.hpp"
#include "permthermo/su_cartan.hpp"

namespace permthermo {

inline constexpr double kDegeneracyThreshold = 1e-6;

/// ln Z together with its first β-derivative.
struct LogZ {
    double log_value = 0.0;
    double d_log_value = 0.0; ///< ∂_β ln Z = −(mean energy)
};

namespace detail {

inline void check_same_d(const Partition& lambda, const SpectrumSpec& spec)
{
    if (lambda.d() != spec.d())
        throw std::invalid_argument("partition length " + std::to_string(lambda.d()) +
                                    " does not match spectrum dimension " + std::to_string(spec.d()));
}

inline double min_gap(const Eigen::VectorXd& x)
{
    double g = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        for (Eigen::Index j = i + 1; j < x.size(); ++j)
            g = std::min(g, std::abs(x(i) - x(j)));
    return g;
}

} // namespace detail

/// s_λ(x) as det(x_k^{λ_l+d−l}) / det(x_k^{d−l}); requires pairwise distinct x.
inline double schur_bialternant(const Partition& lambda, const Eigen::VectorXd& x)
{
    const int d = lambda.d();
    if (x.size() != d)
        throw std::invalid_argument("schur_bialternant: weight count must equal d");
    const auto shifted = lambda.shifted();
    Eigen::MatrixXd num(d, d), den(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            num(k, l) = std::pow(x(k), shifted[l]);
            den(k, l) = std::pow(x(k), d - 1 - l);
        }
    return num.partialPivLu().determinant() / den.partialPivLu().determinant();
}

/// Complete homogeneous symmetric polynomials h_0 … h_kmax of x.
inline std::vector<double> complete_homogeneous(const Eigen::VectorXd& x, int kmax)
{
    std::vector<double> h(kmax + 1, 0.0);
    h[0] = 1.0;
    // h_k(x_1..x_m) = h_k(x_1..x_{m−1}) + x_m h_{k−1}(x_1..x_m)
    for (Eigen::Index m = 0; m < x.size(); ++m)
        for (int k = 1; k <= kmax; ++k)
            h[k] += x(m) * h[k - 1];
    return h;
}

/// s_λ(x) = det[h_{λ_i − i + j}]; valid for coincident weights.
inline double schur_jacobi_trudi(const Partition& lambda, const Eigen::VectorXd& x)
{
    const int d = lambda.d();
    if (x.size() != d)
        throw std::invalid_argument("schur_jacobi_trudi: weight count must equal d");
    const int len = std::max(1, lambda.length());
    const auto h = complete_homogeneous(x, lambda[0] + len);
    Eigen::MatrixXd m(len, len);
    for (int i = 0; i < len; ++i)
        for (int j = 0; j < len; ++j) {
            const int k = lambda[i] - i + j;
            m(i, j) = k < 0 ? 0.0 : h[k];
        }
    return m.partialPivLu().determinant();
}

/// Z^λ_β via the bialternant, switching to Jacobi–Trudi when two rescaled
/// weights are closer than 1e−6. Weights are rescaled by the lowest level
/// using homogeneity of s_λ.
inline double block_partition_function(const Partition& lambda, const SpectrumSpec& spec, double beta)
{
    detail::check_same_d(lambda, spec);
    if (!(beta >= 0.0))
        throw std::invalid_argument("block_partition_function: beta must be >= 0");
    Eigen::VectorXd x(spec.d());
    for (int k = 0; k < spec.d(); ++k)
        x(k) = std::exp(-beta * (spec[k] - spec[0]));
    // full columns factor out as (x_1⋯x_d)^{λ_d}; removing them avoids
    // cancellation in both determinants
    std::vector<int> reduced = lambda.parts();
    const int cols = reduced.back();
    for (int& v : reduced)
        v -= cols;
    const Partition core(reduced);
    const double s = (detail::min_gap(x) < kDegeneracyThreshold ? schur_jacobi_trudi(core, x)
                                                                 : schur_bialternant(core, x)) *
                     std::pow(x.prod(), cols);
    const double z = std::exp(-beta * lambda.n() * spec[0]) * s;
    if (!std::isfinite(z) || z <= 0.0)
        throw std::overflow_error("block_partition_function: result is not a finite positive number at beta=" +
                                  std::to_string(beta) + "; use log_block_partition_function");
    return z;
}

/// Lowest energy Σ_k λ_k ε_k inside the irrep (largest row on lowest level).
inline double block_ground_energy(const Partition& lambda, const SpectrumSpec& spec)
{
    detail::check_same_d(lambda, spec);
    double e = 0.0;
    for (int k = 0; k < spec.d(); ++k)
        e += lambda[k] * spec[k];
    return e;
}

/// Memoized Gelfand–Tsetlin branching evaluator for all irreps at fixed
/// (spectrum, β). Intermediate shapes are shared between irreps.
class SchurBranching {
public:
    SchurBranching(SpectrumSpec spec, double beta) : spec_(std::move(spec)), beta_(beta)
    {
        if (!(beta >= 0.0))
            throw std::invalid_argument("SchurBranching: beta must be >= 0");
        const int d = spec_.d();
        ratio_.assign(d, std::vector<double>(d, 1.0));
        gap_.assign(d, std::vector<double>(d, 0.0));
        for (int m = 0; m < d; ++m)
            for (int i = 0; i < m; ++i) {
                gap_[m][i] = spec_[m] - spec_[i];
                ratio_[m][i] = std::exp(-beta_ * gap_[m][i]);
            }
    }

    LogZ log_z(const Partition& lambda)
    {
        detail::check_same_d(lambda, spec_);
        const Term t = eval(lambda.parts());
        LogZ out;
        const double e0 = block_ground_energy(lambda, spec_);
        out.log_value = -beta_ * e0 + std::log(t.value);
        out.d_log_value = -e0 + t.deriv / t.value;
        return out;
    }

private:
    struct Term {
        double value = 0.0; ///< s_ν / x^ν ≥ 1
        double deriv = 0.0; ///< ∂_β of value
    };

    Term eval(const std::vector<int>& nu)
    {
        const int m = static_cast<int>(nu.size());
        if (m == 1)
            return Term{1.0, 0.0};
        auto it = memo_.find(nu);
        if (it != memo_.end())
            return it->second;

        Term acc;
        std::vector<int> mu(m - 1);
        const int top = m - 1; // index of the level being branched off
        // enumerate μ with ν_{i+1} ≤ μ_i ≤ ν_i
        auto rec = [&](auto&& self, int i, double w, double dw) -> void {
            if (i == m - 1) {
                const Term sub = eval(mu);
                acc.value += w * sub.value;
                acc.deriv += dw * sub.value + w * sub.deriv;
                return;
            }
            double wi = 1.0;
            for (int v = nu[i]; v >= nu[i + 1]; --v) {
                const int e = nu[i] - v; // exponent of x_top/x_i
                mu[i] = v;
                // d/dβ of (x_top/x_i)^e = −e·gap·(x_top/x_i)^e
                const double nw = w * wi;
                const double ndw = dw * wi + w * wi * (-e * gap_[top][i]);
                self(self, i + 1, nw, ndw);
                wi *= ratio_[top][i];
                if (wi == 0.0)
                    break;
            }
        };
        rec(rec, 0, 1.0, 0.0);
        memo_.emplace(nu, acc);
        return acc;
    }

    SpectrumSpec spec_;
    double beta_;
    std::vector<std::vector<double>> ratio_;
    std::vector<std::vector<double>> gap_;
    std::map<std::vector<int>, Term> memo_;
};

/// ln Z^λ_β and ∂_β ln Z^λ_β, finite for every β ≥ 0.
inline LogZ log_block_partition_function(const Partition& lambda, const SpectrumSpec& spec, double beta)
{
    SchurBranching eval(spec, beta);
    return eval.log_z(lambda);
}

/// Single-particle partition function z_β = Σ_k exp(−β ε_k), log domain.
inline LogZ log_single_particle_partition_function(const SpectrumSpec& spec, double beta)
{
    const double e0 = spec[0];
    double s = 0.0, ds = 0.0;
    for (int k = 0; k < spec.d(); ++k) {
        const double w = std::exp(-beta * (spec[k] - e0));
        s += w;
        ds -= (spec[k] - e0) * w;
    }
    return LogZ{-beta * e0 + std::log(s), -e0 + ds / s};
}

// ---------------------------------------------------------------------------
// spin ensembles, h = S_z

/// ln Z^J_β for the spin-J block with unit level spacing.
inline LogZ log_spin_block_partition_function(HalfInt J, double beta)
{
    if (!(beta >= 0.0))
        throw std::invalid_argument("log_spin_block_partition_function: beta must be >= 0");
    // Z = e^{βJ} Σ_{k=0}^{2J} e^{−βk}
    double s = 0.0, ds = 0.0, w = 1.0;
    const double r = std::exp(-beta);
    for (int k = 0; k <= J.twice; ++k) {
        s += w;
        ds -= k * w;
        w *= r;
        if (w == 0.0)
            break;
    }
    return LogZ{beta * J.value() + std::log(s), J.value() + ds / s};
}

/// sinh[β(2J+1)/2] / sinh[β/2].
inline double spin_block_partition_function(HalfInt J, double beta)
{
    if (beta == 0.0)
        return J.twice + 1.0;
    return std::sinh(beta * (J.twice + 1.0) / 2.0) / std::sinh(beta / 2.0);
}

// ---------------------------------------------------------------------------
// SU(3) closed form

/// Parameters (a₁, a₂) of the SU(3) double-sum formula, fixed by matching the
/// fundamental irrep to the single-particle trace.
struct Su3Calibration {
    double a1 = 0.0;
    double a2 = 0.0;
    int isolated_level = 0; ///< level carrying energy −2a₂/3
};

/// Double-sum character of the SU(3) irrep with Dynkin labels x_j = λ_j − λ_{j+1}:
///   Z = e^{βa₂(2x₁+x₂)/3} Σ_{k≤x₁} Σ_{l≤x₂} e^{−βa₂(k+l)} sinh[βa₁(k−l+x₂+1)/2] / sinh[βa₁/2]
/// The prefactor exponent (2x₁+x₂)/3 makes every irrep traceless.
inline double su3_closed_form(const Partition& lambda, double a1, double a2, double beta)
{
    if (lambda.d() != 3)
        throw std::invalid_argument("su3_closed_form: requires d = 3");
    const int x1 = lambda[0] - lambda[1];
    const int x2 = lambda[1] - lambda[2];
    const double half = beta * a1 / 2.0;
    double sum = 0.0;
    for (int k = 0; k <= x1; ++k)
        for (int l = 0; l <= x2; ++l) {
            const int mult = k - l + x2 + 1;
            const double ratio =
                std::abs(half) < 1e-300 ? static_cast<double>(mult) : std::sinh(half * mult) / std::sinh(half);
            sum += std::exp(-beta * a2 * (k + l)) * ratio;
        }
    return std::exp(beta * a2 * (2.0 * x1 + x2) / 3.0) * sum;
}

/// Chooses (a₁, a₂) so that su3_closed_form((1,0,0)) reproduces z_β on a β grid.
inline Su3Calibration calibrate_su3(const SpectrumSpec& spec)
{
    if (spec.d() != 3)
        throw std::invalid_argument("calibrate_su3: requires d = 3");
    const Partition fundamental{1, 0, 0};
    const double grid[] = {0.1, 0.5, 1.0, 2.0, 4.0};
    for (int iso = 0; iso < 3; ++iso) {
        Su3Calibration c;
        c.isolated_level = iso;
        c.a2 = -1.5 * spec[iso];
        const int a = (iso + 1) % 3, b = (iso + 2) % 3;
        c.a1 = std::abs(spec[a] - spec[b]);
        bool ok = true;
        for (double beta : grid) {
            const double z = std::exp(log_single_particle_partition_function(spec, beta).log_value);
            const double zc = su3_closed_form(fundamental, c.a1, c.a2, beta);
            if (std::abs(zc - z) > 1e-12 * z) {
                ok = false;
                break;
            }
        }
        if (ok)
            return c;
    }
    throw std::runtime_error("calibrate_su3: no (a1, a2) reproduces the single-particle trace");
}

// ---------------------------------------------------------------------------
// symmetric subspace

inline double binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

/// Small-β expansion d_sym (1 + β² n(n+d)⟨⟨ε²⟩⟩ / (2(d+1))) of Z^sym_β.
inline double sym_partition_expansion(int n, int d, const SpectrumSpec& spec, double beta)
{
    if (spec.d() != d)
        throw std::invalid_argument("sym_partition_expansion: spectrum dimension mismatch");
    const double dsym = std::round(binomial(n + d - 1, n));
    return dsym * (1.0 + beta * beta * n * (n + d) * spec.mean_square() / (2.0 * (d + 1)));
}

/// Small-β expansion (1 + 2ns)(1 + β² ns(1+ns)/6) of the maximal-J block.
inline double spin_max_partition_expansion(int n, HalfInt s, double beta)
{
    const double ns = n * s.value();
    return (1.0 + 2.0 * ns) * (1.0 + beta * beta * ns * (1.0 + ns) / 6.0);
}

} // namespace permthermo
