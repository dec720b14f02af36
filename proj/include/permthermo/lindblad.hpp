// Brute-force collective master equation on the full n-particle space:
// generator assembly, adaptive time integration to the steady state,
// isotypic projectors and the block-Gibbs / commutant checks built on them.
// Only meant for small n (D = d^n ≤ 128).
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include "permthermo/ensemble.hpp"
#include "permthermo/partitions.hpp"
#include "permthermo/su_cartan.hpp"

namespace permthermo {

inline constexpr long kMaxLindbladDim = 128;
/// Dense D²×D² assembly is only used for the null-space count.
inline constexpr long kMaxDenseSuperoperatorDim = 64;
inline constexpr int kMaxProjectorN = 6;

/// Thrown when the integrator stops before the residual target is met.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Γ_ω = γ e^{−βω/2}, diagonal in the jump-operator index. ω is the energy a
/// jump adds, so Γ_{−ω} = e^{βω} Γ_ω.
struct RateModel {
    double gamma = 1.0;
    double beta = 1.0;
    bool include_zero_frequency = false;

    double rate(double omega) const { return gamma * std::exp(-beta * omega / 2.0); }
};

// ---------------------------------------------------------------------------
// collective system

struct JumpOperator {
    std::string name;
    SparseMatrix op;
};

/// Hamiltonian (diagonal in the product basis) and collective jump operators
/// for n particles.
class CollectiveSystem {
public:
    /// SU(d) coupling: jumps are the collective matrix units E_(i,j), i ≠ j.
    static CollectiveSystem sud(int n, const SpectrumSpec& spec)
    {
        CollectiveSystem s;
        s.kind_ = SymmetryKind::sud;
        s.n_ = n;
        s.local_dim_ = spec.d();
        s.check_dim();
        s.h_ = collective_diagonal(spec.levels(), n);
        const CartanBasis basis = fundamental_cartan_basis(spec.d());
        for (const Root& r : basis.roots())
            s.jumps_.push_back({"E" + r.to_string(), collective_operator(basis.root_op(r), n).sparse()});
        for (const Root& r : basis.generating_set()) {
            s.generators_.push_back(collective_operator(basis.root_op(r), n).sparse());
            s.generators_.push_back(collective_operator(basis.root_op(r.negative()), n).sparse());
        }
        for (const auto& j : s.jumps_)
            s.algebra_.push_back(j.op);
        for (const auto& g : basis.diag_generators())
            s.algebra_.push_back(collective_operator(g.cast<cplx>(), n).sparse());
        return s;
    }

    /// Spin-s particles coupled through S_± with h = S_z.
    static CollectiveSystem spin(int n, HalfInt spin_s)
    {
        CollectiveSystem s;
        s.kind_ = SymmetryKind::spin;
        s.n_ = n;
        s.spin_s_ = spin_s;
        s.local_dim_ = spin_s.twice + 1;
        s.check_dim();
        const SpinMatrices m = spin_operators(spin_s);
        std::vector<double> lv(s.local_dim_);
        for (int k = 0; k < s.local_dim_; ++k)
            lv[k] = m.z(k, k).real();
        s.h_ = collective_diagonal(lv, n);
        s.jumps_.push_back({"S+", collective_operator(m.plus, n).sparse()});
        s.jumps_.push_back({"S-", collective_operator(m.minus, n).sparse()});
        s.generators_ = {s.jumps_[0].op, s.jumps_[1].op};
        s.algebra_ = {s.jumps_[0].op, s.jumps_[1].op, collective_operator(m.z, n).sparse()};
        return s;
    }

    SymmetryKind kind() const { return kind_; }
    int n() const { return n_; }
    int local_dim() const { return local_dim_; }
    HalfInt spin_s() const { return spin_s_; }
    long dim() const { return static_cast<long>(h_.size()); }

    /// Diagonal of H in the product basis.
    const Eigen::VectorXd& energies() const { return h_; }
    Matrix hamiltonian() const { return h_.cast<cplx>().asDiagonal(); }
    const std::vector<JumpOperator>& jumps() const { return jumps_; }
    /// Collective images of the generating set and their adjoints.
    const std::vector<SparseMatrix>& generating_ops() const { return generators_; }
    /// Collective images of a full basis of the Lie algebra.
    const std::vector<SparseMatrix>& algebra_ops() const { return algebra_; }

private:
    static Eigen::VectorXd collective_diagonal(const std::vector<double>& lv, int n)
    {
        Eigen::VectorXd h = Eigen::VectorXd::Zero(1);
        for (int k = 0; k < n; ++k) {
            Eigen::VectorXd next(h.size() * lv.size());
            for (Eigen::Index a = 0; a < h.size(); ++a)
                for (std::size_t b = 0; b < lv.size(); ++b)
                    next(a * lv.size() + b) = h(a) + lv[b];
            h = std::move(next);
        }
        return h;
    }

    void check_dim() const
    {
        if (n_ < 1)
            throw std::invalid_argument("CollectiveSystem: n must be >= 1");
        long dim = 1;
        for (int k = 0; k < n_; ++k) {
            dim *= local_dim_;
            if (dim > kMaxLindbladDim)
                throw std::length_error("CollectiveSystem: Hilbert-space dimension exceeds 128");
        }
    }

    SymmetryKind kind_ = SymmetryKind::sud;
    int n_ = 0;
    int local_dim_ = 0;
    HalfInt spin_s_{};
    Eigen::VectorXd h_;
    std::vector<JumpOperator> jumps_;
    std::vector<SparseMatrix> generators_;
    std::vector<SparseMatrix> algebra_;
};

struct FrequencyComponent {
    double omega = 0.0; ///< [H, E(ω)] = ω E(ω)
    SparseMatrix op;
};

/// Splits E into components between eigenspaces of a diagonal H. Frequencies
/// closer than tol are merged; a cluster wider than 10·tol means the spectrum
/// cannot be resolved and is reported as an error.
inline std::vector<FrequencyComponent> frequency_components(const Eigen::VectorXd& h, const SparseMatrix& e,
                                                            double tol = 1e-9)
{
    struct Entry {
        double omega;
        Eigen::Index row, col;
        cplx value;
    };
    std::vector<Entry> entries;
    for (Eigen::Index k = 0; k < e.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(e, k); it; ++it)
            if (it.value() != cplx(0.0))
                entries.push_back({h(it.row()) - h(it.col()), it.row(), it.col(), it.value()});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.omega < b.omega; });
    std::vector<FrequencyComponent> out;
    std::size_t start = 0;
    while (start < entries.size()) {
        std::size_t stop = start + 1;
        while (stop < entries.size() && entries[stop].omega - entries[stop - 1].omega <= tol)
            ++stop;
        if (entries[stop - 1].omega - entries[start].omega > 10.0 * tol)
            throw std::runtime_error("frequency_components: Bohr frequencies not resolvable at tolerance");
        double mean = 0.0;
        std::vector<Eigen::Triplet<cplx>> trip;
        for (std::size_t k = start; k < stop; ++k) {
            mean += entries[k].omega;
            trip.emplace_back(entries[k].row, entries[k].col, entries[k].value);
        }
        FrequencyComponent fc;
        fc.omega = mean / (stop - start);
        if (std::abs(fc.omega) <= tol)
            fc.omega = 0.0;
        fc.op.resize(e.rows(), e.cols());
        fc.op.setFromTriplets(trip.begin(), trip.end());
        out.push_back(std::move(fc));
        start = stop;
    }
    return out;
}

// ---------------------------------------------------------------------------
// generator

/// L(ρ) = −i[H,ρ] + Σ Γ_ω (AρA† − ½{A†A, ρ}) over all frequency components A
/// of all jump operators, applied in operator form.
class Lindbladian {
public:
    Lindbladian(const CollectiveSystem& sys, const RateModel& rates) : dim_(sys.dim()), h_(sys.energies())
    {
        if (!(rates.gamma > 0.0))
            throw std::invalid_argument("Lindbladian: gamma must be > 0");
        Matrix k = Matrix::Zero(dim_, dim_);
        for (const auto& j : sys.jumps()) {
            for (auto& fc : frequency_components(h_, j.op)) {
                if (fc.omega == 0.0 && !rates.include_zero_frequency)
                    continue;
                Term t;
                t.omega = fc.omega;
                t.rate = rates.rate(fc.omega);
                t.op = std::move(fc.op);
                t.adj = t.op.adjoint();
                k += t.rate * Matrix(t.adj * t.op);
                terms_.push_back(std::move(t));
            }
        }
        g_ = -0.5 * k;
        for (Eigen::Index a = 0; a < dim_; ++a)
            g_(a, a) += cplx(0.0, -h_(a));
    }

    long dim() const { return dim_; }
    const Eigen::VectorXd& energies() const { return h_; }

    Matrix apply(const Matrix& rho) const
    {
        Matrix out = g_ * rho;
        out += rho * g_.adjoint();
        for (const auto& t : terms_) {
            const Matrix ar = t.op * rho;
            out += t.rate * Matrix((t.op * ar.adjoint()).adjoint());
        }
        return out;
    }

    /// Dense superoperator on column-stacked vec(ρ).
    Matrix superoperator() const
    {
        if (dim_ > kMaxDenseSuperoperatorDim)
            throw std::length_error("Lindbladian: dense superoperator limited to D <= 64");
        const long n2 = dim_ * dim_;
        Matrix s(n2, n2);
        Matrix basis = Matrix::Zero(dim_, dim_);
        for (long b = 0; b < dim_; ++b)
            for (long a = 0; a < dim_; ++a) {
                basis(a, b) = 1.0;
                const Matrix col = apply(basis);
                s.col(b * dim_ + a) = Eigen::Map<const Eigen::VectorXcd>(col.data(), n2);
                basis(a, b) = 0.0;
            }
        return s;
    }

    /// Upper bound on the spectral radius, used to pick the first step.
    double rate_scale() const
    {
        double r = h_.cwiseAbs().maxCoeff() * 2.0;
        for (const auto& t : terms_)
            r += t.rate * Matrix(t.adj * t.op).cwiseAbs().rowwise().sum().maxCoeff();
        return std::max(r, 1e-12);
    }

private:
    struct Term {
        double omega = 0.0;
        double rate = 0.0;
        SparseMatrix op, adj;
    };
    long dim_;
    Eigen::VectorXd h_;
    Matrix g_; ///< −iH − ½ Σ Γ A†A
    std::vector<Term> terms_;
};

/// Number of singular values of the superoperator below rel_tol·σ_max.
inline int nullspace_dimension(const Matrix& superop, double rel_tol = 1e-8)
{
    Eigen::BDCSVD<Matrix> svd(superop);
    const auto& sv = svd.singularValues();
    const double cut = rel_tol * sv(0);
    int count = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) < cut)
            ++count;
    return count;
}

inline long exact_multiplicity(const Ensemble& ens, const Block& b)
{
    if (ens.kind() == SymmetryKind::sud)
        return static_cast<long>(irrep_multiplicity(b.lambda));
    return static_cast<long>(spin_multiplicities(ens.n(), ens.spin_s()).at(b.J));
}

/// Σ_λ m_λ(m_λ+1)/2, the bound on the number of independent steady states
/// counted over symmetric multiplicity-space matrices.
inline long symmetric_nullspace_count(const Ensemble& ens)
{
    long c = 0;
    for (const auto& b : ens.blocks()) {
        const long m = exact_multiplicity(ens, b);
        c += m * (m + 1) / 2;
    }
    return c;
}

/// Σ_λ m_λ², the complex dimension of ⊕_λ γ^λ ⊗ M(m_λ), i.e. of all
/// stationary operators of a block-Gibbs generator.
inline long block_commutant_dimension(const Ensemble& ens)
{
    long c = 0;
    for (const auto& b : ens.blocks()) {
        const long m = exact_multiplicity(ens, b);
        c += m * m;
    }
    return c;
}

// ---------------------------------------------------------------------------
// states

inline Matrix gibbs_state(const Eigen::VectorXd& h, double beta)
{
    const double e0 = h.minCoeff();
    Eigen::VectorXd w = (-beta * (h.array() - e0)).exp();
    w /= w.sum();
    return w.cast<cplx>().asDiagonal();
}

/// Ginibre-type random density matrix GG†/tr.
inline Matrix random_density_matrix(long dim, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Matrix g(dim, dim);
    for (long a = 0; a < dim; ++a)
        for (long b = 0; b < dim; ++b)
            g(a, b) = cplx(nd(rng), nd(rng));
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
}

inline double state_energy(const Matrix& rho, const Eigen::VectorXd& h)
{
    double e = 0.0;
    for (Eigen::Index a = 0; a < h.size(); ++a)
        e += h(a) * rho(a, a).real();
    return e;
}

inline double von_neumann_entropy(const Matrix& rho)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double p = es.eigenvalues()(k);
        if (p > 1e-300)
            s -= p * std::log(p);
    }
    return s;
}

/// tr(ρH) − S(ρ)/β.
inline double state_free_energy(const Matrix& rho, const Eigen::VectorXd& h, double beta)
{
    return state_energy(rho, h) - von_neumann_entropy(rho) / beta;
}

// ---------------------------------------------------------------------------
// time integration

struct IntegratorOptions {
    double residual_tol = 1e-10; ///< stop once ‖Lρ‖ < residual_tol·‖ρ‖
    double rtol = 1e-12;
    double atol = 1e-15;
    long max_steps = 2000000;
    long observe_every = 1;
    double stability_fraction = 0.9;
};

struct SteadyStateResult {
    Matrix rho;
    double residual = 0.0; ///< ‖Lρ‖/‖ρ‖ at exit
    double time = 0.0;
    long steps = 0;
    long rejected = 0;
    double min_eigenvalue = 0.0;
};

using Observer = std::function<void(double t, const Matrix& rho)>;

/// Integrates ∂_t ρ = Lρ with Dormand–Prince 5(4) steps until the residual
/// target is met. The observer sees ρ₀ and every observe_every-th accepted step.
inline SteadyStateResult steady_state(const Lindbladian& L, const Matrix& rho0, const IntegratorOptions& opt = {},
                                      const Observer& observer = {})
{
    if (rho0.rows() != L.dim() || rho0.cols() != L.dim())
        throw std::invalid_argument("steady_state: initial state has wrong dimension");
    if ((rho0 - rho0.adjoint()).norm() > 1e-10 * std::max(1.0, rho0.norm()))
        throw std::invalid_argument("steady_state: initial state is not Hermitian");
    if (std::abs(rho0.trace() - cplx(1.0)) > 1e-10)
        throw std::invalid_argument("steady_state: initial state must have unit trace");
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho0, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw std::invalid_argument("steady_state: initial state is not positive semidefinite");
    }

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5; // autonomous system

    SteadyStateResult res;
    Matrix y = rho0;
    Matrix k1 = L.apply(y);
    // Dormand–Prince is stable on the negative real axis up to about 3.3;
    // keeping h·‖L‖ below that stops the fast modes from being re-excited at
    // tolerance level, which otherwise stalls the residual.
    const double h_max = opt.stability_fraction * 3.3 / L.rate_scale();
    double h = 0.05 / L.rate_scale();
    double t = 0.0;
    if (observer)
        observer(t, y);
    long accepted = 0;
    res.residual = k1.norm() / y.norm();
    while (res.residual >= opt.residual_tol) {
        if (accepted + res.rejected >= opt.max_steps)
            throw ConvergenceError("steady_state: step budget exhausted, residual " + std::to_string(res.residual),
                                   res.residual);
        const Matrix k2 = L.apply(y + h * (a21 * k1));
        const Matrix k3 = L.apply(y + h * (a31 * k1 + a32 * k2));
        const Matrix k4 = L.apply(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Matrix k5 = L.apply(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Matrix k6 = L.apply(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Matrix ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Matrix k7 = L.apply(ynew);
        const Matrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const Eigen::ArrayXXd scale = opt.atol + opt.rtol * y.cwiseAbs().array().max(ynew.cwiseAbs().array());
        const double en = std::sqrt((err.cwiseAbs().array() / scale).square().mean());
        if (!std::isfinite(en))
            throw ConvergenceError("steady_state: integration diverged", std::numeric_limits<double>::infinity());
        if (en <= 1.0) {
            t += h;
            ynew = 0.5 * (ynew + ynew.adjoint()).eval();
            y = std::move(ynew);
            k1 = L.apply(y);
            ++accepted;
            res.residual = k1.norm() / y.norm();
            if (observer && (accepted % opt.observe_every == 0 || res.residual < opt.residual_tol))
                observer(t, y);
        } else {
            ++res.rejected;
        }
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h = std::min(h * fac, h_max);
    }
    y /= y.trace().real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(y, Eigen::EigenvaluesOnly);
    res.min_eigenvalue = es.eigenvalues().minCoeff();
    if (res.min_eigenvalue < -1e-9)
        throw ConvergenceError("steady_state: result lost positivity", res.residual);
    res.rho = std::move(y);
    res.time = t;
    res.steps = accepted;
    return res;
}

// ---------------------------------------------------------------------------
// permutation operators and isotypic projectors

/// U(π) on the n-fold product basis: particle k's state moves to slot π[k].
inline SparseMatrix permutation_operator(int n, int local_dim, const std::vector<int>& perm)
{
    long dim = 1;
    for (int k = 0; k < n; ++k)
        dim *= local_dim;
    std::vector<long> stride(n, 1);
    for (int k = n - 2; k >= 0; --k)
        stride[k] = stride[k + 1] * local_dim;
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(dim);
    for (long idx = 0; idx < dim; ++idx) {
        long out = 0;
        for (int k = 0; k < n; ++k)
            out += ((idx / stride[k]) % local_dim) * stride[perm[k]];
        trip.emplace_back(out, idx, 1.0);
    }
    SparseMatrix u(dim, dim);
    u.setFromTriplets(trip.begin(), trip.end());
    return u;
}

inline SparseMatrix transposition_operator(int n, int local_dim, int i, int j)
{
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[i], perm[j]);
    return permutation_operator(n, local_dim, perm);
}

inline CycleType cycle_type_of(const std::vector<int>& perm)
{
    std::vector<bool> seen(perm.size(), false);
    std::vector<int> lengths;
    for (std::size_t s = 0; s < perm.size(); ++s) {
        if (seen[s])
            continue;
        int len = 0;
        for (std::size_t k = s; !seen[k]; k = perm[k]) {
            seen[k] = true;
            ++len;
        }
        lengths.push_back(len);
    }
    return CycleType(lengths);
}

struct BlockProjector {
    std::string label;
    Matrix P;
};

/// SU(d): P^λ = (m_λ/n!) Σ_π χ^λ(π) U(π), n ≤ 6.
/// Spin: eigenprojectors of the total-spin Casimir.
inline std::vector<BlockProjector> isotypic_projectors(const CollectiveSystem& sys)
{
    const long dim = sys.dim();
    std::vector<BlockProjector> out;
    if (sys.kind() == SymmetryKind::spin) {
        const SpinMatrices m = spin_operators(sys.spin_s());
        const Matrix sx = collective_operator(m.x, sys.n()).dense();
        const Matrix sy = collective_operator(m.y, sys.n()).dense();
        const Matrix sz = collective_operator(m.z, sys.n()).dense();
        const Matrix cas = sx * sx + sy * sy + sz * sz;
        Eigen::SelfAdjointEigenSolver<Matrix> es(cas);
        std::map<int, std::vector<Eigen::Index>> by_j; // keyed by 2J
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            const double c = es.eigenvalues()(k);
            const int twice_j = static_cast<int>(std::lround(std::sqrt(4.0 * c + 1.0) - 1.0));
            if (std::abs(twice_j * (twice_j + 2) / 4.0 - c) > 1e-8)
                throw std::runtime_error("isotypic_projectors: Casimir eigenvalue is not J(J+1)");
            by_j[twice_j].push_back(k);
        }
        for (auto it = by_j.rbegin(); it != by_j.rend(); ++it) {
            Matrix p = Matrix::Zero(dim, dim);
            for (Eigen::Index k : it->second)
                p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            out.push_back({"J=" + HalfInt::from_twice(it->first).to_string(), std::move(p)});
        }
        return out;
    }
    const int n = sys.n();
    if (n > kMaxProjectorN)
        throw std::length_error("isotypic_projectors: n > 6 not supported");
    const auto parts = enumerate_partitions(n, sys.local_dim());
    std::vector<Matrix> acc(parts.size(), Matrix::Zero(dim, dim));
    std::map<std::vector<int>, std::vector<double>> chars;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double nfact = 0.0;
    do {
        nfact += 1.0;
        const CycleType ct = cycle_type_of(perm);
        auto it = chars.find(ct.lengths());
        if (it == chars.end()) {
            std::vector<double> c;
            for (const auto& p : parts) {
                // characters are labelled by partitions of n with at most n rows
                std::vector<int> pp = p.parts();
                pp.resize(std::max<std::size_t>(pp.size(), n), 0);
                c.push_back(static_cast<double>(sn_character(Partition(pp), ct)));
            }
            it = chars.emplace(ct.lengths(), std::move(c)).first;
        }
        const SparseMatrix u = permutation_operator(n, sys.local_dim(), perm);
        for (std::size_t l = 0; l < parts.size(); ++l)
            if (it->second[l] != 0.0)
                acc[l] += it->second[l] * Matrix(u);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (std::size_t l = 0; l < parts.size(); ++l) {
        const double m = static_cast<double>(irrep_multiplicity(parts[l]));
        out.push_back({parts[l].to_string(), acc[l] * (m / nfact)});
    }
    return out;
}

inline double block_population(const BlockProjector& p, const Matrix& rho)
{
    return (p.P.cwiseProduct(rho.transpose())).sum().real();
}

// ---------------------------------------------------------------------------
// verification

struct BlockResidual {
    std::string label;
    double population = 0.0;
    double commutator = 0.0;      ///< ‖[ρ^λ, H]‖_F
    double gibbs_deviation = 0.0; ///< max |pop(E) − Gibbs(E)| over the block's energies
};

struct BlockGibbsReport {
    std::vector<BlockResidual> blocks;
    double cross_block = 0.0; ///< max ‖P^λ ρ P^λ'‖_F, λ ≠ λ'

    double max_residual() const
    {
        double r = cross_block;
        for (const auto& b : blocks)
            r = std::max({r, b.commutator, b.gibbs_deviation});
        return r;
    }
    bool passed(double tol = 1e-6) const { return max_residual() < tol; }
};

/// Checks that ρ is block diagonal and thermal at β inside each occupied block.
/// Within a block, populations are summed per energy and compared with
/// g(E) e^{−βE} / Σ g e^{−βE}, g(E) = tr(P^λ Π_E).
inline BlockGibbsReport verify_block_gibbs(const Matrix& rho, double beta, const std::vector<BlockProjector>& proj,
                                           const Eigen::VectorXd& h, double energy_tol = 1e-9)
{
    BlockGibbsReport rep;
    const Matrix hm = h.cast<cplx>().asDiagonal();
    for (std::size_t l = 0; l < proj.size(); ++l) {
        for (std::size_t k = 0; k < proj.size(); ++k)
            if (k != l)
                rep.cross_block = std::max(rep.cross_block, (proj[l].P * rho * proj[k].P).norm());
        BlockResidual br;
        br.label = proj[l].label;
        br.population = block_population(proj[l], rho);
        if (br.population > 1e-8) {
            const Matrix r = proj[l].P * rho * proj[l].P / br.population;
            br.commutator = (r * hm - hm * r).norm();
            // group basis states by energy
            std::vector<std::pair<double, std::pair<double, double>>> levels; // E → (pop, g)
            for (Eigen::Index a = 0; a < h.size(); ++a) {
                const double g = proj[l].P(a, a).real();
                const double pop = r(a, a).real();
                auto it = std::find_if(levels.begin(), levels.end(),
                                       [&](const auto& e) { return std::abs(e.first - h(a)) < energy_tol; });
                if (it == levels.end())
                    levels.push_back({h(a), {pop, g}});
                else {
                    it->second.first += pop;
                    it->second.second += g;
                }
            }
            const double e0 = h.minCoeff();
            double z = 0.0;
            for (const auto& e : levels)
                z += e.second.second * std::exp(-beta * (e.first - e0));
            for (const auto& e : levels) {
                const double gibbs = e.second.second * std::exp(-beta * (e.first - e0)) / z;
                br.gibbs_deviation = std::max(br.gibbs_deviation, std::abs(e.second.first - gibbs));
            }
        }
        rep.blocks.push_back(br);
    }
    return rep;
}

struct CommutantReport {
    double precondition_residual = 0.0; ///< max ‖[X, G]‖ over the generating set
    bool precondition = false;
    double off_block = 0.0;             ///< max ‖P^λ X P^λ'‖, λ ≠ λ'
    double in_block = 0.0;              ///< max ‖[P^λ X P^λ, P^λ C P^λ]‖ over the algebra
    bool passed = false;
};

/// If X commutes with the collective generating set, it must be block
/// diagonal and commute with the whole collective algebra inside each block.
inline CommutantReport commutant_check(const Matrix& x, const CollectiveSystem& sys,
                                       const std::vector<BlockProjector>& proj, double tol = 1e-10)
{
    CommutantReport rep;
    for (const auto& g : sys.generating_ops())
        rep.precondition_residual = std::max(rep.precondition_residual, Matrix(x * g - g * x).norm());
    rep.precondition = rep.precondition_residual < tol * std::max(1.0, x.norm());
    if (!rep.precondition)
        return rep;
    for (std::size_t l = 0; l < proj.size(); ++l) {
        for (std::size_t k = 0; k < proj.size(); ++k)
            if (k != l)
                rep.off_block = std::max(rep.off_block, (proj[l].P * x * proj[k].P).norm());
        const Matrix xb = proj[l].P * x * proj[l].P;
        for (const auto& c : sys.algebra_ops()) {
            const Matrix cb = proj[l].P * c * proj[l].P;
            rep.in_block = std::max(rep.in_block, (xb * cb - cb * xb).norm());
        }
    }
    const double scale = std::max(1.0, x.norm());
    rep.passed = rep.off_block < 1e-8 * scale && rep.in_block < 1e-8 * scale;
    return rep;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> populations; ///< per block, per sample
    std::vector<double> free_energies;            ///< tr(ρH) − S(ρ)/β
};

/// Observer that records block populations and the non-equilibrium free
/// energy at bath β.
inline Observer trajectory_recorder(Trajectory& tr, const std::vector<BlockProjector>& proj, const Eigen::VectorXd& h,
                                    double beta)
{
    return [&tr, &proj, &h, beta](double t, const Matrix& rho) {
        tr.times.push_back(t);
        std::vector<double> pops;
        for (const auto& p : proj)
            pops.push_back(block_population(p, rho));
        tr.populations.push_back(std::move(pops));
        tr.free_energies.push_back(state_free_energy(rho, h, beta));
    };
}

/// Largest deviation of any block population from its initial value.
inline double population_drift(const Trajectory& tr)
{
    double d = 0.0;
    for (const auto& row : tr.populations)
        for (std::size_t l = 0; l < row.size(); ++l)
            d = std::max(d, std::abs(row[l] - tr.populations.front()[l]));
    return d;
}

/// Free energy non-increasing along the samples, up to slack per step.
inline bool spohn_monotonicity(const Trajectory& tr, double slack = 1e-9)
{
    for (std::size_t k = 1; k < tr.free_energies.size(); ++k)
        if (tr.free_energies[k] > tr.free_energies[k - 1] + slack)
            return false;
    return true;
}

} // namespace permthermo
