// Cartan basis of su(d) in the fundamental representation, spin-s matrices,
// single-particle spectra and collective (tensor-sum) operators.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "permthermo/partitions.hpp"

namespace permthermo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Root label (i, j), i ≠ j, 0-based; the root operator is |i⟩⟨j|. Roots with
/// i < j are called positive.
struct Root {
    int i = 0;
    int j = 1;

    Root negative() const { return Root{j, i}; }
    bool positive() const { return i < j; }
    std::string to_string() const { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

    friend bool operator==(Root, Root) = default;
    friend auto operator<=>(Root, Root) = default;
};

class CartanBasis {
public:
    int d() const { return d_; }
    int rank() const { return d_ - 1; }

    /// Traceless real diagonal generators d_1 … d_{d−1}.
    const std::vector<RealMatrix>& diag_generators() const { return diag_; }

    /// Expansion d_i = Σ_j q_ij c_j in the elementary diagonal matrices; row i
    /// is the diagonal of d_i.
    const RealMatrix& expansion_coeffs() const { return q_; }

    /// All d(d−1) roots, positive and negative, in lexicographic (i, j) order.
    const std::vector<Root>& roots() const { return roots_; }

    Matrix root_op(Root r) const
    {
        check_root(r);
        Matrix e = Matrix::Zero(d_, d_);
        e(r.i, r.j) = 1.0;
        return e;
    }

    /// v_μ with [d_k, e_μ] = v_μ^k e_μ.
    Eigen::VectorXd root_vector(Root r) const
    {
        check_root(r);
        Eigen::VectorXd v(rank());
        for (int k = 0; k < rank(); ++k)
            v(k) = q_(k, r.i) - q_(k, r.j);
        return v;
    }

    /// Canonical generating set {e_(i,i+1)}.
    std::vector<Root> generating_set() const
    {
        std::vector<Root> g;
        for (int i = 0; i + 1 < d_; ++i)
            g.push_back(Root{i, i + 1});
        return g;
    }

    /// N_μν with [e_μ, e_ν] = N_μν e_{μ+ν}; zero when μ+ν is not a root.
    double structure_n(Root mu, Root nu) const
    {
        Matrix c = root_op(mu) * root_op(nu) - root_op(nu) * root_op(mu);
        // for matrix units the commutator is ±|a⟩⟨b| or zero
        for (const Root& r : roots_) {
            cplx v = c(r.i, r.j);
            if (std::abs(v) > 0.0)
                return v.real();
        }
        return 0.0;
    }

    /// M_μi with [e_μ, e_{−μ}] = Σ_i M_μi d_i.
    Eigen::VectorXd structure_m(Root mu) const
    {
        Matrix c = root_op(mu) * root_op(mu.negative()) - root_op(mu.negative()) * root_op(mu);
        Eigen::VectorXd m(rank());
        for (int k = 0; k < rank(); ++k)
            m(k) = (diag_[k].cast<cplx>().cwiseProduct(c)).sum().real() / diag_[k].squaredNorm();
        return m;
    }

    friend CartanBasis fundamental_cartan_basis(int d);

private:
    void check_root(Root r) const
    {
        if (r.i < 0 || r.j < 0 || r.i >= d_ || r.j >= d_ || r.i == r.j)
            throw std::invalid_argument("CartanBasis: invalid root " + r.to_string());
    }

    int d_ = 0;
    std::vector<RealMatrix> diag_;
    RealMatrix q_;
    std::vector<Root> roots_;
};

/// Cartan basis in the fundamental representation. For d = 2 the diagonal
/// generator is s_z = diag(1/2, −1/2); for d ≥ 3 the diagonal generators are
/// the generalized Gell-Mann matrices (Λ₃, Λ₈ for d = 3).
inline CartanBasis fundamental_cartan_basis(int d)
{
    if (d < 2)
        throw std::invalid_argument("fundamental_cartan_basis: d must be >= 2");
    CartanBasis b;
    b.d_ = d;
    b.q_ = RealMatrix::Zero(d - 1, d);
    if (d == 2) {
        b.q_(0, 0) = 0.5;
        b.q_(0, 1) = -0.5;
    } else {
        for (int k = 1; k < d; ++k) {
            const double norm = std::sqrt(2.0 / (k * (k + 1.0)));
            for (int j = 0; j < k; ++j)
                b.q_(k - 1, j) = norm;
            b.q_(k - 1, k) = -k * norm;
        }
    }
    for (int k = 0; k < d - 1; ++k)
        b.diag_.push_back(b.q_.row(k).transpose().asDiagonal());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j)
                b.roots_.push_back(Root{i, j});
    return b;
}

/// Root operators of the generating set, combined into e_(i,j) by nested
/// commutators; returns the resulting matrix (equal to e_(i,j) for matrix
/// units).
inline Matrix nested_commutator_root(const CartanBasis& basis, Root target)
{
    const int lo = std::min(target.i, target.j);
    const int hi = std::max(target.i, target.j);
    // e_(lo,hi) = [e_(lo,lo+1), [e_(lo+1,lo+2), … e_(hi−1,hi)]]
    Matrix acc = basis.root_op(Root{hi - 1, hi});
    for (int k = hi - 2; k >= lo; --k) {
        Matrix g = basis.root_op(Root{k, k + 1});
        acc = g * acc - acc * g;
    }
    if (target.i > target.j)
        acc = acc.adjoint().eval();
    return acc;
}

/// Spin-s matrices (S_x, S_y, S_z) in the basis m = s, s−1, …, −s.
struct SpinMatrices {
    Matrix x, y, z, plus, minus;
};

inline SpinMatrices spin_operators(HalfInt s)
{
    if (s.twice < 1)
        throw std::invalid_argument("spin_operators: s must be >= 1/2");
    const int dim = s.twice + 1;
    const double sv = s.value();
    SpinMatrices m;
    m.z = Matrix::Zero(dim, dim);
    m.plus = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double mk = sv - k;
        m.z(k, k) = mk;
        if (k > 0) // S_+ |m⟩ = √(s(s+1) − m(m+1)) |m+1⟩, |m+1⟩ sits at index k−1
            m.plus(k - 1, k) = std::sqrt(sv * (sv + 1.0) - mk * (mk + 1.0));
    }
    m.minus = m.plus.adjoint();
    m.x = (m.plus + m.minus) * 0.5;
    m.y = (m.plus - m.minus) * cplx(0.0, -0.5);
    return m;
}

// ---------------------------------------------------------------------------
// single-particle spectra

/// Traceless single-particle spectrum ε₁ ≤ … ≤ ε_d (units of ħΩ). Basis state
/// k of the single-particle space carries level k.
class SpectrumSpec {
public:
    SpectrumSpec() = default;

    /// Validates tracelessness; with auto_shift the mean is subtracted and
    /// recorded in shift().
    static SpectrumSpec from_levels(std::vector<double> levels, bool auto_shift = false)
    {
        if (levels.size() < 2)
            throw std::invalid_argument("SpectrumSpec: need at least two levels");
        for (double e : levels)
            if (!std::isfinite(e))
                throw std::invalid_argument("SpectrumSpec: non-finite level");
        std::sort(levels.begin(), levels.end());
        const double mean = std::accumulate(levels.begin(), levels.end(), 0.0) / levels.size();
        const double scale = std::max(1.0, std::abs(levels.back() - levels.front()));
        SpectrumSpec s;
        if (std::abs(mean) > 1e-12 * scale) {
            if (!auto_shift)
                throw std::invalid_argument("SpectrumSpec: levels are not traceless");
            for (double& e : levels)
                e -= mean;
            s.shift_ = -mean;
        }
        s.levels_ = std::move(levels);
        return s;
    }

    /// ε_k = Σ_i a_i q_ik.
    static SpectrumSpec from_coefficients(const std::vector<double>& a, const CartanBasis& basis)
    {
        if (static_cast<int>(a.size()) != basis.rank())
            throw std::invalid_argument("SpectrumSpec: coefficient count must equal d-1");
        std::vector<double> lv(basis.d(), 0.0);
        for (int k = 0; k < basis.d(); ++k)
            for (int i = 0; i < basis.rank(); ++i)
                lv[k] += a[i] * basis.expansion_coeffs()(i, k);
        return from_levels(std::move(lv), true);
    }

    /// Unit-spaced ladder ε_k = −(d+1)/2 + k.
    static SpectrumSpec ladder(int d)
    {
        std::vector<double> lv(d);
        for (int k = 1; k <= d; ++k)
            lv[k - 1] = -(d + 1) / 2.0 + k;
        return from_levels(lv);
    }

    /// Two-level spectrum with total spread d−1. For odd d the extra level goes
    /// to the top when upper_heavy is set, otherwise to the bottom.
    static SpectrumSpec two_level(int d, bool upper_heavy = true)
    {
        if (d < 2)
            throw std::invalid_argument("two_level: d must be >= 2");
        int upper = d / 2 + ((d % 2 && upper_heavy) ? 1 : 0);
        std::vector<double> lv(d, 0.0);
        for (int k = d - upper; k < d; ++k)
            lv[k] = d - 1.0;
        return from_levels(lv, true);
    }

    /// Three-level family (2/3)·diag[2−δ/2, δ−1, −1−δ/2], δ ∈ [0, 2].
    static SpectrumSpec h_delta(double delta)
    {
        if (!(delta >= 0.0 && delta <= 2.0))
            throw std::invalid_argument("h_delta: delta must lie in [0, 2]");
        return from_levels({2.0 / 3.0 * (2.0 - delta / 2.0), 2.0 / 3.0 * (delta - 1.0),
                            2.0 / 3.0 * (-1.0 - delta / 2.0)},
                           true);
    }

    /// Levels of S_z for spin s, i.e. −s … s.
    static SpectrumSpec spin_z(HalfInt s)
    {
        std::vector<double> lv;
        for (int k = 0; k <= s.twice; ++k)
            lv.push_back(-s.value() + k);
        return from_levels(lv);
    }

    int d() const { return static_cast<int>(levels_.size()); }
    const std::vector<double>& levels() const { return levels_; }
    double operator[](std::size_t k) const { return levels_[k]; }

    /// Amount added to the input levels to make them traceless.
    double shift() const { return shift_; }

    /// ⟨⟨ε²⟩⟩ = (1/d) Σ ε_k².
    double mean_square() const
    {
        double s = 0.0;
        for (double e : levels_)
            s += e * e;
        return s / d();
    }

    /// Coefficients a_i with ε_k = Σ_i a_i q_ik (the diagonal generators are
    /// mutually orthogonal, so this is a projection).
    std::vector<double> coefficients(const CartanBasis& basis) const
    {
        if (basis.d() != d())
            throw std::invalid_argument("SpectrumSpec: basis dimension mismatch");
        std::vector<double> a(basis.rank(), 0.0);
        for (int i = 0; i < basis.rank(); ++i) {
            const auto row = basis.expansion_coeffs().row(i);
            double dot = 0.0;
            for (int k = 0; k < d(); ++k)
                dot += row(k) * levels_[k];
            a[i] = dot / row.squaredNorm();
        }
        return a;
    }

    RealMatrix hamiltonian() const
    {
        return Eigen::Map<const Eigen::VectorXd>(levels_.data(), d()).asDiagonal();
    }

    bool nondegenerate_ground(double tol = 1e-12) const { return levels_[1] - levels_[0] > tol; }

private:
    std::vector<double> levels_;
    double shift_ = 0.0;
};

/// ω_(i,j) = ε_i − ε_j, so that [h, e_(i,j)] = ω e_(i,j).
inline std::map<Root, double> bohr_frequencies(const SpectrumSpec& spec, const CartanBasis& basis)
{
    if (spec.d() != basis.d())
        throw std::invalid_argument("bohr_frequencies: spectrum and basis dimensions differ");
    std::map<Root, double> w;
    for (const Root& r : basis.roots())
        w[r] = spec[r.i] - spec[r.j];
    return w;
}

// ---------------------------------------------------------------------------
// collective operators

inline constexpr long kMaxCollectiveDim = 1L << 14;

/// X^{(n)} = Σ_k 1^{⊗k} ⊗ x ⊗ 1^{⊗(n−1−k)}; particle 0 is the most
/// significant tensor factor.
class CollectiveOperator {
public:
    CollectiveOperator(const Matrix& x, int n) : n_(n), local_dim_(static_cast<int>(x.rows()))
    {
        if (x.rows() != x.cols())
            throw std::invalid_argument("collective_operator: single-particle matrix must be square");
        if (n < 1)
            throw std::invalid_argument("collective_operator: n must be >= 1");
        long dim = 1;
        for (int k = 0; k < n; ++k) {
            dim *= local_dim_;
            if (dim > kMaxCollectiveDim)
                throw std::length_error("collective_operator: dimension exceeds 2^14");
        }
        dim_ = dim;
        std::vector<Eigen::Triplet<cplx>> trip;
        std::vector<long> stride(n, 1);
        for (int k = n - 2; k >= 0; --k)
            stride[k] = stride[k + 1] * local_dim_;
        for (long col = 0; col < dim_; ++col) {
            for (int k = 0; k < n; ++k) {
                const int b = static_cast<int>((col / stride[k]) % local_dim_);
                for (int a = 0; a < local_dim_; ++a) {
                    const cplx v = x(a, b);
                    if (v != cplx(0.0))
                        trip.emplace_back(col + (a - b) * stride[k], col, v);
                }
            }
        }
        m_.resize(dim_, dim_);
        m_.setFromTriplets(trip.begin(), trip.end());
    }

    int n() const { return n_; }
    long dim() const { return dim_; }
    const SparseMatrix& sparse() const { return m_; }
    Matrix dense() const { return Matrix(m_); }

private:
    int n_;
    int local_dim_;
    long dim_ = 1;
    SparseMatrix m_;
};

inline CollectiveOperator collective_operator(const Matrix& x, int n) { return CollectiveOperator(x, n); }

} // namespace permthermo
