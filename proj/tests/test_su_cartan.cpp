#include <gtest/gtest.h>

#include "permthermo/su_cartan.hpp"

using namespace permthermo;

namespace {

Matrix comm(const Matrix& a, const Matrix& b) { return a * b - b * a; }

} // namespace

TEST(SuCartan, CommutationRelations)
{
    for (int d = 2; d <= 6; ++d) {
        const auto b = fundamental_cartan_basis(d);
        const auto& dg = b.diag_generators();
        ASSERT_EQ(static_cast<int>(dg.size()), d - 1);
        for (int i = 0; i < d - 1; ++i) {
            EXPECT_NEAR(dg[i].trace(), 0.0, 1e-14);
            for (int j = 0; j < d - 1; ++j)
                EXPECT_LT((dg[i] * dg[j] - dg[j] * dg[i]).norm(), 1e-12);
        }
        double qsum = 0.0;
        for (int i = 0; i < d - 1; ++i)
            qsum = std::max(qsum, std::abs(b.expansion_coeffs().row(i).sum()));
        EXPECT_LT(qsum, 1e-12);
        for (const Root& r : b.roots()) {
            const Matrix e = b.root_op(r);
            const auto v = b.root_vector(r);
            for (int k = 0; k < d - 1; ++k)
                EXPECT_LT((comm(dg[k].cast<cplx>(), e) - v(k) * e).norm(), 1e-12);
            EXPECT_LT((e.adjoint() - b.root_op(r.negative())).norm(), 1e-15);
            EXPECT_LT((b.root_vector(r.negative()) + v).norm(), 1e-15);
            // [e_μ, e_−μ] = Σ M_μi d_i
            Matrix rhs = Matrix::Zero(d, d);
            const auto m = b.structure_m(r);
            for (int k = 0; k < d - 1; ++k)
                rhs += m(k) * dg[k].cast<cplx>();
            EXPECT_LT((comm(e, b.root_op(r.negative())) - rhs).norm(), 1e-12);
        }
    }
}

TEST(SuCartan, StructureConstantsN)
{
    const auto b = fundamental_cartan_basis(3);
    EXPECT_DOUBLE_EQ(b.structure_n(Root{0, 1}, Root{1, 2}), 1.0);
    EXPECT_DOUBLE_EQ(b.structure_n(Root{1, 2}, Root{0, 1}), -1.0);
    EXPECT_DOUBLE_EQ(b.structure_n(Root{0, 1}, Root{0, 2}), 0.0);
}

TEST(SuCartan, GeneratingSetReachesAllRoots)
{
    for (int d = 2; d <= 5; ++d) {
        const auto b = fundamental_cartan_basis(d);
        for (const Root& r : b.roots()) {
            const Matrix m = nested_commutator_root(b, r);
            const Matrix e = b.root_op(r);
            // equal up to a nonzero scale
            const cplx scale = m(r.i, r.j);
            EXPECT_GT(std::abs(scale), 0.5) << r.to_string();
            EXPECT_LT((m - scale * e).norm(), 1e-12) << r.to_string();
        }
    }
}

TEST(SuCartan, LadderBohrFrequencies)
{
    const auto spec = SpectrumSpec::ladder(3);
    EXPECT_EQ(spec.levels(), (std::vector<double>{-1.0, 0.0, 1.0}));
    const auto w = bohr_frequencies(spec, fundamental_cartan_basis(3));
    EXPECT_DOUBLE_EQ(w.at(Root{1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(w.at(Root{2, 1}), 1.0);
    EXPECT_DOUBLE_EQ(w.at(Root{2, 0}), 2.0);
    EXPECT_DOUBLE_EQ(w.at(Root{0, 2}), -2.0);
}

TEST(SuCartan, TwoLevelSpectrumFrequencies)
{
    for (int d = 3; d <= 6; ++d) {
        const auto spec = SpectrumSpec::two_level(d);
        for (const auto& [r, om] : bohr_frequencies(spec, fundamental_cartan_basis(d))) {
            const bool ok = std::abs(om) < 1e-12 || std::abs(std::abs(om) - (d - 1.0)) < 1e-12;
            EXPECT_TRUE(ok) << om;
        }
    }
    const auto s4 = SpectrumSpec::two_level(4);
    EXPECT_EQ(s4.levels(), (std::vector<double>{-1.5, -1.5, 1.5, 1.5}));
}

TEST(SuCartan, SpectrumValidationAndShift)
{
    EXPECT_THROW(SpectrumSpec::from_levels({0.0, 1.0}), std::invalid_argument);
    const auto s = SpectrumSpec::from_levels({0.0, 1.0, 2.0}, true);
    EXPECT_DOUBLE_EQ(s.shift(), -1.0);
    EXPECT_EQ(s.levels(), (std::vector<double>{-1.0, 0.0, 1.0}));
    EXPECT_THROW(SpectrumSpec::from_levels({0.0, NAN}, true), std::invalid_argument);
}

TEST(SuCartan, GapFamily)
{
    const auto a = SpectrumSpec::h_delta(0.0);
    EXPECT_NEAR(a[0], -2.0 / 3, 1e-15);
    EXPECT_NEAR(a[1], -2.0 / 3, 1e-15);
    EXPECT_NEAR(a[2], 4.0 / 3, 1e-15);
    const auto b = SpectrumSpec::h_delta(2.0);
    EXPECT_NEAR(b[0], -4.0 / 3, 1e-15);
    EXPECT_NEAR(b[1], 2.0 / 3, 1e-15);
    EXPECT_NEAR(b[2], 2.0 / 3, 1e-15);
    for (double dl = 0.0; dl <= 2.0; dl += 0.25) {
        const auto s = SpectrumSpec::h_delta(dl);
        EXPECT_NEAR(s[0] + s[1] + s[2], 0.0, 1e-14);
        EXPECT_DOUBLE_EQ(s.shift(), 0.0);
    }
    EXPECT_THROW(SpectrumSpec::h_delta(2.5), std::invalid_argument);
}

TEST(SuCartan, CoefficientRoundTrip)
{
    for (int d = 2; d <= 5; ++d) {
        const auto basis = fundamental_cartan_basis(d);
        const auto spec = SpectrumSpec::ladder(d);
        const auto a = spec.coefficients(basis);
        const auto back = SpectrumSpec::from_coefficients(a, basis);
        for (int k = 0; k < d; ++k)
            EXPECT_NEAR(back[k], spec[k], 1e-12);
    }
}

TEST(SuCartan, SpinMatrices)
{
    for (int tw = 1; tw <= 4; ++tw) {
        const HalfInt s = HalfInt::from_twice(tw);
        const auto m = spin_operators(s);
        const cplx i(0.0, 1.0);
        EXPECT_LT((comm(m.x, m.y) - i * m.z).norm(), 1e-12);
        EXPECT_LT((comm(m.z, m.plus) - m.plus).norm(), 1e-12);
        const Matrix cas = m.x * m.x + m.y * m.y + m.z * m.z;
        const double sv = s.value();
        EXPECT_LT((cas - sv * (sv + 1.0) * Matrix::Identity(tw + 1, tw + 1)).norm(), 1e-12);
        EXPECT_DOUBLE_EQ(m.z(0, 0).real(), sv);
    }
}

TEST(SuCartan, CollectiveOperatorProperties)
{
    const auto basis = fundamental_cartan_basis(3);
    for (int n = 1; n <= 4; ++n) {
        const auto spec = SpectrumSpec::ladder(3);
        const Matrix h = collective_operator(spec.hamiltonian().cast<cplx>(), n).dense();
        EXPECT_LT((h - h.adjoint()).norm(), 1e-14);
        // H is diagonal with entries Σ_particles ε
        const long dim = h.rows();
        for (long idx = 0; idx < dim; ++idx) {
            double e = 0.0;
            long rest = idx;
            for (int k = 0; k < n; ++k) {
                e += spec[rest % 3];
                rest /= 3;
            }
            EXPECT_NEAR(h(idx, idx).real(), e, 1e-12);
        }
        EXPECT_NEAR((h - Matrix(h.diagonal().asDiagonal())).norm(), 0.0, 1e-14);
        const auto w = bohr_frequencies(spec, basis);
        for (const Root& r : basis.roots()) {
            const Matrix e = collective_operator(basis.root_op(r), n).dense();
            EXPECT_LT((comm(h, e) - w.at(r) * e).norm(), 1e-12);
        }
        // commutators carry over with the same structure constants
        const Matrix e12 = collective_operator(basis.root_op(Root{0, 1}), n).dense();
        const Matrix e23 = collective_operator(basis.root_op(Root{1, 2}), n).dense();
        const Matrix e13 = collective_operator(basis.root_op(Root{0, 2}), n).dense();
        EXPECT_LT((comm(e12, e23) - basis.structure_n(Root{0, 1}, Root{1, 2}) * e13).norm(), 1e-12);
    }
    const Matrix lx = spin_operators(HalfInt::from_twice(1)).x;
    const Matrix big = collective_operator(lx, 3).dense();
    EXPECT_LT((big - big.adjoint()).norm(), 1e-14);
    EXPECT_THROW(collective_operator(Matrix::Identity(2, 2), 15), std::length_error);
}
