// Block structure of a permutation-invariant ensemble: the list of irreps
// (SU(d) partitions or spin-J labels) with dimensions, multiplicities and
// per-block partition functions. SU(d) and spin-s ensembles share this
// interface; SymmetryKind selects which formulas fill it.
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "permthermo/characters.hpp"
#include "permthermo/partitions.hpp"
#include "permthermo/su_cartan.hpp"

namespace permthermo {

enum class SymmetryKind { sud, spin };

inline std::string to_string(SymmetryKind k) { return k == SymmetryKind::sud ? "sud" : "spin"; }

struct Block {
    std::string label;      ///< "(2,1,0)" or "J=3/2"
    Partition lambda;       ///< valid for SymmetryKind::sud
    HalfInt J;              ///< valid for SymmetryKind::spin
    double dim = 0.0;       ///< d_λ or 2J+1
    double log_mult = 0.0;  ///< ln m_λ
    double ground_energy = 0.0;
    bool symmetric = false; ///< symmetric irrep / maximal J
};

class Ensemble {
public:
    /// n particles with SU(d) collective coupling and the given spectrum.
    static Ensemble sud(int n, const SpectrumSpec& spec)
    {
        if (n < 1)
            throw std::invalid_argument("Ensemble: n must be >= 1");
        Ensemble e;
        e.kind_ = SymmetryKind::sud;
        e.n_ = n;
        e.spec_ = spec;
        for (const auto& p : enumerate_partitions(n, spec.d())) {
            Block b;
            b.label = p.to_string();
            b.lambda = p;
            b.dim = std::exp(log_irrep_dimension(p));
            if (n <= kExactArithmeticMaxN)
                b.dim = irrep_dimension_exact(p).convert_to<double>();
            b.log_mult = log_irrep_multiplicity(p);
            b.ground_energy = block_ground_energy(p, spec);
            b.symmetric = p.is_symmetric();
            e.blocks_.push_back(std::move(b));
        }
        return e;
    }

    /// n spin-s particles coupled through S_± with h = S_z.
    static Ensemble spin(int n, HalfInt s)
    {
        if (n < 1)
            throw std::invalid_argument("Ensemble: n must be >= 1");
        Ensemble e;
        e.kind_ = SymmetryKind::spin;
        e.n_ = n;
        e.s_ = s;
        e.spec_ = SpectrumSpec::spin_z(s);
        const auto mult = spin_multiplicities(n, s);
        // largest J first, matching the symmetric-first ordering of SU(d)
        for (auto it = mult.rbegin(); it != mult.rend(); ++it) {
            Block b;
            b.label = "J=" + it->first.to_string();
            b.J = it->first;
            b.dim = it->first.twice + 1.0;
            b.log_mult = detail::log_big(it->second);
            b.ground_energy = -it->first.value();
            b.symmetric = it->first.twice == n * s.twice;
            e.blocks_.push_back(std::move(b));
        }
        return e;
    }

    SymmetryKind kind() const { return kind_; }
    int n() const { return n_; }
    int local_dim() const { return spec_.d(); }
    HalfInt spin_s() const { return s_; }
    const SpectrumSpec& spectrum() const { return spec_; }
    const std::vector<Block>& blocks() const { return blocks_; }

    /// ln Z and ∂_β ln Z for every block, in block order.
    std::vector<LogZ> block_log_z(double beta) const
    {
        std::vector<LogZ> out;
        out.reserve(blocks_.size());
        if (kind_ == SymmetryKind::sud) {
            SchurBranching eval(spec_, beta);
            for (const auto& b : blocks_)
                out.push_back(eval.log_z(b.lambda));
        } else {
            for (const auto& b : blocks_)
                out.push_back(log_spin_block_partition_function(b.J, beta));
        }
        return out;
    }

    /// ln Z_β = n ln z_β for the full (distinguishable) ensemble.
    LogZ total_log_z(double beta) const
    {
        LogZ z = log_single_particle_partition_function(spec_, beta);
        return LogZ{n_ * z.log_value, n_ * z.d_log_value};
    }

    /// Index of the symmetric irrep (or maximal J).
    std::size_t symmetric_index() const
    {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i].symmetric)
                return i;
        return 0;
    }

private:
    SymmetryKind kind_ = SymmetryKind::sud;
    int n_ = 0;
    HalfInt s_{};
    SpectrumSpec spec_;
    std::vector<Block> blocks_;
};

} // namespace permthermo
