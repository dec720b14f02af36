// Young-diagram combinatorics for the Schur-Weyl decomposition of (C^d)^{⊗n}:
// partitions, SU(d) irrep dimensions, S_n multiplicities, spin-s coupling
// multiplicities and symmetric-group characters.
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace permthermo {

using BigInt = boost::multiprecision::cpp_int;

/// Largest n for which dimensions and multiplicities are evaluated with exact
/// integer arithmetic before being converted to the log domain.
inline constexpr int kExactArithmeticMaxN = 30;

/// Ordered partition λ₁ ≥ … ≥ λ_d ≥ 0 of n, padded with zeros to length d.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts))
    {
        if (parts_.empty())
            throw std::invalid_argument("Partition: needs at least one part");
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 0)
                throw std::invalid_argument("Partition: negative part");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw std::invalid_argument("Partition: parts must be weakly decreasing");
        }
        n_ = std::accumulate(parts_.begin(), parts_.end(), 0);
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    int n() const { return n_; }
    int d() const { return static_cast<int>(parts_.size()); }
    int operator[](std::size_t i) const { return parts_[i]; }
    const std::vector<int>& parts() const { return parts_; }

    /// Number of non-zero parts.
    int length() const
    {
        return static_cast<int>(std::count_if(parts_.begin(), parts_.end(), [](int p) { return p > 0; }));
    }

    /// λ + δ with δ = (d−1, d−2, …, 0).
    std::vector<int> shifted() const
    {
        std::vector<int> s(parts_);
        for (int i = 0; i < d(); ++i)
            s[i] += d() - 1 - i;
        return s;
    }

    bool is_symmetric() const { return parts_[0] == n_; }

    std::string to_string() const
    {
        std::ostringstream os;
        os << '(';
        for (int i = 0; i < d(); ++i)
            os << (i ? "," : "") << parts_[i];
        os << ')';
        return os.str();
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

private:
    std::vector<int> parts_{};
    int n_ = 0;
};

/// All ordered partitions of n into d non-negative parts, lexicographically
/// decreasing, so the symmetric irrep (n,0,…,0) comes first.
inline std::vector<Partition> enumerate_partitions(int n, int d)
{
    if (n < 1 || d < 1)
        throw std::invalid_argument("enumerate_partitions: requires n >= 1 and d >= 1");
    std::vector<Partition> out;
    std::vector<int> cur(d, 0);
    // depth-first, largest admissible part first
    auto rec = [&](auto&& self, int pos, int remaining, int cap) -> void {
        if (pos == d - 1) {
            if (remaining <= cap) {
                cur[pos] = remaining;
                out.emplace_back(cur);
            }
            return;
        }
        int hi = std::min(remaining, cap);
        // remaining mass must fit in the trailing parts
        for (int p = hi; p >= 0 && p * (d - pos) >= remaining; --p) {
            cur[pos] = p;
            self(self, pos + 1, remaining - p, p);
        }
    };
    rec(rec, 0, n, n);
    return out;
}

namespace detail {

inline BigInt factorial(int k)
{
    BigInt f = 1;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

inline BigInt vandermonde(const std::vector<int>& s)
{
    BigInt v = 1;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            v *= (s[i] - s[j]);
    return v;
}

inline double log_vandermonde(const std::vector<int>& s)
{
    double v = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            v += std::log(static_cast<double>(s[i] - s[j]));
    return v;
}

inline std::uint64_t to_u64(const BigInt& v, const char* what)
{
    if (v > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw std::overflow_error(std::string(what) + ": value exceeds 64-bit range");
    return v.convert_to<std::uint64_t>();
}

inline double log_big(const BigInt& v)
{
    // log via the top 64 bits to avoid overflow in convert_to<double>
    if (v <= 0)
        throw std::domain_error("log_big: non-positive argument");
    const unsigned bits = boost::multiprecision::msb(v) + 1;
    if (bits <= 60)
        return std::log(v.convert_to<double>());
    const unsigned shift = bits - 60;
    BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

} // namespace detail

/// Dimension d_λ of the SU(d) irrep λ (number of semi-standard tableaux).
inline BigInt irrep_dimension_exact(const Partition& lambda)
{
    BigInt denom = 1;
    for (int k = 1; k < lambda.d(); ++k)
        denom *= detail::factorial(k);
    return detail::vandermonde(lambda.shifted()) / denom;
}

inline std::uint64_t irrep_dimension(const Partition& lambda)
{
    return detail::to_u64(irrep_dimension_exact(lambda), "irrep_dimension");
}

inline double log_irrep_dimension(const Partition& lambda)
{
    double denom = 0.0;
    for (int k = 1; k < lambda.d(); ++k)
        denom += std::lgamma(k + 1.0);
    return detail::log_vandermonde(lambda.shifted()) - denom;
}

/// Multiplicity m_λ of irrep λ in (C^d)^{⊗n}; equals the number of standard
/// Young tableaux of shape λ.
inline BigInt irrep_multiplicity_exact(const Partition& lambda)
{
    const auto s = lambda.shifted();
    BigInt num = detail::factorial(lambda.n()) * detail::vandermonde(s);
    BigInt den = 1;
    for (int v : s)
        den *= detail::factorial(v);
    return num / den;
}

inline std::uint64_t irrep_multiplicity(const Partition& lambda)
{
    return detail::to_u64(irrep_multiplicity_exact(lambda), "irrep_multiplicity");
}

inline double log_irrep_multiplicity(const Partition& lambda)
{
    if (lambda.n() <= kExactArithmeticMaxN)
        return detail::log_big(irrep_multiplicity_exact(lambda));
    const auto s = lambda.shifted();
    double v = std::lgamma(lambda.n() + 1.0) + detail::log_vandermonde(s);
    for (int x : s)
        v -= std::lgamma(x + 1.0);
    return v;
}

/// Plancherel-type weight m_λ d_λ / d^n of λ under the maximally mixed state.
inline double plancherel_prob(const Partition& lambda)
{
    const int d = lambda.d();
    const int n = lambda.n();
    if (n <= kExactArithmeticMaxN) {
        BigInt num = irrep_multiplicity_exact(lambda) * irrep_dimension_exact(lambda);
        BigInt den = boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(n));
        // numerator <= denominator; scale to keep 53 bits of the ratio
        using boost::multiprecision::cpp_bin_float_double;
        return static_cast<double>(cpp_bin_float_double(num) / cpp_bin_float_double(den));
    }
    return std::exp(log_irrep_multiplicity(lambda) + log_irrep_dimension(lambda) - n * std::log(double(d)));
}

// ---------------------------------------------------------------------------
// spin-s coupling

/// Half-integer stored as twice its value.
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
    static constexpr HalfInt integer(int v) { return HalfInt{2 * v}; }

    constexpr double value() const { return twice / 2.0; }
    constexpr bool is_integer() const { return twice % 2 == 0; }

    std::string to_string() const
    {
        return is_integer() ? std::to_string(twice / 2) : std::to_string(twice) + "/2";
    }

    friend constexpr bool operator==(HalfInt, HalfInt) = default;
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
};

/// Parse "1/2", "3/2", "1", "0.5".
inline HalfInt parse_half_int(const std::string& text)
{
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            int num = std::stoi(text.substr(0, slash));
            int den = std::stoi(text.substr(slash + 1));
            if (den == 2)
                return HalfInt::from_twice(num);
            if (den == 1)
                return HalfInt::integer(num);
        } else {
            double v = std::stod(text);
            double tw = 2.0 * v;
            if (std::abs(tw - std::round(tw)) < 1e-12)
                return HalfInt::from_twice(static_cast<int>(std::lround(tw)));
        }
    } catch (const std::logic_error&) {
    }
    throw std::invalid_argument("not a half-integer: '" + text + "'");
}

/// Multiplicities m_J of total angular momentum J in (spin-s)^{⊗n}, built by
/// coupling one spin at a time.
inline std::map<HalfInt, BigInt> spin_multiplicities(int n, HalfInt s)
{
    if (n < 1)
        throw std::invalid_argument("spin_multiplicities: n must be >= 1");
    if (s.twice < 1)
        throw std::invalid_argument("spin_multiplicities: s must be >= 1/2");
    std::map<HalfInt, BigInt> m{{s, BigInt(1)}};
    for (int step = 1; step < n; ++step) {
        std::map<HalfInt, BigInt> next;
        for (const auto& [jp, mult] : m) {
            // J ranges over |J'−s| … J'+s in integer steps
            for (int tj = std::abs(jp.twice - s.twice); tj <= jp.twice + s.twice; tj += 2)
                next[HalfInt::from_twice(tj)] += mult;
        }
        m = std::move(next);
    }
    return m;
}

/// Multiplicity of J for n spin-1/2 particles from the general two-row
/// formula m_λ with λ = (n/2+J, n/2−J).
inline BigInt spin_half_multiplicity(int n, HalfInt J)
{
    if ((n - J.twice) % 2 != 0 || J.twice > n || J.twice < 0)
        return 0;
    int l1 = (n + J.twice) / 2;
    int l2 = (n - J.twice) / 2;
    return irrep_multiplicity_exact(Partition{l1, l2});
}

/// Block probabilities p^J = (2J+1) m_J / (2s+1)^n of the maximally mixed
/// n-spin state, propagated in normalized form so large n stays finite.
inline std::vector<std::pair<HalfInt, double>> spin_plancherel(int n, HalfInt s)
{
    if (n < 1 || s.twice < 1)
        throw std::invalid_argument("spin_plancherel: requires n >= 1, s >= 1/2");
    // index by twice-J
    const int max_tj = n * s.twice;
    std::vector<double> p(max_tj + 1, 0.0), next(max_tj + 1, 0.0);
    p[s.twice] = 1.0;
    const double dim_s = s.twice + 1.0;
    for (int step = 1; step < n; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int tjp = 0; tjp <= step * s.twice; ++tjp) {
            if (p[tjp] == 0.0)
                continue;
            for (int tj = std::abs(tjp - s.twice); tj <= tjp + s.twice; tj += 2)
                next[tj] += p[tjp] * (tj + 1.0) / (dim_s * (tjp + 1.0));
        }
        std::swap(p, next);
    }
    std::vector<std::pair<HalfInt, double>> out;
    for (int tj = max_tj; tj >= 0; --tj)
        if (p[tj] > 0.0)
            out.emplace_back(HalfInt::from_twice(tj), p[tj]);
    return out;
}

// ---------------------------------------------------------------------------
// symmetric group

/// Cycle type of a permutation: multiset of cycle lengths, sorted descending.
class CycleType {
public:
    CycleType() = default;
    explicit CycleType(std::vector<int> lengths) : lengths_(std::move(lengths))
    {
        for (int l : lengths_)
            if (l < 1)
                throw std::invalid_argument("CycleType: cycle lengths must be positive");
        std::sort(lengths_.begin(), lengths_.end(), std::greater<>());
        n_ = std::accumulate(lengths_.begin(), lengths_.end(), 0);
    }
    CycleType(std::initializer_list<int> l) : CycleType(std::vector<int>(l)) {}

    int n() const { return n_; }
    const std::vector<int>& lengths() const { return lengths_; }

    /// Order of the centralizer, z_σ = Π_k k^{a_k} a_k!.
    BigInt centralizer_order() const
    {
        std::map<int, int> counts;
        for (int l : lengths_)
            ++counts[l];
        BigInt z = 1;
        for (auto [k, a] : counts) {
            for (int i = 0; i < a; ++i)
                z *= k;
            z *= detail::factorial(a);
        }
        return z;
    }

    friend bool operator==(const CycleType&, const CycleType&) = default;

private:
    std::vector<int> lengths_{};
    int n_ = 0;
};

inline std::vector<CycleType> enumerate_cycle_types(int n)
{
    std::vector<CycleType> out;
    for (const auto& p : enumerate_partitions(n, n)) {
        std::vector<int> l;
        for (int v : p.parts())
            if (v > 0)
                l.push_back(v);
        out.emplace_back(l);
    }
    return out;
}

inline constexpr int kMaxCharacterN = 8;

namespace detail {

// Murnaghan–Nakayama on beta-sets: removing a border strip of length r moves
// a bead from b to b−r; the sign counts beads jumped over.
inline long long mn_recurse(std::vector<int>& beads, const std::vector<int>& cycles, std::size_t idx)
{
    if (idx == cycles.size())
        return 1;
    const int r = cycles[idx];
    long long total = 0;
    for (std::size_t i = 0; i < beads.size(); ++i) {
        const int b = beads[i];
        const int target = b - r;
        if (target < 0 || std::find(beads.begin(), beads.end(), target) != beads.end())
            continue;
        int between = 0;
        for (int c : beads)
            if (c > target && c < b)
                ++between;
        beads[i] = target;
        long long sub = mn_recurse(beads, cycles, idx + 1);
        beads[i] = b;
        total += (between % 2 ? -sub : sub);
    }
    return total;
}

} // namespace detail

/// Irreducible S_n character χ^λ(σ).
inline long long sn_character(const Partition& lambda, const CycleType& sigma)
{
    if (lambda.n() != sigma.n())
        throw std::invalid_argument("sn_character: partition and cycle type have different weights");
    if (lambda.n() > kMaxCharacterN)
        throw std::invalid_argument("sn_character: n exceeds the supported maximum of 8");
    std::vector<int> beads = lambda.shifted();
    return detail::mn_recurse(beads, sigma.lengths(), 0);
}

} // namespace permthermo
