#pragma once
// ============================================================================
//  oracle.hpp — N=2 explicit-variable oracle
//
//  Independent brute-force realizations of the abstract objects: explicit
//  monomials m_Λ(x,φ,θ), the exterior derivatives d̄/d̲, the multiplicative
//  generators of Table 1 built *from their differential definitions*, and
//  coefficient extraction back to the abstract m basis.  Everything here is
//  deliberately computed from first principles (distinct-permutation sums,
//  explicit differentiation) so it can cross-check the combinatorial rules
//  implemented elsewhere.
//
//  Variable layout: VarConfig(N, 2); variable i (0-based) owns (x_i, φ_i, θ_i)
//  with canonical word order φ_1 θ_1 φ_2 θ_2 ….
//
//  Series frame: for generating-function work, VarConfig(N+1, 2) whose
//  variable 0 is the bookkeeping triple (t, τ̄, τ̲); the real alphabet starts
//  at variable 1.  Putting (τ̄, τ̲) at the lowest bits makes the component
//  split f = A + τ̄B + τ̲C + τ̄τ̲D sign-free to read off.
// ============================================================================

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "supersym/abstract.hpp"
#include "supersym/grassmann.hpp"
#include "supersym/rational.hpp"
#include "supersym/superpartition.hpp"

namespace supersym {

/// The variable alphabet is too small to host the requested object.
struct TooFewVariables : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
/// The polynomial is not symmetric (or not an m-combination at all).
struct NotSymmetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
/// Fewer variables than the stability bound n + m̄ + m̲ of the sector.
struct UnstableVariableCount : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ============================================================================
//  Explicit monomials
// ============================================================================

namespace detail {

/// Append generator g at the right end of an ascending word, tracking sign.
inline void append_generator(std::uint64_t& mask, int& sign, int g) {
    // g moves left past the generators above it already present.
    const int crossings =
        std::popcount(g >= 63 ? std::uint64_t{0} : mask >> (g + 1));
    if (crossings & 1) sign = -sign;
    mask |= 1ull << g;
}

}  // namespace detail

/// @brief m_Λ(x,φ,θ) as a sum over distinct variable assignments; the
///        identity arrangement [φ;θ]_Λ x^Λ carries coefficient +1.
/// @throws TooFewVariables when ℓ(Λ) > N.
template <class F = Rat>
[[nodiscard]] ExplicitPoly<F> monomial_explicit(const SuperPartition& sp, const VarConfig& cfg) {
    const int N = cfg.n_vars;
    if (static_cast<int>(sp.length()) > N)
        throw TooFewVariables("monomial_explicit: " + to_string(sp) + " needs at least " +
                              std::to_string(sp.length()) + " variables, got " +
                              std::to_string(N));

    // Pad to N parts with plain zeros and group equal parts.
    std::vector<Part> padded = sp.parts();
    padded.resize(static_cast<std::size_t>(N), Part{0, Mark::Plain});
    std::vector<std::pair<Part, int>> groups;  // (part, multiplicity), canonical order
    for (const Part& p : padded) {
        if (!groups.empty() && groups.back().first == p)
            ++groups.back().second;
        else
            groups.emplace_back(p, 1);
    }

    ExplicitPoly<F> out(cfg);
    // Assign each group an increasing set of variables (distinct permutations
    // of the padded multiset); build each term in part order so the identity
    // assignment reproduces [φ;θ]_Λ x^Λ with sign +1.
    std::vector<int> var_of_slot(static_cast<std::size_t>(N), -1);
    auto emit = [&]() {
        GMonomial m;
        int sign = 1;
        std::size_t slot = 0;
        for (const auto& [part, count] : groups) {
            for (int c = 0; c < count; ++c, ++slot) {
                const int v = var_of_slot[slot];
                m.x_exp[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(part.v);
                if (phi_count(part.m)) detail::append_generator(m.fmask, sign, cfg.phi_bit(v));
                if (theta_count(part.m)) detail::append_generator(m.fmask, sign, cfg.theta_bit(v));
            }
        }
        out.add_term(m, sign < 0 ? F(0) - F(1) : F(1));
    };

    std::uint64_t free_vars = (N >= 64) ? ~std::uint64_t{0} : (1ull << N) - 1;
    // Recursive choice of an increasing variable subset per group.
    auto assign = [&](auto&& self, std::size_t group_idx, std::size_t slot_base) -> void {
        if (group_idx == groups.size()) {
            emit();
            return;
        }
        const int count = groups[group_idx].second;
        // choose `count` variables from free_vars in increasing order
        std::vector<int> chosen;
        auto choose = [&](auto&& self2, int start, int left) -> void {
            if (left == 0) {
                for (int c = 0; c < count; ++c)
                    var_of_slot[slot_base + static_cast<std::size_t>(c)] = chosen[static_cast<std::size_t>(c)];
                std::uint64_t taken = 0;
                for (int v : chosen) taken |= 1ull << v;
                free_vars &= ~taken;
                self(self, group_idx + 1, slot_base + static_cast<std::size_t>(count));
                free_vars |= taken;
                return;
            }
            for (int v = start; v <= N - left; ++v) {
                if (!(free_vars >> v & 1)) continue;
                chosen.push_back(v);
                self2(self2, v + 1, left - 1);
                chosen.pop_back();
            }
        };
        choose(choose, 0, count);
    };
    assign(assign, 0, 0);
    return out;
}

/// @brief Memoized monomial_explicit, keyed by (Λ, variable layout); the
///        extraction round-trip re-requests the same monomials constantly.
template <class F = Rat>
[[nodiscard]] const ExplicitPoly<F>& monomial_explicit_cached(const SuperPartition& sp,
                                                              const VarConfig& cfg) {
    static std::map<std::tuple<std::string, int, int>, ExplicitPoly<F>> cache;
    const auto key = std::make_tuple(to_string(sp), cfg.n_vars, cfg.n_types);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    return cache.emplace(key, monomial_explicit<F>(sp, cfg)).first->second;
}

// ============================================================================
//  Exterior derivatives
// ============================================================================

/// @brief d̄f = Σ_i φ_i ∂_i f (kind = Over) or d̲f = Σ_i θ_i ∂_i f
///        (kind = Under), the fermion inserted on the left of each word.
template <class F>
[[nodiscard]] ExplicitPoly<F> exterior_d(const ExplicitPoly<F>& f, Mark kind) {
    const VarConfig& cfg = f.config();
    if (kind == Mark::Over)
        return exterior_d_general(f, [&](int i) { return cfg.phi_bit(i); });
    if (kind == Mark::Under)
        return exterior_d_general(f, [&](int i) { return cfg.theta_bit(i); });
    throw std::invalid_argument("exterior_d: kind must be Over or Under");
}

// ============================================================================
//  Extraction to the abstract m basis
// ============================================================================

/// @brief Longest superpartition in a sector: the variable count needed to
///        represent every m_Λ of the sector faithfully (memoized).
[[nodiscard]] inline int sector_max_length(const Sector& s) {
    static std::map<Sector, int> cache;
    if (auto it = cache.find(s); it != cache.end()) return it->second;
    int need = 0;
    for (const SuperPartition& sp : enumerate_sector(s))
        need = std::max(need, static_cast<int>(sp.length()));
    return cache.emplace(s, need).first->second;
}

/// @brief Read off the m-expansion of a symmetric, sector-homogeneous f:
///        the coefficient of m_Λ is the coefficient of the canonical term
///        [φ;θ]_Λ x^Λ.  The reconstruction Σ c_Λ m_Λ = f is verified.
///
///        `length_bound < 0` (the default) assumes nothing about f, so the
///        variable count must cover the sector's longest superpartition.
///        A caller that KNOWS every m_Λ in f satisfies ℓ(Λ) ≤ length_bound
///        (e.g. a product of monomials with ℓ(Λ)+ℓ(Ω) parts) may pass that
///        bound to work in fewer variables; the guarantee is the caller's —
///        a violating m_Λ would vanish identically and escape unnoticed.
/// @throws UnstableVariableCount when n_vars cannot represent every
///         admissible m_Λ (coefficients would be read off ambiguously);
///         NotSymmetric when f is asymmetric or not an m-combination;
///         std::invalid_argument when f is not homogeneous of sector s.
template <class F>
[[nodiscard]] AbstractPoly<F> extract_m_coeffs(const ExplicitPoly<F>& f, const Sector& s,
                                               int length_bound = -1) {
    const VarConfig& cfg = f.config();
    const int need = length_bound < 0 ? sector_max_length(s)
                                      : std::min(sector_max_length(s), length_bound);
    if (cfg.n_vars < need)
        throw UnstableVariableCount("extract_m_coeffs: sector " + s.str() + " needs at least " +
                                    std::to_string(need) + " variables, got " +
                                    std::to_string(cfg.n_vars));

    // One orbit record per representable m_Λ of the sector, keyed by the
    // canonical term [φ;θ]_Λ x^Λ.  `support` counts the explicit terms of
    // m_Λ over n_vars variables: a falling factorial (ordered choice of one
    // variable per part) divided by the multiplicities of repeated parts.
    struct Orbit {
        SuperPartition sp;
        F c{};
        bool claimed = false;
        unsigned long long seen = 0;
        unsigned __int128 support = 0;
    };
    std::vector<std::pair<GMonomial, Orbit>> orbits;  // flat + sorted: lookups stay in cache
    for (const SuperPartition& sp : enumerate_sector(s)) {
        const int ell = static_cast<int>(sp.length());
        if (ell > cfg.n_vars) continue;  // vanishes identically over this alphabet
        GMonomial key;
        unsigned __int128 support = 1;
        for (int i = 0; i < ell; ++i) {
            const Part& p = sp.parts()[static_cast<std::size_t>(i)];
            key.x_exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(p.v);
            if (phi_count(p.m)) key.fmask |= 1ull << cfg.phi_bit(i);
            if (theta_count(p.m)) key.fmask |= 1ull << cfg.theta_bit(i);
            support *= static_cast<unsigned>(cfg.n_vars - i);
        }
        unsigned long long run = 1;
        for (int i = 1; i <= ell; ++i) {
            if (i < ell && sp.parts()[static_cast<std::size_t>(i)] ==
                               sp.parts()[static_cast<std::size_t>(i - 1)]) {
                support /= ++run;
            } else {
                run = 1;
            }
        }
        orbits.emplace_back(key, Orbit{sp, F(), false, 0, support});
    }
    std::sort(orbits.begin(), orbits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Single pass: classify every term to its orbit by sorting the columns
    // (value, mark, source variable) into canonical part order; replaying
    // the fermionic letters in that order recovers the term's sign relative
    // to the orbit's canonical term.  The first term of an orbit fixes the
    // claimed coefficient; every other term must agree, and at the end each
    // claimed orbit must have been seen exactly `support` times — together
    // these state Σ c_Λ m_Λ = f, which for a homogeneous f also certifies
    // symmetry (the m_Λ span the symmetric subspace).
    struct Column {
        Part part;
        int var;
    };
    std::array<Column, kMaxVars> cols;
    // Terms sort by fermion word first, so marks per variable are constant
    // along each run of f and get decoded once per run.
    std::array<Mark, kMaxVars> marks{};
    std::uint64_t run_mask = 0;
    int run_mo = 0, run_mu = 0;
    bool have_run = false;
    for (const auto& [m, c] : f.terms()) {
        if (!have_run || m.fmask != run_mask) {
            have_run = true;
            run_mask = m.fmask;
            run_mo = run_mu = 0;
            for (int i = 0; i < cfg.n_vars; ++i) {
                const bool phi = m.fmask >> cfg.phi_bit(i) & 1;
                const bool theta = m.fmask >> cfg.theta_bit(i) & 1;
                marks[static_cast<std::size_t>(i)] =
                    phi ? (theta ? Mark::Biline : Mark::Over)
                        : (theta ? Mark::Under : Mark::Plain);
                run_mo += phi;
                run_mu += theta;
            }
        }
        int ell = 0, xdeg = 0;
        for (int i = 0; i < cfg.n_vars; ++i) {
            const int v = m.x_exp[static_cast<std::size_t>(i)];
            const Mark mk = marks[static_cast<std::size_t>(i)];
            if (v == 0 && mk == Mark::Plain) continue;
            const Column col{Part{v, mk}, i};
            xdeg += v;
            int j = ell++;
            // Stable insertion keeps equal parts in ascending-variable order,
            // matching the canonical assignment of monomial_explicit.
            while (j > 0 && part_precedes(col.part, cols[static_cast<std::size_t>(j - 1)].part)) {
                cols[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(j - 1)];
                --j;
            }
            cols[static_cast<std::size_t>(j)] = col;
        }
        if (xdeg != s.n || run_mo != s.mo || run_mu != s.mu)
            throw std::invalid_argument("extract_m_coeffs: term outside sector " + s.str());

        GMonomial key;
        std::uint64_t word = 0;
        int sign = 1;
        for (int j = 0; j < ell; ++j) {
            const Column& col = cols[static_cast<std::size_t>(j)];
            key.x_exp[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(col.part.v);
            if (phi_count(col.part.m)) {
                key.fmask |= 1ull << cfg.phi_bit(j);
                detail::append_generator(word, sign, cfg.phi_bit(col.var));
            }
            if (theta_count(col.part.m)) {
                key.fmask |= 1ull << cfg.theta_bit(j);
                detail::append_generator(word, sign, cfg.theta_bit(col.var));
            }
        }
        const auto it =
            std::lower_bound(orbits.begin(), orbits.end(), key,
                             [](const auto& e, const GMonomial& k) { return e.first < k; });
        if (it == orbits.end() || !(it->first == key))
            throw NotSymmetric("extract_m_coeffs: input is not a combination of monomials");
        Orbit& orbit = it->second;
        const F claimed = sign < 0 ? F(0) - c : c;  // c = orbit.c · sign
        if (!orbit.claimed) {
            orbit.c = claimed;
            orbit.claimed = true;
        } else if (!(orbit.c == claimed)) {
            throw NotSymmetric("extract_m_coeffs: input is not a combination of monomials");
        }
        ++orbit.seen;
    }

    AbstractPoly<F> out(BasisId::m);
    for (const auto& [key, orbit] : orbits) {
        if (!orbit.claimed) continue;
        if (static_cast<unsigned __int128>(orbit.seen) != orbit.support)
            throw NotSymmetric("extract_m_coeffs: input is not a combination of monomials");
        out.add_term(orbit.sp, orbit.c);
    }
    return out;
}

// ============================================================================
//  Table 1 generators, from their differential definitions
// ============================================================================

namespace detail {

/// Classical h_n: sum over all degree-n multisets of variables.
template <class F>
[[nodiscard]] ExplicitPoly<F> classical_h(const VarConfig& cfg, int n) {
    ExplicitPoly<F> out(cfg);
    GMonomial m;
    auto rec = [&](auto&& self, int start, int left) -> void {
        if (left == 0) {
            out.add_term(m, F(1));
            return;
        }
        for (int i = start; i < cfg.n_vars; ++i) {
            ++m.x_exp[static_cast<std::size_t>(i)];
            self(self, i, left - 1);
            --m.x_exp[static_cast<std::size_t>(i)];
        }
    };
    rec(rec, 0, n);
    return out;
}

/// Classical e_n: sum over all n-subsets of variables.
template <class F>
[[nodiscard]] ExplicitPoly<F> classical_e(const VarConfig& cfg, int n) {
    ExplicitPoly<F> out(cfg);
    GMonomial m;
    auto rec = [&](auto&& self, int start, int left) -> void {
        if (left == 0) {
            out.add_term(m, F(1));
            return;
        }
        for (int i = start; i + left <= cfg.n_vars; ++i) {
            m.x_exp[static_cast<std::size_t>(i)] = 1;
            self(self, i + 1, left - 1);
            m.x_exp[static_cast<std::size_t>(i)] = 0;
        }
    };
    rec(rec, 0, n);
    return out;
}

/// Classical p_n = Σ x_i^n (n ≥ 1).
template <class F>
[[nodiscard]] ExplicitPoly<F> classical_p(const VarConfig& cfg, int n) {
    ExplicitPoly<F> out(cfg);
    for (int i = 0; i < cfg.n_vars; ++i) out += ExplicitPoly<F>::x(cfg, i, n);
    return out;
}

}  // namespace detail

/// @brief Explicit Table-1 generator of family p/h/e with the given mark:
///        marked members arise from d̄ f_{n+1}, d̲ f_{n+1}, d̄ d̲ f_{n+2}
///        applied to the classical member, with the p-family normalizations
///        1/(n+1) and 1/((n+1)(n+2)).
template <class F = Rat>
[[nodiscard]] ExplicitPoly<F> generator_explicit(BasisId family, Mark mark, int n,
                                                 const VarConfig& cfg) {
    if (n < 0) throw std::invalid_argument("generator_explicit: negative degree");
    auto classical = [&](int k) -> ExplicitPoly<F> {
        switch (family) {
            case BasisId::p:
                if (k == 0)
                    throw std::invalid_argument("generator_explicit: p_0 is not a generator");
                return detail::classical_p<F>(cfg, k);
            case BasisId::h: return detail::classical_h<F>(cfg, k);
            case BasisId::e: return detail::classical_e<F>(cfg, k);
            default:
                throw std::invalid_argument("generator_explicit: family must be p, h or e");
        }
    };
    switch (mark) {
        case Mark::Plain: return classical(n);
        case Mark::Over:
        case Mark::Under: {
            ExplicitPoly<F> d = exterior_d(classical(n + 1), mark);
            if (family == BasisId::p) d *= F(1) / F(n + 1);
            return d;
        }
        case Mark::Biline: {
            ExplicitPoly<F> d = exterior_d(exterior_d(classical(n + 2), Mark::Under), Mark::Over);
            if (family == BasisId::p) d *= F(1) / (F(n + 1) * F(n + 2));
            return d;
        }
    }
    throw std::invalid_argument("generator_explicit: bad mark");
}

// ============================================================================
//  Series frame (t, τ̄, τ̲) for generating-function checks
// ============================================================================

/// Explicit generating-function workspace over N real variables.
struct SeriesFrame {
    VarConfig cfg;  ///< N+1 variables; variable 0 is (t, τ̄, τ̲)
    int n_real;     ///< N

    explicit SeriesFrame(int n) : cfg(n + 1, 2), n_real(n) {}

    [[nodiscard]] int t_slot() const { return 0; }
    [[nodiscard]] int tau_over_bit() const { return cfg.phi_bit(0); }    // bit 0
    [[nodiscard]] int tau_under_bit() const { return cfg.theta_bit(0); }  // bit 1
    /// Frame variable index of real variable i (0-based).
    [[nodiscard]] int var(int i) const { return i + 1; }
};

/// @brief Drop all terms of t-degree above tmax.
template <class F>
[[nodiscard]] ExplicitPoly<F> truncate_t(const ExplicitPoly<F>& f, const SeriesFrame& fr,
                                         int tmax) {
    ExplicitPoly<F> out(f.config());
    for (const auto& [m, c] : f.terms())
        if (m.x_exp[static_cast<std::size_t>(fr.t_slot())] <= tmax) out.add_term(m, c);
    return out;
}

/// @brief u_i = t x_i + τ̄ φ_i + τ̲ θ_i for real variable i.
template <class F = Rat>
[[nodiscard]] ExplicitPoly<F> series_u(const SeriesFrame& fr, int i) {
    const VarConfig& cfg = fr.cfg;
    const int v = fr.var(i);
    ExplicitPoly<F> u = gmul(ExplicitPoly<F>::x(cfg, fr.t_slot()), ExplicitPoly<F>::x(cfg, v));
    u += gmul(ExplicitPoly<F>::generator(cfg, fr.tau_over_bit()),
              ExplicitPoly<F>::generator(cfg, cfg.phi_bit(v)));
    u += gmul(ExplicitPoly<F>::generator(cfg, fr.tau_under_bit()),
              ExplicitPoly<F>::generator(cfg, cfg.theta_bit(v)));
    return u;
}

/// @brief H(t,τ̄,τ̲) = Π_i 1/(1 − u_i), truncated at t-degree tmax.
template <class F = Rat>
[[nodiscard]] ExplicitPoly<F> series_H(const SeriesFrame& fr, int tmax) {
    ExplicitPoly<F> acc = ExplicitPoly<F>::constant(fr.cfg, F(1));
    for (int i = 0; i < fr.n_real; ++i) {
        const ExplicitPoly<F> u = series_u<F>(fr, i);
        ExplicitPoly<F> geo = ExplicitPoly<F>::constant(fr.cfg, F(1));
        ExplicitPoly<F> power = ExplicitPoly<F>::constant(fr.cfg, F(1));
        // u^k has t-degree ≥ k−2, so k ≤ tmax+2 suffices.
        for (int k = 1; k <= tmax + 2; ++k) {
            power = truncate_t(gmul(power, u), fr, tmax);
            geo += power;
        }
        acc = truncate_t(gmul(acc, geo), fr, tmax);
    }
    return acc;
}

/// @brief E(t,τ̄,τ̲) = Π_i (1 + u_i), truncated at t-degree tmax.
template <class F = Rat>
[[nodiscard]] ExplicitPoly<F> series_E(const SeriesFrame& fr, int tmax) {
    ExplicitPoly<F> acc = ExplicitPoly<F>::constant(fr.cfg, F(1));
    for (int i = 0; i < fr.n_real; ++i) {
        ExplicitPoly<F> factor = ExplicitPoly<F>::constant(fr.cfg, F(1)) + series_u<F>(fr, i);
        acc = truncate_t(gmul(acc, factor), fr, tmax);
    }
    return acc;
}

/// @brief P(t,τ̄,τ̲) = Σ_i u_i/(1 − u_i), truncated at t-degree tmax.
template <class F = Rat>
[[nodiscard]] ExplicitPoly<F> series_P(const SeriesFrame& fr, int tmax) {
    ExplicitPoly<F> acc(fr.cfg);
    for (int i = 0; i < fr.n_real; ++i) {
        const ExplicitPoly<F> u = series_u<F>(fr, i);
        ExplicitPoly<F> power = ExplicitPoly<F>::constant(fr.cfg, F(1));
        for (int k = 1; k <= tmax + 2; ++k) {
            power = truncate_t(gmul(power, u), fr, tmax);
            acc += power;
        }
    }
    return acc;
}

/// @brief Extract the coefficient of tⁿ·(τ pattern):  f = Σ tⁿ(A + τ̄B +
///        τ̲C + τ̄τ̲D); mark selects A/B/C/D (plain/over/under/biline).
///        Returned over the N-variable config, no sign or normalization
///        applied (D is returned as stored, i.e. +coefficient of τ̄τ̲ tⁿ).
template <class F>
[[nodiscard]] ExplicitPoly<F> series_component(const ExplicitPoly<F>& f, const SeriesFrame& fr,
                                               int n, Mark mark) {
    const std::uint64_t want =
        (phi_count(mark) ? 1ull << fr.tau_over_bit() : 0) |
        (theta_count(mark) ? 1ull << fr.tau_under_bit() : 0);
    VarConfig inner(fr.n_real, 2);
    ExplicitPoly<F> out(inner);
    for (const auto& [m, c] : f.terms()) {
        if (m.x_exp[static_cast<std::size_t>(fr.t_slot())] != n) continue;
        if ((m.fmask & 3ull) != want) continue;
        GMonomial im;
        std::copy(m.x_exp.begin() + 1, m.x_exp.end(), im.x_exp.begin());
        im.fmask = m.fmask >> 2;  // τ̄τ̲ sit at the lowest bits: prefix removal is sign-free
        out.add_term(im, c);
    }
    return out;
}

/// @brief Euler operator t∂_t + τ̄∂_τ̄ + τ̲∂_τ̲ (term-wise degree count).
template <class F>
[[nodiscard]] ExplicitPoly<F> series_euler(const ExplicitPoly<F>& f, const SeriesFrame& fr) {
    ExplicitPoly<F> out(f.config());
    for (const auto& [m, c] : f.terms()) {
        const int deg = m.x_exp[static_cast<std::size_t>(fr.t_slot())] +
                        static_cast<int>(m.fmask >> fr.tau_over_bit() & 1) +
                        static_cast<int>(m.fmask >> fr.tau_under_bit() & 1);
        out.add_term(m, c * F(deg));
    }
    return out;
}

/// @brief Substitute (t,τ̄,τ̲) → (−t,−τ̄,−τ̲).
template <class F>
[[nodiscard]] ExplicitPoly<F> series_negate_frame(const ExplicitPoly<F>& f,
                                                  const SeriesFrame& fr) {
    ExplicitPoly<F> out(f.config());
    for (const auto& [m, c] : f.terms()) {
        const int deg = m.x_exp[static_cast<std::size_t>(fr.t_slot())] +
                        static_cast<int>(m.fmask >> fr.tau_over_bit() & 1) +
                        static_cast<int>(m.fmask >> fr.tau_under_bit() & 1);
        out.add_term(m, (deg % 2) ? F(0) - c : c);
    }
    return out;
}

}  // namespace supersym
