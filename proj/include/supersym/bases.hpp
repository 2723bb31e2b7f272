#pragma once
// ============================================================================
//  bases.hpp — abstract N=2 basis layer
//
//  The combinatorial (oracle-independent) route to every basis:
//    * monomial_product / mul_m   — the filled-diagram product algorithm,
//    * generator_in_m             — closed-form m-expansions of the p/h/e
//                                   generator families,
//    * multiplicative_expand      — f_Λ as the ordered product of generators,
//    * mul_p / power_product      — sign-exact products in the p basis,
//    * compact_in_p               — h/e/g generators as z,ζ-weighted p-sums,
//    * hep_recursions             — the h/e families from the p-family
//                                   recursions (a second independent route).
//
//  Norm data z_Λ, ζ_Λ, ω_Λ and the word-reversal sign live here too, since
//  compact_in_p is defined in terms of them.
// ============================================================================

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "supersym/abstract.hpp"
#include "supersym/qalpha.hpp"
#include "supersym/rational.hpp"
#include "supersym/superpartition.hpp"

namespace supersym {

// ============================================================================
//  Norm data
// ============================================================================

/// @brief z_Λ = Π_k k^{n(k)} n(k)!  over the plain parts of Λ.
[[nodiscard]] inline Rat z_of(const SuperPartition& sp) {
    Rat z(1);
    std::map<int, int> mult;
    for (const Part& p : sp.parts())
        if (p.m == Mark::Plain) ++mult[p.v];
    for (const auto& [k, c] : mult) {
        for (int i = 0; i < c; ++i) z *= Rat(k);
        z *= factorial(c);
    }
    return z;
}

/// @brief ζ_Λ = Π_k n(k)! / (k+1)^{n(k)}  over the biline parts of Λ
///        (zero values count).
[[nodiscard]] inline Rat zeta_of(const SuperPartition& sp) {
    Rat zeta(1);
    std::map<int, int> mult;
    for (const Part& p : sp.parts())
        if (p.m == Mark::Biline) ++mult[p.v];
    for (const auto& [k, c] : mult) {
        zeta *= factorial(c);
        for (int i = 0; i < c; ++i) zeta /= Rat(k + 1);
    }
    return zeta;
}

/// @brief ω_Λ = (−1)^{|Λ| − ℓ(Λ̿) − ℓ(Λ⁰)}; equivalently the product of the
///        per-generator signs p_n → (−1)^{n−1}, p̄_n, p̲_n → (−1)^n,
///        p̂_n → (−1)^{n−1}.
[[nodiscard]] inline int omega_sign(const SuperPartition& sp) {
    int expo = sp.sector().n - static_cast<int>(sp.count_mark(Mark::Biline)) -
               static_cast<int>(sp.count_mark(Mark::Plain));
    return parity_sign(expo);
}

/// @brief Sign relating the canonical-order product p_Λ to the same product
///        with every φ-type generator moved left of every θ-type one:
///        (−1)^{#{i<j : Λ_i is an under part, Λ_j is an over part}}.
///        Biline and plain generators commute and do not contribute.
[[nodiscard]] inline int grouped_p_sign(const SuperPartition& sp) {
    int inversions = 0;
    int unders_seen = 0;
    for (const Part& p : sp.parts()) {
        if (p.m == Mark::Under) ++unders_seen;
        if (p.m == Mark::Over) inversions += unders_seen;
    }
    return parity_sign(inversions);
}

/// @brief Word-reversal sign of p_Λ^⊤ = (−1)^{C(m̄+m̲, 2)}; constant on the
///        sector since every p_Λ there has m̄+m̲ fermions.
[[nodiscard]] inline int top_sign_of(const Sector& s) {
    const int k = s.mo + s.mu;
    return parity_sign(k * (k - 1) / 2);
}

// ============================================================================
//  Monomial product (filled diagrams)
// ============================================================================

/// One summand ε·N·m_Γ of a monomial product.
struct ProductTerm {
    SuperPartition gamma;
    long long mult = 1;  ///< N^Γ_{ΛΩ} ≥ 1
    int sign = 1;        ///< ε^Γ_{ΛΩ} = ±1
};

namespace detail {

/// Row of a filled diagram: box counts per source plus labeled circles.
/// Labels encode a_i as +i and b_j as −j (i, j ≥ 1); 0 means no circle.
struct FilledRow {
    int va = 0, vb = 0;
    int over = 0, under = 0;

    [[nodiscard]] int value() const { return va + vb; }
    [[nodiscard]] Mark mark() const {
        return over ? (under ? Mark::Biline : Mark::Over)
                    : (under ? Mark::Under : Mark::Plain);
    }
    [[nodiscard]] bool empty() const { return va == 0 && vb == 0 && !over && !under; }
    friend auto operator<=>(const FilledRow&, const FilledRow&) = default;
};

/// Parts-before order on rows with a deterministic tiebreak on the filling.
inline bool row_before(const FilledRow& x, const FilledRow& y) {
    const Part px{x.value(), x.mark()}, py{y.value(), y.mark()};
    if (part_precedes(px, py)) return true;
    if (part_precedes(py, px)) return false;
    return std::tie(x.va, x.over, x.under) < std::tie(y.va, y.over, y.under);
}

/// Circle ranks in the target sequence (a₁..a_k, b₁..b_l).
inline int label_rank(int label, int total_a) {
    return label > 0 ? label : total_a - label;
}

}  // namespace detail

/// @brief Expand m_Λ · m_Ω = Σ ε^Γ N^Γ m_Γ with the filled-diagram rules:
///        pad both to ℓ(Λ)+ℓ(Ω); label Λ's circles a₁,a₂,… top-down (a
///        biline yields over- then under-circle) and Ω's b₁,b₂,…; add every
///        distinct row-arrangement of the padded Ω to the fixed Λ, dropping
///        diagrams with doubled circles or invalid part multisets; sort rows
///        canonically and deduplicate; per distinct diagram, N counts the
///        filling-distinguishable row permutations within equal parts and ε
///        is the inversion parity of the circle-label read-off.
///
///        Biline circle pairs are unlabeled: two operand rows with the same
///        biline part are indistinguishable fillings.  The labeled counting
///        below sees them as distinct, inflating every diagram's weight by
///        the same factor Π (biline-value multiplicity)! per operand, with
///        no sign effect (relabeling moves circle pairs, which is even), so
///        the inflation is divided back out of the accumulated coefficients.
[[nodiscard]] inline std::vector<ProductTerm> monomial_product(const SuperPartition& la,
                                                               const SuperPartition& om) {
    using detail::FilledRow;
    const std::size_t L = la.length() + om.length();

    const auto fill = [&](const SuperPartition& sp, bool is_a) {
        std::vector<FilledRow> rows;
        rows.reserve(L);
        int next = 1;
        for (const Part& p : sp.parts()) {
            FilledRow r;
            (is_a ? r.va : r.vb) = p.v;
            if (phi_count(p.m)) r.over = is_a ? next : -next, ++next;
            if (theta_count(p.m)) r.under = is_a ? next : -next, ++next;
            rows.push_back(r);
        }
        rows.resize(L);  // ∅ rows
        return rows;
    };
    const std::vector<FilledRow> arows = fill(la, true);
    std::vector<FilledRow> brows = fill(om, false);
    const int total_a =
        static_cast<int>(la.count_mark(Mark::Over) + la.count_mark(Mark::Under) +
                         2 * la.count_mark(Mark::Biline));

    std::sort(brows.begin(), brows.end());
    std::map<std::vector<FilledRow>, std::pair<SuperPartition, long long>> diagrams;
    do {
        // Row-wise addition; doubled circles annihilate the diagram.
        std::vector<FilledRow> rows(L);
        bool alive = true;
        for (std::size_t i = 0; i < L && alive; ++i) {
            const FilledRow &x = arows[i], &y = brows[i];
            if ((x.over && y.over) || (x.under && y.under)) {
                alive = false;
                break;
            }
            rows[i] = FilledRow{x.va, y.vb, x.over | y.over, x.under | y.under};
        }
        if (!alive) continue;
        std::sort(rows.begin(), rows.end(), detail::row_before);
        while (!rows.empty() && rows.back().empty()) rows.pop_back();
        if (diagrams.contains(rows)) continue;

        // Part multiset must form a valid superpartition.
        std::vector<Part> parts;
        parts.reserve(rows.size());
        for (const FilledRow& r : rows) parts.push_back(Part{r.value(), r.mark()});
        SuperPartition gamma;
        try {
            gamma = SuperPartition::from_parts(std::move(parts));
        } catch (const DistinctnessViolation&) {
            continue;
        }

        // ε: inversions of the circle read-off against (a₁..a_k, b₁..b_l).
        std::vector<int> seq;
        for (const FilledRow& r : rows) {
            if (r.over) seq.push_back(detail::label_rank(r.over, total_a));
            if (r.under) seq.push_back(detail::label_rank(r.under, total_a));
        }
        int inversions = 0;
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = i + 1; j < seq.size(); ++j)
                if (seq[i] > seq[j]) ++inversions;

        // N: per equal-part group, (group size)! / Π (identical-row count)!.
        Rat n_ways(1);
        std::size_t g0 = 0;
        while (g0 < rows.size()) {
            std::size_t g1 = g0 + 1;
            while (g1 < rows.size() && rows[g1].value() == rows[g0].value() &&
                   rows[g1].mark() == rows[g0].mark())
                ++g1;
            n_ways *= factorial(static_cast<int>(g1 - g0));
            std::size_t r0 = g0;
            while (r0 < g1) {
                std::size_t r1 = r0 + 1;
                while (r1 < g1 && rows[r1] == rows[r0]) ++r1;
                n_ways /= factorial(static_cast<int>(r1 - r0));
                r0 = r1;
            }
            g0 = g1;
        }
        diagrams.emplace(std::move(rows),
                         std::make_pair(std::move(gamma),
                                        parity_sign(inversions) * n_ways.get_num().get_si()));
    } while (std::next_permutation(brows.begin(), brows.end()));

    // Accumulate per superpartition (distinct diagrams may share a Γ), then
    // remove the uniform biline-relabeling inflation.
    const auto biline_aut = [](const SuperPartition& sp) {
        long long aut = 1;
        int run = 0, prev = -1;
        for (const Part& p : sp.parts()) {
            if (p.m != Mark::Biline) continue;
            run = (p.v == prev) ? run + 1 : 1;
            prev = p.v;
            aut *= run;
        }
        return aut;
    };
    const long long aut = biline_aut(la) * biline_aut(om);
    std::map<SuperPartition, long long, SpLess> coeff;
    for (const auto& [rows, gc] : diagrams) coeff[gc.first] += gc.second;
    std::vector<ProductTerm> out;
    for (const auto& [gamma, c_raw] : coeff) {
        if (c_raw == 0) continue;
        if (c_raw % aut != 0)
            throw std::logic_error("monomial_product: non-uniform diagram multiplicity");
        const long long c = c_raw / aut;
        out.push_back(ProductTerm{gamma, c < 0 ? -c : c, c < 0 ? -1 : 1});
    }
    return out;
}

namespace detail {

/// Memoized monomial products (the expansions recur heavily).
[[nodiscard]] inline const std::vector<ProductTerm>& monomial_product_cached(
    const SuperPartition& la, const SuperPartition& om) {
    static std::map<std::pair<std::string, std::string>, std::vector<ProductTerm>> cache;
    const auto key = std::make_pair(to_string(la), to_string(om));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, monomial_product(la, om)).first;
    return it->second;
}

}  // namespace detail

/// @brief Bilinear extension of monomial_product to m-basis polynomials.
template <class F>
[[nodiscard]] AbstractPoly<F> mul_m(const AbstractPoly<F>& f, const AbstractPoly<F>& g) {
    if (f.basis() != BasisId::m || g.basis() != BasisId::m)
        throw BasisMismatch("mul_m: both operands must be in the m basis");
    AbstractPoly<F> out(BasisId::m);
    for (const auto& [la, cf] : f.terms())
        for (const auto& [om, cg] : g.terms())
            for (const ProductTerm& t : detail::monomial_product_cached(la, om))
                out.add_term(t.gamma, cf * cg * F(Rat(static_cast<long>(t.sign * t.mult))));
    return out;
}

// ============================================================================
//  Table 1 generators in the m basis
// ============================================================================

/// @brief Closed-form m-expansion of the degree-n generator of family
///        p/h/e with the given mark (Table 1 column "m_Λ expression"):
///        p-family members are single monomials; h̄_n carries (|Λ̄₁|+1),
///        h̲_n carries (|Λ̲₁|+1), h̲̄_n carries (|Λ̿₁|+2)(|Λ̿₁|+1) on
///        biline-bearing Λ and ±(|Λ̄₁|+1)(|Λ̲₁|+1) otherwise, positive iff
///        |Λ̄₁| ≥ |Λ̲₁|; e-family members are single monomials (1ⁿ) with
///        marked zero parts appended.
[[nodiscard]] inline const AbstractPoly<Rat>& generator_in_m(BasisId family, Mark mark, int n) {
    if (n < 0) throw std::invalid_argument("generator_in_m: negative degree");
    static std::map<std::tuple<BasisId, Mark, int>, AbstractPoly<Rat>> cache;
    const auto key = std::make_tuple(family, mark, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    AbstractPoly<Rat> out(BasisId::m);
    switch (family) {
        case BasisId::p: {
            if (mark == Mark::Plain && n == 0)
                throw std::invalid_argument("generator_in_m: p_0 is not a generator");
            out.add_term(SuperPartition::from_parts({Part{n, mark}}), Rat(1));
            break;
        }
        case BasisId::h: {
            switch (mark) {
                case Mark::Plain:
                    for (const SuperPartition& sp : enumerate_sector(n, 0, 0))
                        out.add_term(sp, Rat(1));
                    break;
                case Mark::Over:
                case Mark::Under: {
                    Sector s{n, phi_count(mark), theta_count(mark)};
                    for (const SuperPartition& sp : enumerate_sector(s)) {
                        const int v = sp.values_with_mark(mark).front();
                        out.add_term(sp, Rat(v + 1));
                    }
                    break;
                }
                case Mark::Biline: {
                    for (const SuperPartition& sp : enumerate_sector(n, 1, 1)) {
                        if (sp.count_mark(Mark::Biline)) {
                            const int v = sp.values_with_mark(Mark::Biline).front();
                            out.add_term(sp, Rat(v + 2) * Rat(v + 1));
                        } else {
                            const int vo = sp.values_with_mark(Mark::Over).front();
                            const int vu = sp.values_with_mark(Mark::Under).front();
                            out.add_term(sp, Rat(vo >= vu ? 1 : -1) * Rat(vo + 1) * Rat(vu + 1));
                        }
                    }
                    break;
                }
            }
            break;
        }
        case BasisId::e: {
            std::vector<Part> parts(static_cast<std::size_t>(n), Part{1, Mark::Plain});
            if (phi_count(mark)) parts.push_back(Part{0, Mark::Over});
            if (theta_count(mark)) parts.push_back(Part{0, Mark::Under});
            out.add_term(SuperPartition::from_parts(std::move(parts)), Rat(1));
            break;
        }
        default:
            throw std::invalid_argument("generator_in_m: family must be p, h or e");
    }
    return cache.emplace(key, std::move(out)).first->second;
}

// ============================================================================
//  Products and expansions in the p basis
// ============================================================================

/// @brief p_Λ · p_Ω as a single signed power sum: nullopt when an odd
///        (single-circle) generator repeats; otherwise the merged
///        superpartition with the inversion sign of interleaving the two
///        odd-generator subsequences.
[[nodiscard]] inline std::optional<std::pair<SuperPartition, int>> power_product(
    const SuperPartition& la, const SuperPartition& om) {
    const auto odd = [](const Part& p) { return p.m == Mark::Over || p.m == Mark::Under; };
    std::vector<Part> merged;
    std::vector<Part> odds;
    for (const Part& p : la.parts()) {
        merged.push_back(p);
        if (odd(p)) odds.push_back(p);
    }
    for (const Part& p : om.parts()) {
        merged.push_back(p);
        if (odd(p)) odds.push_back(p);
    }
    for (std::size_t i = 0; i < odds.size(); ++i)
        for (std::size_t j = i + 1; j < odds.size(); ++j)
            if (odds[i] == odds[j]) return std::nullopt;  // repeated odd generator

    // Sign: inversions of the odd subsequence relative to canonical order.
    int inversions = 0;
    for (std::size_t i = 0; i < odds.size(); ++i)
        for (std::size_t j = i + 1; j < odds.size(); ++j)
            if (part_precedes(odds[j], odds[i])) ++inversions;
    SuperPartition gamma;
    try {
        gamma = SuperPartition::from_parts(std::move(merged));
    } catch (const DistinctnessViolation&) {
        return std::nullopt;  // unreachable: repeats were filtered above
    }
    return std::make_pair(std::move(gamma), parity_sign(inversions));
}

/// @brief Bilinear extension of power_product to p-basis polynomials.
template <class F>
[[nodiscard]] AbstractPoly<F> mul_p(const AbstractPoly<F>& f, const AbstractPoly<F>& g) {
    if (f.basis() != BasisId::p || g.basis() != BasisId::p)
        throw BasisMismatch("mul_p: both operands must be in the p basis");
    AbstractPoly<F> out(BasisId::p);
    for (const auto& [la, cf] : f.terms())
        for (const auto& [om, cg] : g.terms())
            if (auto t = power_product(la, om))
                out.add_term(t->first, cf * cg * F(t->second));
    return out;
}

/// @brief f_Λ = f̃_{Λ₁} f̃_{Λ₂} ⋯ f̃_{Λ_ℓ} in the m basis, multiplying the
///        generator expansions left to right in canonical part order
///        (the order matters for odd generators).
[[nodiscard]] inline AbstractPoly<Rat> multiplicative_expand(BasisId family,
                                                             const SuperPartition& sp) {
    static std::map<std::pair<BasisId, std::string>, AbstractPoly<Rat>> cache;
    const auto key = std::make_pair(family, to_string(sp));
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    AbstractPoly<Rat> out = AbstractPoly<Rat>::unit(BasisId::m, SuperPartition{}, Rat(1));
    for (const Part& p : sp.parts()) out = mul_m(out, generator_in_m(family, p.m, p.v));
    return cache.emplace(key, std::move(out)).first->second;
}

// ============================================================================
//  Compact p-basis expansions (and the g family)
// ============================================================================

/// @brief Compact p-expansion of the degree-n generator with the given
///        mark: Σ_Λ z_Λ⁻¹ζ_Λ⁻¹ p_Λ over the sector (n | φ-count, θ-count),
///        with the extra factor ω_Λ for the e family and α^{−ℓ(Λ)} for the
///        g family (alpha is ignored for h and e).
///
///        The uniform coefficients apply to the product taken with the
///        φ-type generator left of the θ-type one; converting to the
///        canonical-order product p_Λ contributes grouped_p_sign(Λ), which
///        is −1 exactly when the separate under part precedes the over part.
template <class F = Rat>
[[nodiscard]] AbstractPoly<F> compact_in_p(BasisId family, Mark mark, int n,
                                           const F& alpha = F(1)) {
    if (n < 0) throw std::invalid_argument("compact_in_p: negative degree");
    if (family != BasisId::h && family != BasisId::e && family != BasisId::g)
        throw std::invalid_argument("compact_in_p: family must be h, e or g_alpha");
    AbstractPoly<F> out(BasisId::p);
    const Sector s{n, phi_count(mark), theta_count(mark)};
    for (const SuperPartition& sp : enumerate_sector(s)) {
        F c = F(Rat(grouped_p_sign(sp)) / (z_of(sp) * zeta_of(sp)));
        if (family == BasisId::e) c = c * F(omega_sign(sp));
        if (family == BasisId::g) {
            for (std::size_t i = 0; i < sp.length(); ++i) c = c / alpha;
        }
        out.add_term(sp, c);
    }
    return out;
}

// ============================================================================
//  Table 2 recursions
// ============================================================================

/// The four generator sequences of one multiplicative family in the p basis.
struct GeneratorTable {
    std::vector<AbstractPoly<Rat>> plain, over, under, biline;  // index = degree n

    [[nodiscard]] const AbstractPoly<Rat>& get(Mark mark, int n) const {
        switch (mark) {
            case Mark::Plain: return plain[static_cast<std::size_t>(n)];
            case Mark::Over: return over[static_cast<std::size_t>(n)];
            case Mark::Under: return under[static_cast<std::size_t>(n)];
            case Mark::Biline: return biline[static_cast<std::size_t>(n)];
        }
        throw std::invalid_argument("GeneratorTable::get: bad mark");
    }
};

/// @brief Build (f_n, f̄_n, f̲_n, f̲̄_n) for family h or e in the p basis
///        from the Table-2 recursions B-1..B-3 / C-1..C-3, e.g.
///          n h_n = Σ_r p_r h_{n−r},
///          (n+1) h̄_n = Σ_r (p_r h̄_{n−r} + (r+1) p̄_r h_{n−r}),
///          (n+2) h̲̄_n = Σ_r (p_r h̲̄_{n−r} + (r+1)(p̄_r h̲_{n−r} +
///                        h̄_{n−r} p̲_r) + (r+2)(r+1) p̂_r h_{n−r}),
///        with e carrying the alternating sign (−1)^{r+1} and a minus on
///        the one-circle cross terms.  Operand order is as written: the
///        recursions multiply odd quantities.
[[nodiscard]] inline GeneratorTable hep_recursions(BasisId family, int n_max) {
    if (family != BasisId::h && family != BasisId::e)
        throw std::invalid_argument("hep_recursions: family must be h or e");
    if (n_max < 0) throw std::invalid_argument("hep_recursions: negative bound");
    const bool is_e = (family == BasisId::e);

    using Poly = AbstractPoly<Rat>;
    const auto punit = [](Mark mark, int n) {
        return Poly::unit(BasisId::p, SuperPartition::from_parts({Part{n, mark}}), Rat(1));
    };
    const auto sgn = [&](int r) { return is_e ? Rat(parity_sign(r + 1)) : Rat(1); };

    GeneratorTable t;
    t.plain.push_back(Poly::unit(BasisId::p, SuperPartition{}, Rat(1)));  // f_0 = 1
    for (int n = 1; n <= n_max; ++n) {
        Poly acc(BasisId::p);
        for (int r = 1; r <= n; ++r)
            acc += mul_p(punit(Mark::Plain, r), t.plain[static_cast<std::size_t>(n - r)]) *
                   sgn(r);
        t.plain.push_back(acc * (Rat(1) / Rat(n)));
    }
    for (int n = 0; n <= n_max; ++n) {  // one-circle rows (B-2 / C-2 and mirror)
        for (Mark mark : {Mark::Over, Mark::Under}) {
            Poly acc(BasisId::p);
            for (int r = 0; r <= n; ++r) {
                const Rat sg = sgn(r);
                auto& marked = (mark == Mark::Over) ? t.over : t.under;
                if (r >= 1)
                    acc += mul_p(punit(Mark::Plain, r), marked[static_cast<std::size_t>(n - r)]) *
                           sg;
                const Rat circ = (is_e ? Rat(-1) : Rat(1)) * Rat(r + 1) * sg;
                acc += mul_p(punit(mark, r), t.plain[static_cast<std::size_t>(n - r)]) * circ;
            }
            auto& marked = (mark == Mark::Over) ? t.over : t.under;
            marked.push_back(acc * (Rat(1) / Rat(n + 1)));
        }
    }
    for (int n = 0; n <= n_max; ++n) {  // two-circle row (B-3 / C-3)
        Poly acc(BasisId::p);
        for (int r = 0; r <= n; ++r) {
            const Rat sg = sgn(r);
            const Rat one = (is_e ? Rat(-1) : Rat(1)) * Rat(r + 1) * sg;
            if (r >= 1)
                acc += mul_p(punit(Mark::Plain, r), t.biline[static_cast<std::size_t>(n - r)]) *
                       sg;
            acc += mul_p(punit(Mark::Over, r), t.under[static_cast<std::size_t>(n - r)]) * one;
            acc += mul_p(t.over[static_cast<std::size_t>(n - r)], punit(Mark::Under, r)) * one;
            acc += mul_p(punit(Mark::Biline, r), t.plain[static_cast<std::size_t>(n - r)]) *
                   (Rat(r + 2) * Rat(r + 1) * sg);
        }
        t.biline.push_back(acc * (Rat(1) / Rat(n + 2)));
    }
    return t;
}

}  // namespace supersym
