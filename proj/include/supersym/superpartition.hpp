#pragma once
// ============================================================================
//  superpartition.hpp — N=2 superpartitions
//
//  A superpartition is a weakly ordered list of parts, each part a value
//  v ≥ 0 decorated by one of four marks:
//
//      plain   (no circle)          bosonic
//      over    ō  (phi circle)      fermionic
//      under   u̲  (theta circle)    fermionic
//      biline  b  (both circles)    bosonic (two fermions)
//
//  Canonical form: parts sorted by value descending, ties ordered
//  biline ≻ over ≻ under ≻ plain; plain zero parts are dropped, marked zero
//  parts are kept.  Over-marked values are pairwise distinct, as are
//  under-marked values; biline and plain values may repeat.
//
//  The sector of Λ is (n | m̄, m̲) with n the sum of values, m̄ the number
//  of phi circles (over + biline) and m̲ the number of theta circles
//  (under + biline).
//
//  The weight of a part is v, v+1/2, v+1/2, v+1 for plain/over/under/biline
//  (stored doubled so everything stays integral).  Sector elements carry a
//  natural partial order by prefix weight sums; the canonical total order
//  used for listings and matrices refines it: weight sequences compared
//  lexicographically (descending), ties broken by (value, mark rank)
//  lexicographically (descending).
// ============================================================================

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace supersym {

// ============================================================================
//  Parts and marks
// ============================================================================

/// Mark of a part.  The enum value doubles as the tie-break rank:
/// biline ≻ over ≻ under ≻ plain.
enum class Mark : std::uint8_t { Plain = 0, Under = 1, Over = 2, Biline = 3 };

/// @brief Number of phi circles carried by the mark (0 or 1).
[[nodiscard]] constexpr int phi_count(Mark m) {
    return (m == Mark::Over || m == Mark::Biline) ? 1 : 0;
}
/// @brief Number of theta circles carried by the mark (0 or 1).
[[nodiscard]] constexpr int theta_count(Mark m) {
    return (m == Mark::Under || m == Mark::Biline) ? 1 : 0;
}
/// @brief Total fermion count of the mark (0, 1 or 2).
[[nodiscard]] constexpr int fermion_count(Mark m) { return phi_count(m) + theta_count(m); }

/// @brief One-letter suffix used by the string grammar ("", "o", "u", "b").
[[nodiscard]] inline const char* mark_suffix(Mark m) {
    switch (m) {
        case Mark::Plain: return "";
        case Mark::Under: return "u";
        case Mark::Over: return "o";
        case Mark::Biline: return "b";
    }
    return "";
}

/// A single part: value plus mark.
struct Part {
    int v = 0;
    Mark m = Mark::Plain;

    friend bool operator==(const Part& a, const Part& b) { return a.v == b.v && a.m == b.m; }
    friend bool operator!=(const Part& a, const Part& b) { return !(a == b); }
};

/// @brief Doubled weight 2w(part): plain 2v, over/under 2v+1, biline 2v+2.
[[nodiscard]] constexpr int weight2(const Part& p) { return 2 * p.v + fermion_count(p.m); }

/// @brief Canonical part precedence: value descending, then mark rank
///        descending (biline ≻ over ≻ under ≻ plain).
[[nodiscard]] constexpr bool part_precedes(const Part& a, const Part& b) {
    if (a.v != b.v) return a.v > b.v;
    return static_cast<int>(a.m) > static_cast<int>(b.m);
}

// ============================================================================
//  Errors
// ============================================================================

/// Over-marked (or under-marked) values repeat.
struct DistinctnessViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A part insertion would not yield a valid superpartition.
struct OrderViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed textual input; the message names the offending token.
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ============================================================================
//  Sector
// ============================================================================

/// Degree data (n | m̄, m̲): bosonic degree and the two fermionic degrees.
struct Sector {
    int n = 0;   ///< sum of part values
    int mo = 0;  ///< m̄: number of phi circles
    int mu = 0;  ///< m̲: number of theta circles

    friend bool operator==(const Sector& a, const Sector& b) {
        return a.n == b.n && a.mo == b.mo && a.mu == b.mu;
    }
    friend bool operator!=(const Sector& a, const Sector& b) { return !(a == b); }
    friend bool operator<(const Sector& a, const Sector& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.mo != b.mo) return a.mo < b.mo;
        return a.mu < b.mu;
    }
    [[nodiscard]] std::string str() const {
        return "(" + std::to_string(n) + "|" + std::to_string(mo) + "," + std::to_string(mu) +
               ")";
    }
};

// ============================================================================
//  SuperPartition
// ============================================================================

class SuperPartition {
  public:
    SuperPartition() = default;

    /// @brief Canonicalize (sort, drop plain zeros) and validate a part list.
    /// @throws DistinctnessViolation when over or under values repeat.
    [[nodiscard]] static SuperPartition from_parts(std::vector<Part> parts) {
        for (const Part& p : parts) {
            if (p.v < 0) throw std::invalid_argument("SuperPartition: negative part value");
        }
        std::sort(parts.begin(), parts.end(), part_precedes);
        parts.erase(std::remove_if(parts.begin(), parts.end(),
                                   [](const Part& p) { return p.v == 0 && p.m == Mark::Plain; }),
                    parts.end());
        SuperPartition sp;
        sp.parts_ = std::move(parts);
        sp.check_distinctness();
        return sp;
    }

    [[nodiscard]] const std::vector<Part>& parts() const { return parts_; }
    [[nodiscard]] std::size_t length() const { return parts_.size(); }
    [[nodiscard]] bool empty() const { return parts_.empty(); }

    [[nodiscard]] Sector sector() const {
        Sector s;
        for (const Part& p : parts_) {
            s.n += p.v;
            s.mo += phi_count(p.m);
            s.mu += theta_count(p.m);
        }
        return s;
    }

    /// @brief Number of parts with the given mark.
    [[nodiscard]] int count_mark(Mark m) const {
        int c = 0;
        for (const Part& p : parts_)
            if (p.m == m) ++c;
        return c;
    }

    /// @brief Values of the parts carrying the given mark, descending.
    [[nodiscard]] std::vector<int> values_with_mark(Mark m) const {
        std::vector<int> v;
        for (const Part& p : parts_)
            if (p.m == m) v.push_back(p.v);
        return v;
    }

    friend bool operator==(const SuperPartition& a, const SuperPartition& b) {
        return a.parts_ == b.parts_;
    }
    friend bool operator!=(const SuperPartition& a, const SuperPartition& b) {
        return !(a == b);
    }

  private:
    void check_distinctness() const {
        for (std::size_t i = 1; i < parts_.size(); ++i) {
            const Part& a = parts_[i - 1];
            const Part& b = parts_[i];
            if (a.v == b.v && a.m == b.m &&
                (a.m == Mark::Over || a.m == Mark::Under)) {
                throw DistinctnessViolation("repeated " +
                                            std::string(a.m == Mark::Over ? "over" : "under") +
                                            "-marked value " + std::to_string(a.v));
            }
        }
    }

    std::vector<Part> parts_;  ///< canonical order, plain zeros removed
};

// ============================================================================
//  String grammar:  "[2b,1o,0u]", empty superpartition "[]"
// ============================================================================

[[nodiscard]] inline std::string to_string(const SuperPartition& sp) {
    std::string out = "[";
    for (std::size_t i = 0; i < sp.parts().size(); ++i) {
        if (i) out += ",";
        out += std::to_string(sp.parts()[i].v);
        out += mark_suffix(sp.parts()[i].m);
    }
    out += "]";
    return out;
}

/// @brief Parse the bracket grammar.  Input need not be in canonical order.
/// @throws ParseError naming the offending token; DistinctnessViolation on
///         invalid content.
[[nodiscard]] inline SuperPartition parse_spar(std::string_view s) {
    auto fail = [&](std::string_view token) -> void {
        throw ParseError("bad superpartition token '" + std::string(token) + "' in '" +
                         std::string(s) + "'");
    };
    std::string_view body = s;
    while (!body.empty() && (body.front() == ' ' || body.front() == '\t')) body.remove_prefix(1);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t')) body.remove_suffix(1);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') fail(body);
    body = body.substr(1, body.size() - 2);

    std::vector<Part> parts;
    std::size_t pos = 0;
    while (pos < body.size()) {
        while (pos < body.size() && body[pos] == ' ') ++pos;
        std::size_t end = body.find(',', pos);
        if (end == std::string_view::npos) end = body.size();
        std::string_view token = body.substr(pos, end - pos);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (token.empty()) fail("(empty)");

        std::size_t d = 0;
        while (d < token.size() && std::isdigit(static_cast<unsigned char>(token[d]))) ++d;
        if (d == 0) fail(token);
        Part p;
        p.v = std::stoi(std::string(token.substr(0, d)));
        std::string_view suffix = token.substr(d);
        if (suffix.empty())
            p.m = Mark::Plain;
        else if (suffix == "o")
            p.m = Mark::Over;
        else if (suffix == "u")
            p.m = Mark::Under;
        else if (suffix == "b")
            p.m = Mark::Biline;
        else
            fail(token);
        parts.push_back(p);
        pos = end + 1;
    }
    return SuperPartition::from_parts(std::move(parts));
}

// ============================================================================
//  Canonical total order
// ============================================================================

/// @brief Within-sector canonical precedence: weight sequences lexicographic
///        (descending), ties by (value, mark rank) lexicographic (descending).
///        Returns true when a is listed before b.
[[nodiscard]] inline bool sector_precedes(const SuperPartition& a, const SuperPartition& b) {
    const auto& pa = a.parts();
    const auto& pb = b.parts();
    const std::size_t len = std::max(pa.size(), pb.size());
    for (std::size_t i = 0; i < len; ++i) {
        const int wa = i < pa.size() ? weight2(pa[i]) : -1;
        const int wb = i < pb.size() ? weight2(pb[i]) : -1;
        if (wa != wb) return wa > wb;
    }
    for (std::size_t i = 0; i < std::min(pa.size(), pb.size()); ++i) {
        if (pa[i].v != pb[i].v) return pa[i].v > pb[i].v;
        if (pa[i].m != pb[i].m) return static_cast<int>(pa[i].m) > static_cast<int>(pb[i].m);
    }
    return false;
}

/// @brief Global precedence across sectors: sector (n, m̄, m̲) ascending,
///        then canonical within-sector order.  Strict weak order usable as a
///        map comparator.
struct SpLess {
    bool operator()(const SuperPartition& a, const SuperPartition& b) const {
        const Sector sa = a.sector();
        const Sector sb = b.sector();
        if (sa != sb) return sa < sb;
        return sector_precedes(a, b);
    }
};

// ============================================================================
//  Weight partial order
// ============================================================================

enum class WeightCmp { Greater, Less, EqualPrefixSums, Incomparable };

/// @brief Compare by prefix weight sums (the dominance-style partial order).
///        Distinct sectors are Incomparable; identical prefix sums (including
///        Λ vs Λ) give EqualPrefixSums.
[[nodiscard]] inline WeightCmp weight_compare(const SuperPartition& a, const SuperPartition& b) {
    if (a.sector() != b.sector()) return WeightCmp::Incomparable;
    const auto& pa = a.parts();
    const auto& pb = b.parts();
    const std::size_t len = std::max(pa.size(), pb.size());
    long sa = 0, sb = 0;
    bool ge = true, le = true;
    for (std::size_t i = 0; i < len; ++i) {
        if (i < pa.size()) sa += weight2(pa[i]);
        if (i < pb.size()) sb += weight2(pb[i]);
        if (sa < sb) ge = false;
        if (sa > sb) le = false;
    }
    if (ge && le) return WeightCmp::EqualPrefixSums;
    if (ge) return WeightCmp::Greater;
    if (le) return WeightCmp::Less;
    return WeightCmp::Incomparable;
}

// ============================================================================
//  Part-wise addition (the ∪ arithmetic behind monomial products)
// ============================================================================

/// Result of adding two parts: either a part or annihilation (a repeated
/// fermion on one cell).
struct AddPartsResult {
    bool annihilated = true;
    Part part{};
};

/// @brief Add two parts: values add, circles accumulate.  More than one phi
///        (or theta) circle on the result annihilates it.
[[nodiscard]] inline AddPartsResult add_parts(const Part& a, const Part& b) {
    const int phi = phi_count(a.m) + phi_count(b.m);
    const int theta = theta_count(a.m) + theta_count(b.m);
    if (phi > 1 || theta > 1) return {};
    static constexpr Mark kMark[2][2] = {{Mark::Plain, Mark::Under}, {Mark::Over, Mark::Biline}};
    return {false, Part{a.v + b.v, kMark[phi][theta]}};
}

/// @brief Part-wise sum of two superpartitions in canonical order, the
///        shorter padded with plain zeros.  Returns std::nullopt
///        (annihilation) when any cell annihilates or when the resulting
///        part list violates distinctness.
[[nodiscard]] inline std::optional<SuperPartition> add_superpartitions(const SuperPartition& a,
                                                                       const SuperPartition& b) {
    const std::size_t len = std::max(a.length(), b.length());
    std::vector<Part> parts;
    parts.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        const Part pa = i < a.length() ? a.parts()[i] : Part{};
        const Part pb = i < b.length() ? b.parts()[i] : Part{};
        const AddPartsResult r = add_parts(pa, pb);
        if (r.annihilated) return std::nullopt;
        parts.push_back(r.part);
    }
    try {
        return SuperPartition::from_parts(std::move(parts));
    } catch (const DistinctnessViolation&) {
        return std::nullopt;
    }
}

/// @brief Canonical form of Λ ∪ {p} (multiset insertion; the new part lands
///        rightmost among equal-weight entries once canonicalized).
/// @throws OrderViolation when the union is not a valid superpartition.
[[nodiscard]] inline SuperPartition insert_part(const SuperPartition& sp, const Part& p) {
    std::vector<Part> parts = sp.parts();
    parts.push_back(p);
    try {
        return SuperPartition::from_parts(std::move(parts));
    } catch (const DistinctnessViolation& e) {
        throw OrderViolation(std::string("insert_part: ") + e.what());
    }
}

// ============================================================================
//  Sector enumeration
// ============================================================================

namespace detail {

/// Non-increasing value lists of fixed size with sum ≤ budget (values ≤ cap).
inline void noninc_lists(int count, int cap, int budget, std::vector<int>& cur,
                         const std::function<void(const std::vector<int>&)>& emit) {
    if (count == 0) {
        emit(cur);
        return;
    }
    for (int v = std::min(cap, budget); v >= 0; --v) {
        cur.push_back(v);
        noninc_lists(count - 1, v, budget - v, cur, emit);
        cur.pop_back();
    }
}

/// Strictly decreasing value lists of fixed size with sum ≤ budget.
inline void strict_dec_lists(int count, int cap, int budget, std::vector<int>& cur,
                             const std::function<void(const std::vector<int>&)>& emit) {
    if (count == 0) {
        emit(cur);
        return;
    }
    // After the current part, count-1 further distinct values ≥ 0 follow, so
    // the smallest possible tail sum is 0+1+...+(count-2); prune on that.
    const int tail_min = (count - 1) * (count - 2) / 2;
    for (int v = std::min(cap, budget - tail_min); v >= count - 1; --v) {
        cur.push_back(v);
        strict_dec_lists(count - 1, v - 1, budget - v, cur, emit);
        cur.pop_back();
    }
}

/// Ordinary partitions of m into parts ≥ 1 (non-increasing).
inline void partitions_of(int m, int cap, std::vector<int>& cur,
                          const std::function<void(const std::vector<int>&)>& emit) {
    if (m == 0) {
        emit(cur);
        return;
    }
    for (int v = std::min(cap, m); v >= 1; --v) {
        cur.push_back(v);
        partitions_of(m - v, v, cur, emit);
        cur.pop_back();
    }
}

}  // namespace detail

/// @brief All superpartitions of sector (n | m̄, m̲) in canonical order.
[[nodiscard]] inline std::vector<SuperPartition> enumerate_sector(int n, int mo, int mu) {
    if (n < 0 || mo < 0 || mu < 0)
        throw std::invalid_argument("enumerate_sector: negative sector datum");
    std::vector<SuperPartition> out;
    for (int k = 0; k <= std::min(mo, mu); ++k) {
        std::vector<int> cur;
        detail::noninc_lists(k, n, n, cur, [&](const std::vector<int>& b) {
            int sb = 0;
            for (int v : b) sb += v;
            std::vector<int> cur2;
            detail::strict_dec_lists(mo - k, n, n - sb, cur2, [&](const std::vector<int>& o) {
                int so = 0;
                for (int v : o) so += v;
                std::vector<int> cur3;
                detail::strict_dec_lists(mu - k, n, n - sb - so, cur3,
                                         [&](const std::vector<int>& u) {
                    int su = 0;
                    for (int v : u) su += v;
                    std::vector<int> cur4;
                    detail::partitions_of(n - sb - so - su, n, cur4,
                                          [&](const std::vector<int>& pl) {
                        std::vector<Part> parts;
                        parts.reserve(b.size() + o.size() + u.size() + pl.size());
                        for (int v : b) parts.push_back({v, Mark::Biline});
                        for (int v : o) parts.push_back({v, Mark::Over});
                        for (int v : u) parts.push_back({v, Mark::Under});
                        for (int v : pl) parts.push_back({v, Mark::Plain});
                        out.push_back(SuperPartition::from_parts(std::move(parts)));
                    });
                });
            });
        });
    }
    std::sort(out.begin(), out.end(), sector_precedes);
    return out;
}

/// @overload
[[nodiscard]] inline std::vector<SuperPartition> enumerate_sector(const Sector& s) {
    return enumerate_sector(s.n, s.mo, s.mu);
}

// ============================================================================
//  Counting generating function
// ============================================================================

/// @brief Coefficient table counts[n][m̄][m̲] of the sector-counting series
///            Π_{j≥0} (1+ξq^j)(1+γq^j) / ((1−ξγq^j)(1−q^{j+1})),
///        truncated at the given maxima.  Independent of enumerate_sector,
///        so the two cross-check each other.
[[nodiscard]] inline std::vector<std::vector<std::vector<long long>>> count_sector_series(
    int nmax, int momax, int mumax) {
    if (nmax < 0 || momax < 0 || mumax < 0)
        throw std::invalid_argument("count_sector_series: negative bound");
    using Table = std::vector<std::vector<std::vector<long long>>>;
    auto make = [&](long long init) {
        return Table(nmax + 1,
                     std::vector<std::vector<long long>>(
                         momax + 1, std::vector<long long>(mumax + 1, init)));
    };
    Table acc = make(0);
    acc[0][0][0] = 1;

    // Multiply acc by a sparse factor given as {dq, dxi, dgamma, coeff} terms.
    struct Term {
        int dq, dxi, dgamma;
        long long c;
    };
    auto mul = [&](const std::vector<Term>& factor) {
        Table next = make(0);
        for (int q = 0; q <= nmax; ++q)
            for (int x = 0; x <= momax; ++x)
                for (int g = 0; g <= mumax; ++g) {
                    const long long v = acc[q][x][g];
                    if (v == 0) continue;
                    for (const Term& t : factor) {
                        const int q2 = q + t.dq, x2 = x + t.dxi, g2 = g + t.dgamma;
                        if (q2 > nmax || x2 > momax || g2 > mumax) continue;
                        next[q2][x2][g2] += v * t.c;
                    }
                }
        acc = std::move(next);
    };

    for (int j = 0; j <= nmax; ++j) {
        mul({{0, 0, 0, 1}, {j, 1, 0, 1}});  // (1 + ξ q^j)
        mul({{0, 0, 0, 1}, {j, 0, 1, 1}});  // (1 + γ q^j)
        {                                   // 1/(1 − ξγ q^j)
            std::vector<Term> f{{0, 0, 0, 1}};
            for (int k = 1; k <= std::min(momax, mumax); ++k) {
                if (j > 0 && j * k > nmax) break;
                f.push_back({j * k, k, k, 1});
            }
            mul(f);
        }
        {  // 1/(1 − q^{j+1})
            std::vector<Term> f{{0, 0, 0, 1}};
            for (int k = 1; (j + 1) * k <= nmax; ++k) f.push_back({(j + 1) * k, 0, 0, 1});
            mul(f);
        }
    }
    return acc;
}

}  // namespace supersym
