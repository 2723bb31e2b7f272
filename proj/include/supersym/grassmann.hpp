#pragma once
// ============================================================================
//  grassmann.hpp — finite-N exterior-algebra engine
//
//  Explicit polynomials in N commuting variables x_1..x_N, each variable
//  carrying n_types anticommuting companions.  For the N=2 theory
//  (n_types = 2) the companions of x_i are (φ_i, θ_i); for the generic-N
//  theory they are θ_i^(N), …, θ_i^(1) (type index descending).
//
//  A Grassmann word is stored as a bit mask over a single generator pool in
//  canonical ascending-bit order; the bit of the type-t companion of
//  variable i (0-based) is
//
//      bit(i, t) = n_types·i + (n_types − t),
//
//  so that the canonical word order is
//
//      φ_1 θ_1 φ_2 θ_2 …            (n_types = 2)
//      θ_1^(N)…θ_1^(1) θ_2^(N) …    (general),
//
//  matching the ordered products [φ;θ]_Λ and θ_i^T used by the monomial
//  definitions.  Every sign in the library is a transposition count relative
//  to this order.
// ============================================================================

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace supersym {

/// Two explicit polynomials over different variable configurations were mixed.
struct ConfigMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Hard cap on commuting variables per VarConfig.  Monomial keys store their
/// exponents inline at this capacity; the shared 64-bit fermion pool already
/// limits any configuration with fermionic companions to at most 64/n_types
/// variables, so 32 covers every usable shape with n_types >= 2.
inline constexpr int kMaxVars = 32;

// ============================================================================
//  VarConfig
// ============================================================================

/// Shape of the explicit alphabet: N commuting variables, each with
/// `n_types` anticommuting companions.
struct VarConfig {
    int n_vars = 1;
    int n_types = 2;

    VarConfig() = default;
    VarConfig(int vars, int types = 2) : n_vars(vars), n_types(types) {
        if (n_vars < 1) throw std::invalid_argument("VarConfig: n_vars must be >= 1");
        if (n_vars > kMaxVars)
            throw std::invalid_argument("VarConfig: more than kMaxVars variables");
        if (n_types < 0) throw std::invalid_argument("VarConfig: negative n_types");
        if (n_vars * n_types > 64)
            throw std::invalid_argument("VarConfig: more than 64 fermionic generators");
    }

    /// Generator bit of the type-t companion of variable i (i 0-based,
    /// t in 1..n_types).  Lower type index = later canonical position.
    [[nodiscard]] int bit(int i, int t) const { return n_types * i + (n_types - t); }
    /// For n_types = 2: φ_i := type 2 (even offset), θ_i := type 1.
    [[nodiscard]] int phi_bit(int i) const { return bit(i, 2); }
    [[nodiscard]] int theta_bit(int i) const { return bit(i, 1); }

    friend bool operator==(const VarConfig& a, const VarConfig& b) {
        return a.n_vars == b.n_vars && a.n_types == b.n_types;
    }
    friend bool operator!=(const VarConfig& a, const VarConfig& b) { return !(a == b); }
};

// ============================================================================
//  GMonomial
// ============================================================================

/// One explicit monomial: x-exponents plus the fermionic word's bit mask.
/// For n_types = 2 the mask splits into the phi/theta views via
/// phi_mask()/theta_mask().
///
/// Exponents live in a fixed inline array (capacity kMaxVars, entries past
/// the configuration's n_vars stay zero) so map keys are flat 40-byte values
/// and comparisons compile to memcmp.  The 64-bit fermion pool caps useful
/// variable counts in the same range, so the fixed bound costs nothing.
struct GMonomial {
    std::array<std::uint8_t, kMaxVars> x_exp{};
    std::uint64_t fmask = 0;

    [[nodiscard]] int x_degree() const {
        int d = 0;
        for (auto e : x_exp) d += e;
        return d;
    }
    [[nodiscard]] int fermion_count() const { return std::popcount(fmask); }

    /// N-bit set of variables whose φ (type 2) companion is present.
    [[nodiscard]] std::uint64_t phi_mask(const VarConfig& cfg) const {
        std::uint64_t m = 0;
        for (int i = 0; i < cfg.n_vars; ++i)
            if (fmask >> cfg.phi_bit(i) & 1) m |= 1ull << i;
        return m;
    }
    /// N-bit set of variables whose θ (type 1) companion is present.
    [[nodiscard]] std::uint64_t theta_mask(const VarConfig& cfg) const {
        std::uint64_t m = 0;
        for (int i = 0; i < cfg.n_vars; ++i)
            if (fmask >> cfg.theta_bit(i) & 1) m |= 1ull << i;
        return m;
    }

    friend bool operator==(const GMonomial& a, const GMonomial& b) {
        return a.fmask == b.fmask &&
               std::memcmp(a.x_exp.data(), b.x_exp.data(), kMaxVars) == 0;
    }
    friend bool operator<(const GMonomial& a, const GMonomial& b) {
        if (a.fmask != b.fmask) return a.fmask < b.fmask;
        return std::memcmp(a.x_exp.data(), b.x_exp.data(), kMaxVars) < 0;
    }
};

namespace detail {

/// Sign of concatenating two ascending Grassmann words (0 when they share a
/// generator): parity of the transpositions interleaving word(a)·word(b)
/// into one ascending word.
[[nodiscard]] inline int merge_sign(std::uint64_t a, std::uint64_t b) {
    if (a & b) return 0;
    int inversions = 0;
    std::uint64_t bb = b;
    while (bb) {
        const int g = std::countr_zero(bb);
        bb &= bb - 1;
        // generators of a strictly above g must jump over it
        inversions += std::popcount(g >= 63 ? std::uint64_t{0} : a >> (g + 1));
    }
    return (inversions & 1) ? -1 : 1;
}

/// Sign of prepending generator g to the ascending word `mask`
/// (g must not be present): g moves right past all smaller generators.
[[nodiscard]] inline int left_insert_sign(std::uint64_t mask, int g) {
    const std::uint64_t below = mask & ((1ull << g) - 1);
    return (std::popcount(below) & 1) ? -1 : 1;
}

/// Relabel the generators of an ascending word by `perm` (a bijection on bit
/// indices) and re-sort: returns the new mask and the sorting parity.
[[nodiscard]] inline std::pair<std::uint64_t, int> relabel_word(std::uint64_t mask,
                                                                const std::vector<int>& perm) {
    std::vector<int> seq;
    std::uint64_t m = mask;
    while (m) {
        const int g = std::countr_zero(m);
        m &= m - 1;
        seq.push_back(perm[static_cast<std::size_t>(g)]);
    }
    int inv = 0;
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        out |= 1ull << seq[i];
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) ++inv;
    }
    return {out, (inv & 1) ? -1 : 1};
}

}  // namespace detail

// ============================================================================
//  ExplicitPoly
// ============================================================================

/// @brief Explicit polynomial over a VarConfig with exact coefficients.
///        No zero coefficients are stored; term order is deterministic.
template <class F>
class ExplicitPoly {
  public:
    using TermMap = std::map<GMonomial, F>;

    ExplicitPoly() = default;
    explicit ExplicitPoly(const VarConfig& cfg) : cfg_(cfg) {}

    /// The constant c.
    [[nodiscard]] static ExplicitPoly constant(const VarConfig& cfg, const F& c) {
        ExplicitPoly p(cfg);
        p.add_term(GMonomial{}, c);
        return p;
    }
    /// The variable x_i (0-based).
    [[nodiscard]] static ExplicitPoly x(const VarConfig& cfg, int i, int power = 1) {
        ExplicitPoly p(cfg);
        GMonomial m;
        m.x_exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(power);
        p.add_term(m, F(1));
        return p;
    }
    /// A single fermionic generator by bit index.
    [[nodiscard]] static ExplicitPoly generator(const VarConfig& cfg, int bit) {
        ExplicitPoly p(cfg);
        p.add_term(GMonomial{{}, 1ull << bit}, F(1));
        return p;
    }

    [[nodiscard]] const VarConfig& config() const { return cfg_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    [[nodiscard]] F coeff(const GMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? F(0) : it->second;
    }

    void add_term(const GMonomial& m, const F& c) {
        if (c == F(0)) return;
        // lower_bound + hinted emplace: no node allocation when the
        // monomial is already present (the common case in big products).
        auto it = terms_.lower_bound(m);
        if (it == terms_.end() || it->first != m) {
            terms_.emplace_hint(it, m, c);
        } else {
            it->second += c;
            if (it->second == F(0)) terms_.erase(it);
        }
    }

    ExplicitPoly& operator+=(const ExplicitPoly& o) {
        require_same_config(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    ExplicitPoly& operator-=(const ExplicitPoly& o) {
        require_same_config(o);
        for (const auto& [m, c] : o.terms_) add_term(m, F(0) - c);
        return *this;
    }
    ExplicitPoly& operator*=(const F& s) {
        if (s == F(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend ExplicitPoly operator+(ExplicitPoly a, const ExplicitPoly& b) { return a += b; }
    friend ExplicitPoly operator-(ExplicitPoly a, const ExplicitPoly& b) { return a -= b; }
    friend ExplicitPoly operator*(ExplicitPoly a, const F& s) { return a *= s; }

    friend bool operator==(const ExplicitPoly& a, const ExplicitPoly& b) {
        return a.cfg_ == b.cfg_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const ExplicitPoly& a, const ExplicitPoly& b) { return !(a == b); }

  private:
    void require_same_config(const ExplicitPoly& o) const {
        if (cfg_ != o.cfg_)
            throw ConfigMismatch("ExplicitPoly: operands over different variable configs");
    }

    VarConfig cfg_;
    TermMap terms_;
};

// ============================================================================
//  Core operations
// ============================================================================

namespace detail {

[[nodiscard]] inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

/// Scratch open-addressing table used by gmul to fold one group's terms as
/// they are produced.  Keys are the exponent array viewed as little-endian
/// words.  Arithmetic coefficients live inside the slot (one cache touch per
/// fold); other coefficient types live in a side vector so the slots stay
/// trivially copyable.  The table is reused across groups (reset walks only
/// the occupied slots) and stays cache-resident, which is what makes folding
/// millions of raw term products affordable.
template <class F>
class ProductAccumulator {
    static constexpr bool kInlineCoeff = std::is_arithmetic_v<F>;

  public:
    void begin() {
        if (slots_.empty()) slots_.resize(256);
        for (const std::uint32_t pos : used_) slots_[pos].idx = kEmpty;
        used_.clear();
        vals_.clear();
        n_pending_ = 0;
    }

    /// Stage one raw term.  Records are hashed and their slot line prefetched
    /// immediately, then probed a batch at a time, so the table misses of
    /// consecutive records overlap instead of serializing.
    void add(const std::uint64_t* w, int n_words, F&& c) {
        Pending& p = pending_[static_cast<std::size_t>(n_pending_++)];
        for (int j = 0; j < n_words; ++j) p.w[static_cast<std::size_t>(j)] = w[j];
        p.h = hash(w, n_words);
        p.c = std::move(c);
        __builtin_prefetch(&slots_[p.h & (slots_.size() - 1)]);
        if (n_pending_ == kBatch) drain(n_words);
    }

    /// Hand over (key words, coefficient) in byte-lexicographic key order —
    /// the monomial order for keys sharing one fermion word.
    template <class Sink>
    void flush(int n_words, Sink&& sink) {
        drain(n_words);
        const std::size_t key_bytes = sizeof(std::uint64_t) * static_cast<std::size_t>(n_words);
        std::sort(used_.begin(), used_.end(), [&](std::uint32_t p, std::uint32_t q) {
            return std::memcmp(slots_[p].w.data(), slots_[q].w.data(), key_bytes) < 0;
        });
        for (const std::uint32_t pos : used_) {
            Slot& s = slots_[pos];
            if constexpr (kInlineCoeff) {
                sink(s.w.data(), std::move(s.c));
            } else {
                sink(s.w.data(), std::move(vals_[s.idx]));
            }
        }
    }

  private:
    static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;
    struct SlotSide {  // key + index into the coefficient vector
        std::array<std::uint64_t, (kMaxVars + 7) / 8> w;
        std::uint32_t idx = kEmpty;
    };
    struct SlotInline {  // key + embedded coefficient; idx doubles as used flag
        std::array<std::uint64_t, (kMaxVars + 7) / 8> w;
        F c;
        std::uint32_t idx = kEmpty;
    };
    using Slot = std::conditional_t<kInlineCoeff, SlotInline, SlotSide>;

    [[nodiscard]] static std::uint64_t hash(const std::uint64_t* w, int n_words) {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (int j = 0; j < n_words; ++j) h = mix64(h ^ w[j]);
        return h;
    }
    [[nodiscard]] static bool equal(const Slot& s, const std::uint64_t* w, int n_words) {
        for (int j = 0; j < n_words; ++j)
            if (s.w[static_cast<std::size_t>(j)] != w[j]) return false;
        return true;
    }
    void grow(int n_words) {
        std::vector<Slot> bigger(slots_.size() * 2);
        const std::size_t mask = bigger.size() - 1;
        for (std::uint32_t& pos : used_) {
            const Slot& s = slots_[pos];
            std::size_t p = hash(s.w.data(), n_words) & mask;
            while (bigger[p].idx != kEmpty) p = (p + 1) & mask;
            bigger[p] = s;
            pos = static_cast<std::uint32_t>(p);
        }
        slots_ = std::move(bigger);
    }

    std::vector<Slot> slots_;
    std::vector<std::uint32_t> used_;
    std::vector<F> vals_;
};

}  // namespace detail

/// @brief Product of two explicit polynomials (signs per canonical order;
///        repeated generators annihilate).
///
/// Terms sort by fermion word first, so each operand splits into runs of
/// equal words, and the word algebra (collision test, merge sign, output
/// word) is decided once per run pair.  Surviving run pairs are grouped by
/// their output word; each group's raw term products fold on arrival in a
/// cache-resident scratch table, and because monomials order by word first,
/// flushing the groups in ascending word order appends to the result map in
/// strictly ascending key order.  Exponent arrays are added word-wise, which
/// matches byte-wise addition as long as no per-variable degree reaches 256
/// (the uint8 storage bounds inputs the same way).  Exact coefficient
/// arithmetic keeps the result independent of the fold order.
/// @throws ConfigMismatch when configs differ.
template <class F>
[[nodiscard]] ExplicitPoly<F> gmul(const ExplicitPoly<F>& a, const ExplicitPoly<F>& b) {
    if (a.config() != b.config())
        throw ConfigMismatch("gmul: operands over different variable configs");
    ExplicitPoly<F> out(a.config());
    if (a.is_zero() || b.is_zero()) return out;

    // Flatten each operand once: the map's scattered tree nodes would be
    // pointer-chased millions of times by the pair loops below, so copy the
    // terms (exponents packed into words) into contiguous arrays first.
    struct FlatTerm {
        std::array<std::uint64_t, (kMaxVars + 7) / 8> w;
        F c;
    };
    struct Run {
        std::uint64_t mask;
        std::size_t begin, end;  // index range into the flat term array
    };
    std::vector<FlatTerm> flat_a, flat_b;
    const auto runs_of = [](const ExplicitPoly<F>& p, std::vector<FlatTerm>& flat) {
        std::vector<Run> runs;
        flat.reserve(p.terms().size());
        for (const auto& [m, c] : p.terms()) {
            FlatTerm t;
            std::memcpy(t.w.data(), m.x_exp.data(), sizeof(t.w));
            t.c = c;
            if (runs.empty() || runs.back().mask != m.fmask)
                runs.push_back(Run{m.fmask, flat.size(), flat.size()});
            flat.push_back(std::move(t));
            ++runs.back().end;
        }
        return runs;
    };
    const std::vector<Run> runs_a = runs_of(a, flat_a);
    const std::vector<Run> runs_b = runs_of(b, flat_b);

    struct RunPair {
        std::uint64_t out_mask;
        int sign;
        const Run* ra;
        const Run* rb;
    };
    std::vector<RunPair> pairs;
    pairs.reserve(runs_a.size() * runs_b.size());
    for (const Run& ra : runs_a)
        for (const Run& rb : runs_b)
            if (const int sign = detail::merge_sign(ra.mask, rb.mask); sign != 0)
                pairs.push_back(RunPair{ra.mask | rb.mask, sign, &ra, &rb});
    std::sort(pairs.begin(), pairs.end(),
              [](const RunPair& p, const RunPair& q) { return p.out_mask < q.out_mask; });

    const int n_words = (a.config().n_vars + 7) / 8;
    detail::ProductAccumulator<F> acc;
    std::uint64_t w[(kMaxVars + 7) / 8];
    GMonomial key;  // flush scratch; bytes past n_words stay zero
    for (std::size_t g = 0; g < pairs.size();) {
        std::size_t h = g;
        acc.begin();
        const std::uint64_t group_mask = pairs[g].out_mask;
        while (h < pairs.size() && pairs[h].out_mask == group_mask) {
            const RunPair& rp = pairs[h++];
            for (std::size_t ia = rp.ra->begin; ia < rp.ra->end; ++ia) {
                const FlatTerm& ta = flat_a[ia];
                const F ca = rp.sign < 0 ? F(0) - ta.c : ta.c;
                for (std::size_t ib = rp.rb->begin; ib < rp.rb->end; ++ib) {
                    const FlatTerm& tb = flat_b[ib];
                    for (int j = 0; j < n_words; ++j)
                        w[j] = ta.w[static_cast<std::size_t>(j)] +
                               tb.w[static_cast<std::size_t>(j)];
                    acc.add(w, n_words, ca * tb.c);
                }
            }
        }
        key.fmask = group_mask;
        acc.flush(n_words, [&](const std::uint64_t* kw, F&& c) {
            std::memcpy(key.x_exp.data(), kw,
                        sizeof(std::uint64_t) * static_cast<std::size_t>(n_words));
            out.add_term(key, c);
        });
        g = h;
    }
    return out;
}

/// @brief Partial derivative ∂/∂x_i.
template <class F>
[[nodiscard]] ExplicitPoly<F> x_derivative(const ExplicitPoly<F>& f, int i) {
    ExplicitPoly<F> out(f.config());
    for (const auto& [m, c] : f.terms()) {
        const int e = m.x_exp[static_cast<std::size_t>(i)];
        if (e == 0) continue;
        GMonomial d = m;
        d.x_exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e - 1);
        out.add_term(d, c * F(e));
    }
    return out;
}

/// @brief Exterior-derivative-style operator Σ_i gen(bit_of_var(i))·∂_i f,
///        the generator multiplied on the left of each word.
template <class F, class BitOfVar>
[[nodiscard]] ExplicitPoly<F> exterior_d_general(const ExplicitPoly<F>& f, BitOfVar bit_of_var) {
    ExplicitPoly<F> out(f.config());
    for (int i = 0; i < f.config().n_vars; ++i) {
        const int g = bit_of_var(i);
        for (const auto& [m, c] : f.terms()) {
            const int e = m.x_exp[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            if (m.fmask >> g & 1) continue;  // φ_i² = 0
            GMonomial d = m;
            d.x_exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e - 1);
            d.fmask |= 1ull << g;
            F c2 = c * F(e);
            if (detail::left_insert_sign(m.fmask, g) < 0) c2 = F(0) - c2;
            out.add_term(d, c2);
        }
    }
    return out;
}

/// @brief The ⊤ reversal: each k-fermion word gets sign (−1)^{k(k−1)/2}.
template <class F>
[[nodiscard]] ExplicitPoly<F> top(const ExplicitPoly<F>& f) {
    ExplicitPoly<F> out(f.config());
    for (const auto& [m, c] : f.terms()) {
        const int k = m.fermion_count();
        const bool flip = (k * (k - 1) / 2) % 2 != 0;
        out.add_term(m, flip ? F(0) - c : c);
    }
    return out;
}

/// @brief Simultaneous exchange of variables i and j: x-exponents swap and
///        each fermionic companion is relabeled (with the re-sorting sign).
template <class F>
[[nodiscard]] ExplicitPoly<F> swap_variables(const ExplicitPoly<F>& f, int i, int j) {
    const VarConfig& cfg = f.config();
    std::vector<int> perm(static_cast<std::size_t>(cfg.n_vars) *
                          static_cast<std::size_t>(cfg.n_types));
    for (std::size_t g = 0; g < perm.size(); ++g) perm[g] = static_cast<int>(g);
    for (int t = 1; t <= cfg.n_types; ++t)
        std::swap(perm[static_cast<std::size_t>(cfg.bit(i, t))],
                  perm[static_cast<std::size_t>(cfg.bit(j, t))]);

    ExplicitPoly<F> out(cfg);
    for (const auto& [m, c] : f.terms()) {
        GMonomial s = m;
        std::swap(s.x_exp[static_cast<std::size_t>(i)], s.x_exp[static_cast<std::size_t>(j)]);
        const auto [mask, sign] = detail::relabel_word(m.fmask, perm);
        s.fmask = mask;
        out.add_term(s, sign < 0 ? F(0) - c : c);
    }
    return out;
}

/// @brief True iff f is invariant under every adjacent simultaneous swap.
template <class F>
[[nodiscard]] bool is_symmetric(const ExplicitPoly<F>& f) {
    for (int i = 0; i + 1 < f.config().n_vars; ++i)
        if (swap_variables(f, i, i + 1) != f) return false;
    return true;
}

}  // namespace supersym
