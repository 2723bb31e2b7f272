// Tests for the Grassmann engine and the N=2 explicit-variable oracle:
// word algebra signs, explicit monomials, symmetry detection, exterior
// derivatives, Table-1 generators from their differential definitions,
// m-coefficient extraction, variable-count stability, and the
// generating-function identities in the (t, τ̄, τ̲) series frame.

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "supersym/grassmann.hpp"
#include "supersym/oracle.hpp"

using namespace supersym;

namespace {

using P = ExplicitPoly<Rat>;

/// Single word c·(x-monomial)·(ascending fermion word given by mask).
P word(const VarConfig& cfg, std::vector<std::uint8_t> xe, std::uint64_t fmask, Rat c) {
    P out(cfg);
    GMonomial m;
    std::copy(xe.begin(), xe.end(), m.x_exp.begin());
    m.fmask = fmask;
    out.add_term(m, c);
    return out;
}

/// Reference sign: concatenate the ascending words of a and b, count
/// inversions of the merged sequence (0 when a generator repeats).
int reference_merge_sign(std::uint64_t a, std::uint64_t b) {
    if (a & b) return 0;
    std::vector<int> seq;
    for (int g = 0; g < 64; ++g)
        if (a >> g & 1) seq.push_back(g);
    for (int g = 0; g < 64; ++g)
        if (b >> g & 1) seq.push_back(g);
    int inv = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) ++inv;
    return (inv % 2) ? -1 : 1;
}

AbstractPoly<Rat> abstract_of(std::initializer_list<std::pair<const char*, Rat>> terms) {
    AbstractPoly<Rat> out(BasisId::m);
    for (const auto& [s, c] : terms) out.add_term(parse_spar(s), c);
    return out;
}

}  // namespace

TEST_CASE("word multiplication: generator signs") {
    VarConfig cfg(2, 2);
    const int f1 = cfg.phi_bit(0), t1 = cfg.theta_bit(0);
    const int f2 = cfg.phi_bit(1), t2 = cfg.theta_bit(1);
    REQUIRE(f1 == 0);
    REQUIRE(t1 == 1);
    REQUIRE(f2 == 2);
    REQUIRE(t2 == 3);

    auto gen = [&](int b) { return P::generator(cfg, b); };

    SECTION("phi_1 theta_1 ascending, theta_1 phi_1 reversed") {
        CHECK(gmul(gen(f1), gen(t1)) == word(cfg, {0, 0}, 0b0011, 1));
        CHECK(gmul(gen(t1), gen(f1)) == word(cfg, {0, 0}, 0b0011, -1));
    }
    SECTION("nilpotency") {
        CHECK(gmul(gen(f1), gen(f1)).is_zero());
        CHECK(gmul(gmul(gen(f1), gen(t2)), gen(t2)).is_zero());
    }
    SECTION("(phi_1 theta_2)(phi_2 theta_1) = -phi_1 theta_1 phi_2 theta_2") {
        P left = gmul(gen(f1), gen(t2));
        P right = gmul(gen(f2), gen(t1));
        CHECK(gmul(left, right) == word(cfg, {0, 0}, 0b1111, -1));
    }
    SECTION("x-exponents add across variables") {
        P a = gmul(P::x(cfg, 0, 2), gen(f1));
        P b = gmul(P::x(cfg, 1, 1), gen(t1));
        CHECK(gmul(a, b) == word(cfg, {2, 1}, 0b0011, 1));
    }
    SECTION("config mismatch is rejected") {
        VarConfig other(3, 2);
        CHECK_THROWS_AS(gmul(gen(f1), P::generator(other, 0)), ConfigMismatch);
    }
}

TEST_CASE("word multiplication: exhaustive small-mask laws") {
    VarConfig cfg(3, 2);  // 6 fermionic generators
    auto w = [&](std::uint64_t mask) { return word(cfg, {0, 0, 0}, mask, 1); };

    SECTION("merge sign matches inversion counting, all 64x64 mask pairs") {
        for (std::uint64_t a = 0; a < 64; ++a)
            for (std::uint64_t b = 0; b < 64; ++b) {
                P prod = gmul(w(a), w(b));
                const int ref = reference_merge_sign(a, b);
                if (ref == 0) {
                    CHECK(prod.is_zero());
                } else {
                    REQUIRE(prod.terms().size() == 1);
                    CHECK(prod.terms().begin()->first.fmask == (a | b));
                    CHECK(prod.terms().begin()->second == Rat(ref));
                }
            }
    }
    SECTION("graded commutativity on disjoint words") {
        for (std::uint64_t a = 0; a < 64; ++a)
            for (std::uint64_t b = 0; b < 64; ++b) {
                if (a & b) continue;
                const int ka = std::popcount(a), kb = std::popcount(b);
                P lhs = gmul(w(a), w(b));
                P rhs = gmul(w(b), w(a));
                if ((ka * kb) % 2) rhs *= Rat(-1);
                CHECK(lhs == rhs);
            }
    }
    SECTION("associativity over 4-generator mask triples") {
        VarConfig small(2, 2);
        auto ws = [&](std::uint64_t mask) { return word(small, {0, 0}, mask, 1); };
        for (std::uint64_t a = 0; a < 16; ++a)
            for (std::uint64_t b = 0; b < 16; ++b)
                for (std::uint64_t c = 0; c < 16; ++c)
                    CHECK(gmul(gmul(ws(a), ws(b)), ws(c)) == gmul(ws(a), gmul(ws(b), ws(c))));
    }
}

TEST_CASE("explicit monomials") {
    SECTION("m_(n) at N=2 is the classical power-sum pattern") {
        VarConfig cfg(2, 2);
        P m = monomial_explicit(parse_spar("[3]"), cfg);
        CHECK(m == word(cfg, {3, 0}, 0, 1) + word(cfg, {0, 3}, 0, 1));
    }
    SECTION("m_(1b) at N=2") {
        VarConfig cfg(2, 2);
        P m = monomial_explicit(parse_spar("[1b]"), cfg);
        CHECK(m == word(cfg, {1, 0}, 0b0011, 1) + word(cfg, {0, 1}, 0b1100, 1));
    }
    SECTION("m_(2o,0o,0u) at N=3 matches the six-term expansion") {
        VarConfig cfg(3, 2);
        const int f1 = cfg.phi_bit(0), t1 = cfg.theta_bit(0);
        const int f2 = cfg.phi_bit(1), t2 = cfg.theta_bit(1);
        const int f3 = cfg.phi_bit(2), t3 = cfg.theta_bit(2);
        // phi1 phi2 th3 (x1^2 - x2^2) + phi1 phi3 th2 (x1^2 - x3^2)
        //   + phi2 phi3 th1 (x2^2 - x3^2), written with ascending words.
        auto mask = [](int a, int b, int c) {
            return (1ull << a) | (1ull << b) | (1ull << c);
        };
        P expect =
            word(cfg, {2, 0, 0}, mask(f1, f2, t3), 1) + word(cfg, {0, 2, 0}, mask(f1, f2, t3), -1) +
            word(cfg, {2, 0, 0}, mask(f1, t2, f3), -1) + word(cfg, {0, 0, 2}, mask(f1, t2, f3), 1) +
            word(cfg, {0, 2, 0}, mask(t1, f2, f3), 1) + word(cfg, {0, 0, 2}, mask(t1, f2, f3), -1);
        CHECK(monomial_explicit(parse_spar("[2o,0o,0u]"), cfg) == expect);
    }
    SECTION("repeated biline parts appear once per variable subset") {
        VarConfig cfg(3, 2);
        P m = monomial_explicit(parse_spar("[0b,0b]"), cfg);
        CHECK(m.terms().size() == 3);  // choose 2 of 3 variables
        for (const auto& [mono, c] : m.terms()) CHECK(c == 1);
    }
    SECTION("too few variables") {
        VarConfig cfg(2, 2);
        CHECK_THROWS_AS(monomial_explicit(parse_spar("[1,1,1]"), cfg), TooFewVariables);
    }
}

TEST_CASE("symmetry detection") {
    VarConfig cfg(3, 2);
    SECTION("explicit monomials are symmetric") {
        for (const char* s : {"[2]", "[1b]", "[2o,0o,0u]", "[1o,1u]", "[1,1,0b]", "[0o,0u]"})
            CHECK(is_symmetric(monomial_explicit(parse_spar(s), cfg)));
    }
    SECTION("a lone marked term is not symmetric") {
        P f = gmul(P::x(cfg, 0, 1), P::generator(cfg, cfg.phi_bit(0)));
        CHECK_FALSE(is_symmetric(f));
    }
    SECTION("swapping variables moves marks with signs") {
        // phi_1 theta_2 x_1  --(1<->2)-->  phi_2 theta_1 x_2 = -theta_1 phi_2 x_2
        P f = word(cfg, {1, 0, 0}, (1ull << cfg.phi_bit(0)) | (1ull << cfg.theta_bit(1)), 1);
        P g = word(cfg, {0, 1, 0}, (1ull << cfg.theta_bit(0)) | (1ull << cfg.phi_bit(1)), -1);
        CHECK(swap_variables(f, 0, 1) == g);
    }
}

TEST_CASE("exterior derivatives") {
    SECTION("action on a classical monomial, extracted abstractly") {
        VarConfig cfg(10, 2);
        P m = monomial_explicit(parse_spar("[3,3,2,1]"), cfg);
        AbstractPoly<Rat> d = extract_m_coeffs(exterior_d(m, Mark::Over), Sector{8, 1, 0});
        CHECK(d == abstract_of({{"[3,2o,2,1]", 3}, {"[3,3,1o,1]", 2}, {"[3,3,2,0o]", 1}}));
    }
    SECTION("nilpotency and anticommutation on a corpus") {
        VarConfig cfg(4, 2);
        for (const char* s : {"[2,1]", "[1b,1]", "[2o]", "[1,1,1]"}) {
            P f = monomial_explicit(parse_spar(s), cfg);
            CHECK(exterior_d(exterior_d(f, Mark::Over), Mark::Over).is_zero());
            CHECK(exterior_d(exterior_d(f, Mark::Under), Mark::Under).is_zero());
            P ou = exterior_d(exterior_d(f, Mark::Under), Mark::Over);
            P uo = exterior_d(exterior_d(f, Mark::Over), Mark::Under);
            CHECK(ou == uo * Rat(-1));
        }
    }
    SECTION("only fermionic marks are accepted") {
        VarConfig cfg(2, 2);
        P f = monomial_explicit(parse_spar("[1]"), cfg);
        CHECK_THROWS_AS(exterior_d(f, Mark::Plain), std::invalid_argument);
        CHECK_THROWS_AS(exterior_d(f, Mark::Biline), std::invalid_argument);
    }
}

TEST_CASE("word reversal (top)") {
    VarConfig cfg(2, 2);
    SECTION("sign is (-1)^{k(k-1)/2}") {
        CHECK(top(word(cfg, {1, 0}, 0b0001, 1)) == word(cfg, {1, 0}, 0b0001, 1));    // k=1
        CHECK(top(word(cfg, {0, 0}, 0b0011, 1)) == word(cfg, {0, 0}, 0b0011, -1));   // k=2
        CHECK(top(word(cfg, {0, 0}, 0b0111, 1)) == word(cfg, {0, 0}, 0b0111, -1));   // k=3
        CHECK(top(word(cfg, {0, 0}, 0b1111, 1)) == word(cfg, {0, 0}, 0b1111, 1));    // k=4
    }
    SECTION("top is an involution and reverses products") {
        P pbar1 = generator_explicit(BasisId::p, Mark::Over, 1, cfg);
        P punder0 = generator_explicit(BasisId::p, Mark::Under, 0, cfg);
        P prod = gmul(pbar1, punder0);
        CHECK(top(top(prod)) == prod);
        CHECK(top(prod) == gmul(top(punder0), top(pbar1)));
    }
}

TEST_CASE("generators from differential definitions") {
    VarConfig cfg(4, 2);
    SECTION("power sums") {
        CHECK(extract_m_coeffs(generator_explicit(BasisId::p, Mark::Plain, 2, cfg), Sector{2, 0, 0}) ==
              abstract_of({{"[2]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::p, Mark::Over, 2, cfg), Sector{2, 1, 0}) ==
              abstract_of({{"[2o]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::p, Mark::Under, 0, cfg), Sector{0, 0, 1}) ==
              abstract_of({{"[0u]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::p, Mark::Biline, 1, cfg), Sector{1, 1, 1}) ==
              abstract_of({{"[1b]", 1}}));
        CHECK_THROWS_AS(generator_explicit(BasisId::p, Mark::Plain, 0, cfg), std::invalid_argument);
    }
    SECTION("complete homogeneous, plain and marked") {
        CHECK(extract_m_coeffs(generator_explicit(BasisId::h, Mark::Plain, 2, cfg), Sector{2, 0, 0}) ==
              abstract_of({{"[2]", 1}, {"[1,1]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::h, Mark::Over, 2, cfg), Sector{2, 1, 0}) ==
              abstract_of({{"[2o]", 3}, {"[2,0o]", 1}, {"[1o,1]", 2}, {"[1,1,0o]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::h, Mark::Biline, 0, cfg), Sector{0, 1, 1}) ==
              abstract_of({{"[0b]", 2}, {"[0o,0u]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::h, Mark::Biline, 1, cfg), Sector{1, 1, 1}) ==
              abstract_of({{"[1b]", 6},
                           {"[1o,0u]", 2},
                           {"[1u,0o]", -2},
                           {"[1,0b]", 2},
                           {"[1,0o,0u]", 1}}));
    }
    SECTION("elementary, plain and marked") {
        CHECK(extract_m_coeffs(generator_explicit(BasisId::e, Mark::Plain, 2, cfg), Sector{2, 0, 0}) ==
              abstract_of({{"[1,1]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::e, Mark::Over, 2, cfg), Sector{2, 1, 0}) ==
              abstract_of({{"[1,1,0o]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::e, Mark::Biline, 1, cfg), Sector{1, 1, 1}) ==
              abstract_of({{"[1,0o,0u]", 1}}));
        CHECK(extract_m_coeffs(generator_explicit(BasisId::e, Mark::Biline, 0, cfg), Sector{0, 1, 1}) ==
              abstract_of({{"[0o,0u]", 1}}));
    }
    SECTION("reversal of composition order flips the biline sign") {
        P table = generator_explicit(BasisId::h, Mark::Biline, 1, cfg);  // dbar dunder h_3
        P swapped = exterior_d(exterior_d(detail::classical_h<Rat>(cfg, 3), Mark::Over), Mark::Under);
        CHECK(swapped == table * Rat(-1));
    }
}

TEST_CASE("coefficient extraction round trips") {
    SECTION("extract(monomial) is the unit vector, across sectors") {
        for (int n = 0; n <= 4; ++n)
            for (int mo = 0; mo <= 1; ++mo)
                for (int mu = 0; mu <= 1; ++mu) {
                    Sector s{n, mo, mu};
                    VarConfig cfg(n + mo + mu + 1, 2);
                    for (const SuperPartition& sp : enumerate_sector(s)) {
                        AbstractPoly<Rat> got =
                            extract_m_coeffs(monomial_explicit(sp, cfg), s);
                        AbstractPoly<Rat> want = AbstractPoly<Rat>::unit(BasisId::m, sp, Rat(1));
                        REQUIRE(got == want);
                    }
                }
    }
    SECTION("errors") {
        VarConfig cfg(2, 2);
        P asym = gmul(P::x(cfg, 0, 1), P::generator(cfg, cfg.phi_bit(0)));
        CHECK_THROWS_AS(extract_m_coeffs(asym, Sector{1, 1, 0}), NotSymmetric);
        P h2 = generator_explicit(BasisId::h, Mark::Over, 2, VarConfig(2, 2));
        CHECK_THROWS_AS(extract_m_coeffs(h2, Sector{2, 1, 0}), UnstableVariableCount);
        P inhom = P::x(cfg, 0, 1) + P::x(cfg, 0, 2);
        CHECK_THROWS_AS(extract_m_coeffs(inhom, Sector{1, 0, 0}), std::invalid_argument);
    }
    SECTION("a tampered monomial expansion is rejected") {
        // Adding junk to m_(1o,0u) keeps it sector-homogeneous but breaks
        // the m-combination property.
        VarConfig cfg(3, 2);
        P f = monomial_explicit(parse_spar("[1o,0u]"), cfg);
        P tampered =
            f + word(cfg, {1, 0, 0}, (1ull << cfg.phi_bit(0)) | (1ull << cfg.theta_bit(1)), 3);
        CHECK_THROWS_AS(extract_m_coeffs(tampered, Sector{1, 1, 1}), NotSymmetric);
    }
}

namespace {

/// Some symmetric polynomial of sector (n|mo,mu): a single h/e generator
/// when one mark of each kind suffices, otherwise a product of power sums
/// (overs of degrees mo-1,...,0, unders of degrees mu-1,...,0, the leftover
/// weight as plain p_1 factors).  Returns a zero poly when the sector is
/// too light to host the product.
P sector_sample(const Sector& s, const VarConfig& cfg) {
    if (s.mo <= 1 && s.mu <= 1) {
        Mark mark = (s.mo && s.mu) ? Mark::Biline
                    : s.mo         ? Mark::Over
                    : s.mu         ? Mark::Under
                                   : Mark::Plain;
        return generator_explicit(BasisId::h, mark, s.n, cfg);
    }
    const int marked_weight = s.mo * (s.mo - 1) / 2 + s.mu * (s.mu - 1) / 2;
    if (s.n < marked_weight) return P(cfg);
    P acc = P::constant(cfg, Rat(1));
    for (int d = s.mo - 1; d >= 0; --d)
        acc = gmul(acc, generator_explicit(BasisId::p, Mark::Over, d, cfg));
    for (int d = s.mu - 1; d >= 0; --d)
        acc = gmul(acc, generator_explicit(BasisId::p, Mark::Under, d, cfg));
    for (int k = 0; k < s.n - marked_weight; ++k)
        acc = gmul(acc, generator_explicit(BasisId::p, Mark::Plain, 1, cfg));
    return acc;
}

}  // namespace

TEST_CASE("stability in the number of variables") {
    // Once n_vars reaches n + mo + mu, extracted coefficients stop changing.
    for (int n = 0; n <= 4; ++n)
        for (int mo = 0; mo <= 2; ++mo)
            for (int mu = 0; mu <= 2; ++mu) {
                const int bound = n + mo + mu;
                if (bound == 0 || bound > 5) continue;  // keep runtime modest
                Sector s{n, mo, mu};
                VarConfig small(bound, 2), big(bound + 1, 2);
                P fs = sector_sample(s, small);
                if (fs.is_zero()) continue;
                AbstractPoly<Rat> a = extract_m_coeffs(fs, s);
                AbstractPoly<Rat> b = extract_m_coeffs(sector_sample(s, big), s);
                REQUIRE_FALSE(a.is_zero());
                REQUIRE(a == b);
            }
}

TEST_CASE("series frame: component split of H, E and P") {
    SeriesFrame fr(3);
    const int tmax = 4;
    VarConfig inner(3, 2);

    SECTION("H components are the complete homogeneous generators") {
        P H = series_H<Rat>(fr, tmax);
        for (int n = 0; n <= tmax; ++n) {
            CHECK(series_component(H, fr, n, Mark::Plain) ==
                  generator_explicit(BasisId::h, Mark::Plain, n, inner));
            CHECK(series_component(H, fr, n, Mark::Over) ==
                  generator_explicit(BasisId::h, Mark::Over, n, inner));
            CHECK(series_component(H, fr, n, Mark::Under) ==
                  generator_explicit(BasisId::h, Mark::Under, n, inner));
            CHECK(series_component(H, fr, n, Mark::Biline) ==
                  generator_explicit(BasisId::h, Mark::Biline, n, inner) * Rat(-1));
        }
    }
    SECTION("E components are the elementary generators") {
        P E = series_E<Rat>(fr, tmax);
        for (int n = 0; n <= tmax; ++n) {
            CHECK(series_component(E, fr, n, Mark::Plain) ==
                  generator_explicit(BasisId::e, Mark::Plain, n, inner));
            CHECK(series_component(E, fr, n, Mark::Over) ==
                  generator_explicit(BasisId::e, Mark::Over, n, inner));
            CHECK(series_component(E, fr, n, Mark::Under) ==
                  generator_explicit(BasisId::e, Mark::Under, n, inner));
            CHECK(series_component(E, fr, n, Mark::Biline) ==
                  generator_explicit(BasisId::e, Mark::Biline, n, inner) * Rat(-1));
        }
    }
    SECTION("P components carry the (n+1), (n+1)(n+2) normalizations") {
        P Ps = series_P<Rat>(fr, tmax);
        CHECK(series_component(Ps, fr, 0, Mark::Plain).is_zero());
        for (int n = 1; n <= tmax; ++n)
            CHECK(series_component(Ps, fr, n, Mark::Plain) ==
                  generator_explicit(BasisId::p, Mark::Plain, n, inner));
        for (int n = 0; n <= tmax; ++n) {
            CHECK(series_component(Ps, fr, n, Mark::Over) ==
                  generator_explicit(BasisId::p, Mark::Over, n, inner) * Rat(n + 1));
            CHECK(series_component(Ps, fr, n, Mark::Under) ==
                  generator_explicit(BasisId::p, Mark::Under, n, inner) * Rat(n + 1));
            CHECK(series_component(Ps, fr, n, Mark::Biline) ==
                  generator_explicit(BasisId::p, Mark::Biline, n, inner) *
                      Rat(-(n + 1) * (n + 2)));
        }
    }
}

TEST_CASE("series frame: multiplicative identities") {
    SeriesFrame fr(3);
    const int tmax = 4;
    P one = P::constant(fr.cfg, Rat(1));

    SECTION("H(t,tau) E(-t,-tau) = 1") {
        P H = series_H<Rat>(fr, tmax);
        P En = series_negate_frame(series_E<Rat>(fr, tmax), fr);
        CHECK(truncate_t(gmul(H, En), fr, tmax) == truncate_t(one, fr, tmax));
    }
    SECTION("H P = Euler(H)") {
        P H = series_H<Rat>(fr, tmax);
        P Ps = series_P<Rat>(fr, tmax);
        CHECK(truncate_t(gmul(H, Ps), fr, tmax) == series_euler(H, fr));
    }
    SECTION("E P(-t,-tau) = -Euler(E)") {
        P E = series_E<Rat>(fr, tmax);
        P Pn = series_negate_frame(series_P<Rat>(fr, tmax), fr);
        CHECK(truncate_t(gmul(E, Pn), fr, tmax) == series_euler(E, fr) * Rat(-1));
    }
}

namespace {

/// ⟪D f⟫ for the master-operator identity: Σ_i τ φ_i (1/t) ∂_i f, valid for
/// inputs whose terms all satisfy t-exponent = x-degree.
P master_D(const P& f, const SeriesFrame& fr, Mark kind) {
    P out(fr.cfg);
    const int tau = (kind == Mark::Over) ? fr.tau_over_bit() : fr.tau_under_bit();
    for (int i = 0; i < fr.n_real; ++i) {
        const int v = fr.var(i);
        const int fb = (kind == Mark::Over) ? fr.cfg.phi_bit(v) : fr.cfg.theta_bit(v);
        P d = x_derivative(f, v);
        P shifted(fr.cfg);
        for (const auto& [m, c] : d.terms()) {
            REQUIRE(m.x_exp[0] >= 1);
            GMonomial s = m;
            --s.x_exp[0];
            shifted.add_term(s, c);
        }
        out += gmul(gmul(P::generator(fr.cfg, tau), P::generator(fr.cfg, fb)), shifted);
    }
    return out;
}

}  // namespace

TEST_CASE("series frame: master operator reproduces the shifted argument") {
    // <<(1+Dbar)(1+Dunder) F(tx)>> = F(tx + taubar phi + tauunder theta)
    // checked for F = prod 1/(1-X_i) and F = prod (1+X_i) at N=3, t-degree 4.
    SeriesFrame fr(3);
    const int tmax = 4;

    auto base_H = [&](int cap) {  // prod_i 1/(1 - t x_i), no fermions
        P acc = P::constant(fr.cfg, Rat(1));
        for (int i = 0; i < fr.n_real; ++i) {
            P geo(fr.cfg);
            for (int k = 0; k <= cap; ++k) {
                GMonomial m;
                m.x_exp[0] = static_cast<std::uint8_t>(k);
                m.x_exp[static_cast<std::size_t>(fr.var(i))] = static_cast<std::uint8_t>(k);
                geo.add_term(m, Rat(1));
            }
            acc = truncate_t(gmul(acc, geo), fr, cap);
        }
        return acc;
    };
    auto base_E = [&](int cap) {  // prod_i (1 + t x_i), no fermions
        P acc = P::constant(fr.cfg, Rat(1));
        for (int i = 0; i < fr.n_real; ++i) {
            GMonomial m;
            m.x_exp[0] = 1;
            m.x_exp[static_cast<std::size_t>(fr.var(i))] = 1;
            P factor = P::constant(fr.cfg, Rat(1));
            factor.add_term(m, Rat(1));
            acc = truncate_t(gmul(acc, factor), fr, cap);
        }
        return acc;
    };

    SECTION("F = prod 1/(1-X)") {
        // Each D lowers the t-degree by one, so feed two extra orders.
        P g0 = base_H(tmax + 2);
        P g1 = g0 + master_D(g0, fr, Mark::Under);
        P g2 = g1 + master_D(g1, fr, Mark::Over);
        CHECK(truncate_t(g2, fr, tmax) == series_H<Rat>(fr, tmax));
    }
    SECTION("F = prod (1+X)") {
        P g0 = base_E(tmax + 2);
        P g1 = g0 + master_D(g0, fr, Mark::Under);
        P g2 = g1 + master_D(g1, fr, Mark::Over);
        CHECK(truncate_t(g2, fr, tmax) == series_E<Rat>(fr, tmax));
    }
}
