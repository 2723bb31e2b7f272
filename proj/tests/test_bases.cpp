// Tests for the abstract basis layer: the filled-diagram monomial product
// (against hand-checked classical cases, the worked product, and the
// explicit-variable oracle), Table-1 generator expansions, multiplicative
// expansion, p-basis products, the compact p-expansions, and the h/e
// recursions — every dual route is compared against its counterpart.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "supersym/bases.hpp"
#include "supersym/oracle.hpp"

using namespace supersym;

namespace {

using Poly = AbstractPoly<Rat>;

Poly m_of(std::initializer_list<std::pair<const char*, Rat>> terms) {
    Poly out(BasisId::m);
    for (const auto& [s, c] : terms) out.add_term(parse_spar(s), c);
    return out;
}

Poly p_of(std::initializer_list<std::pair<const char*, Rat>> terms) {
    Poly out(BasisId::p);
    for (const auto& [s, c] : terms) out.add_term(parse_spar(s), c);
    return out;
}

Poly m_unit(const char* s) { return Poly::unit(BasisId::m, parse_spar(s), Rat(1)); }

Poly product_m(const char* a, const char* b) {
    return mul_m(m_unit(a), m_unit(b));
}

/// Oracle route for the same product: multiply the explicit monomials and
/// read the m-coefficients back off.  Everything here is integer (diagram
/// multiplicities), so the explicit side runs over long long.
Poly product_oracle(const SuperPartition& la, const SuperPartition& om) {
    const Sector sa = la.sector(), sb = om.sector();
    const Sector s{sa.n + sb.n, sa.mo + sb.mo, sa.mu + sb.mu};
    // Every product part count is at most ℓ(Λ)+ℓ(Ω), so that many variables
    // (clamped to the sector's own maximum, floored by the operands) give a
    // faithful comparison.
    const int bound = static_cast<int>(la.length() + om.length());
    const int need = std::max({1, std::min(sector_max_length(s), bound),
                               static_cast<int>(la.length()), static_cast<int>(om.length())});
    VarConfig cfg(need, 2);
    ExplicitPoly<long long> prod = gmul(monomial_explicit_cached<long long>(la, cfg),
                                        monomial_explicit_cached<long long>(om, cfg));
    Poly out(BasisId::m);
    if (prod.is_zero()) return out;
    const AbstractPoly<long long> coeffs = extract_m_coeffs(prod, s, bound);
    for (const auto& [sp, c] : coeffs.terms()) out.add_term(sp, Rat(static_cast<long>(c)));
    return out;
}

}  // namespace

TEST_CASE("monomial product: classical cases") {
    SECTION("m_(1) m_(1) = 2 m_(1,1) + m_(2)") {
        CHECK(product_m("[1]", "[1]") == m_of({{"[1,1]", 2}, {"[2]", 1}}));
    }
    SECTION("m_(1) m_(1,1) = m_(2,1) + 3 m_(1,1,1)") {
        CHECK(product_m("[1]", "[1,1]") == m_of({{"[2,1]", 1}, {"[1,1,1]", 3}}));
    }
    SECTION("m_(2,1) m_(1) = m_(3,1) + 2 m_(2,2) + 2 m_(2,1,1)") {
        // x1^2 x2^2 arises from both (x1^2 x2)·x2 and (x2^2 x1)·x1.
        CHECK(product_m("[2,1]", "[1]") ==
              m_of({{"[3,1]", 1}, {"[2,2]", 2}, {"[2,1,1]", 2}}));
    }
    SECTION("identity element") {
        CHECK(product_m("[2b,1o,1]", "[]") == m_unit("[2b,1o,1]"));
        CHECK(product_m("[]", "[2b,1o,1]") == m_unit("[2b,1o,1]"));
    }
}

TEST_CASE("monomial product: worked fermionic product") {
    // m_(1o,1u,0u) m_(1o,0o) =
    //   -m_(2b,1o,0b) - m_(2b,1o,0o,0u) - m_(1b,1o,1u,0o) + 2 m_(1b,1b,1o)
    CHECK(product_m("[1o,1u,0u]", "[1o,0o]") == m_of({{"[2b,1o,0b]", -1},
                                                      {"[2b,1o,0o,0u]", -1},
                                                      {"[1b,1o,1u,0o]", -1},
                                                      {"[1b,1b,1o]", 2}}));
}

TEST_CASE("monomial product: odd monomials anticommute and square to zero") {
    CHECK(mul_m(m_unit("[1o]"), m_unit("[1u]")) ==
          mul_m(m_unit("[1u]"), m_unit("[1o]")) * Rat(-1));
    CHECK(mul_m(m_unit("[1o]"), m_unit("[1o]")).is_zero());
    CHECK(mul_m(m_unit("[0u]"), m_unit("[0u]")).is_zero());
    CHECK_THROWS_AS(mul_m(m_unit("[1]"), Poly::unit(BasisId::p, parse_spar("[1]"), Rat(1))),
                    BasisMismatch);
}

TEST_CASE("monomial product matches the oracle on small sectors") {
    // All pairs with |Λ|+|Ω| <= 4 and per-operand fermion counts <= 2 of
    // each kind (the double-biline operands exercise the indistinguishable
    // circle-pair counting).
    std::vector<SuperPartition> operands;
    for (int n = 0; n <= 4; ++n)
        for (int mo = 0; mo <= 2; ++mo)
            for (int mu = 0; mu <= 2; ++mu)
                for (const SuperPartition& sp : enumerate_sector(n, mo, mu))
                    operands.push_back(sp);

    long long checked = 0;
    for (const SuperPartition& la : operands)
        for (const SuperPartition& om : operands) {
            if (la.sector().n + om.sector().n > 4) continue;
            Poly combinatorial(BasisId::m);
            for (const ProductTerm& t : monomial_product(la, om))
                combinatorial.add_term(t.gamma, Rat(static_cast<long>(t.sign * t.mult)));
            REQUIRE(combinatorial == product_oracle(la, om));
            ++checked;
        }
    CHECK(checked > 1000);
}

TEST_CASE("Table 1 generator expansions match the oracle") {
    for (BasisId fam : {BasisId::p, BasisId::h, BasisId::e})
        for (Mark mark : {Mark::Plain, Mark::Over, Mark::Under, Mark::Biline})
            for (int n = 0; n <= 5; ++n) {
                if (fam == BasisId::p && mark == Mark::Plain && n == 0) continue;
                const Sector s{n, phi_count(mark), theta_count(mark)};
                VarConfig cfg(s.n + s.mo + s.mu + (s.n + s.mo + s.mu == 0 ? 1 : 0), 2);
                CAPTURE(to_string(fam), static_cast<int>(mark), n);
                CHECK(generator_in_m(fam, mark, n) ==
                      extract_m_coeffs(generator_explicit(fam, mark, n, cfg), s));
            }
}

TEST_CASE("Table 1 named expansions") {
    CHECK(generator_in_m(BasisId::h, Mark::Over, 2) ==
          m_of({{"[2o]", 3}, {"[2,0o]", 1}, {"[1o,1]", 2}, {"[1,1,0o]", 1}}));
    CHECK(generator_in_m(BasisId::h, Mark::Biline, 1) == m_of({{"[1b]", 6},
                                                               {"[1o,0u]", 2},
                                                               {"[1u,0o]", -2},
                                                               {"[1,0b]", 2},
                                                               {"[1,0o,0u]", 1}}));
    CHECK(generator_in_m(BasisId::e, Mark::Over, 3) == m_of({{"[1,1,1,0o]", 1}}));
    CHECK(generator_in_m(BasisId::p, Mark::Biline, 2) == m_of({{"[2b]", 1}}));
}

TEST_CASE("power-sum products") {
    SECTION("odd generators anticommute") {
        auto p1 = Poly::unit(BasisId::p, parse_spar("[1o]"), Rat(1));
        auto p2 = Poly::unit(BasisId::p, parse_spar("[0u]"), Rat(1));
        CHECK(mul_p(p1, p2) == Poly::unit(BasisId::p, parse_spar("[1o,0u]"), Rat(1)));
        CHECK(mul_p(p2, p1) == Poly::unit(BasisId::p, parse_spar("[1o,0u]"), Rat(-1)));
        CHECK(mul_p(p1, p1).is_zero());
    }
    SECTION("biline and plain generators are central") {
        auto pb = Poly::unit(BasisId::p, parse_spar("[1b]"), Rat(1));
        auto po = Poly::unit(BasisId::p, parse_spar("[2o]"), Rat(1));
        CHECK(mul_p(pb, po) == mul_p(po, pb));
        CHECK(mul_p(pb, pb) == Poly::unit(BasisId::p, parse_spar("[1b,1b]"), Rat(1)));
    }
    SECTION("interleaving sign matches the full permutation parity") {
        // (p̄_2 p̲_1) · (p̄_1 p̲_0): merging odds (2o,1u | 1o,0u) into
        // (2o,1o,1u,0u) moves 1o past 1u: one inversion.
        auto left = Poly::unit(BasisId::p, parse_spar("[2o,1u]"), Rat(1));
        auto right = Poly::unit(BasisId::p, parse_spar("[1o,0u]"), Rat(1));
        CHECK(mul_p(left, right) ==
              Poly::unit(BasisId::p, parse_spar("[2o,1o,1u,0u]"), Rat(-1)));
    }
}

TEST_CASE("multiplicative expansion matches the oracle") {
    for (int n = 0; n <= 3; ++n)
        for (int mo = 0; mo <= 1; ++mo)
            for (int mu = 0; mu <= 1; ++mu) {
                const Sector s{n, mo, mu};
                VarConfig cfg(std::max(1, s.n + s.mo + s.mu), 2);
                for (const SuperPartition& sp : enumerate_sector(s)) {
                    for (BasisId fam : {BasisId::p, BasisId::h, BasisId::e}) {
                        ExplicitPoly<Rat> prod = ExplicitPoly<Rat>::constant(cfg, Rat(1));
                        for (const Part& part : sp.parts())
                            prod = gmul(prod, generator_explicit(fam, part.m, part.v, cfg));
                        CAPTURE(to_string(fam), to_string(sp));
                        if (prod.is_zero()) {
                            CHECK(multiplicative_expand(fam, sp).is_zero());
                        } else {
                            CHECK(multiplicative_expand(fam, sp) == extract_m_coeffs(prod, s));
                        }
                    }
                }
            }
}

TEST_CASE("worked example: p- h- and e-expansions of m_(2o,0o,0u)") {
    const Poly target = m_unit("[2o,0o,0u]");

    SECTION("p-combination") {
        const Poly f = p_of({{"[2o,0o,0u]", 1}, {"[2b,0o]", 1}, {"[2o,0b]", -1}});
        Poly expanded(BasisId::m);
        for (const auto& [sp, c] : f.terms())
            expanded += multiplicative_expand(BasisId::p, sp) * c;
        CHECK(expanded == target);
    }
    SECTION("h-combination") {
        const std::vector<std::pair<const char*, Rat>> coeffs = {
            {"[1o,1,0o,0u]", rat(-8, 3)}, {"[1o,1u,0o]", rat(-1, 3)},
            {"[1,1,0b,0o]", rat(-2, 3)},  {"[1b,1,0o]", rat(-1, 3)},
            {"[1o,1,0b]", Rat(1)},        {"[2o,0o,0u]", rat(7, 3)},
            {"[2,0b,0o]", rat(2, 3)},     {"[2b,0o]", rat(1, 3)},
            {"[2o,0b]", Rat(-1)}};
        Poly expanded(BasisId::m);
        for (const auto& [s, c] : coeffs)
            expanded += multiplicative_expand(BasisId::h, parse_spar(s)) * c;
        CHECK(expanded == target);
    }
    SECTION("e-combination") {
        const std::vector<std::pair<const char*, Rat>> coeffs = {
            {"[1o,1,0o,0u]", rat(2, 3)}, {"[1o,1u,0o]", rat(1, 3)},
            {"[1,1,0b,0o]", rat(2, 3)},  {"[1b,1,0o]", rat(1, 3)},
            {"[1o,1,0b]", Rat(-1)},      {"[2o,0o,0u]", rat(-1, 3)},
            {"[2,0b,0o]", rat(-2, 3)},   {"[2b,0o]", rat(-1, 3)},
            {"[2o,0b]", Rat(1)}};
        Poly expanded(BasisId::m);
        for (const auto& [s, c] : coeffs)
            expanded += multiplicative_expand(BasisId::e, parse_spar(s)) * c;
        CHECK(expanded == target);
    }
}

TEST_CASE("norm data") {
    CHECK(z_of(parse_spar("[2,2,1]")) == Rat(8));
    CHECK(z_of(parse_spar("[2o,1b]")) == Rat(1));
    CHECK(zeta_of(parse_spar("[1b,1b]")) == rat(1, 2));
    CHECK(zeta_of(parse_spar("[1,0b]")) == Rat(1));
    CHECK(zeta_of(parse_spar("[2b,0b]")) == rat(1, 3));
    CHECK(omega_sign(parse_spar("[2]")) == -1);       // p_2 -> -p_2
    CHECK(omega_sign(parse_spar("[2o]")) == 1);       // pbar_2 -> +
    CHECK(omega_sign(parse_spar("[2b]")) == -1);      // phat_2 -> -
    CHECK(omega_sign(parse_spar("[2o,1u,1]")) == -1); // (-1)^{4-0-1}
    CHECK(top_sign_of(Sector{3, 1, 1}) == -1);
    CHECK(top_sign_of(Sector{3, 2, 2}) == 1);  // C(4,2)=6 even
}

TEST_CASE("compact p-expansions") {
    SECTION("classical h and e") {
        CHECK(compact_in_p(BasisId::h, Mark::Plain, 2) ==
              p_of({{"[2]", rat(1, 2)}, {"[1,1]", rat(1, 2)}}));
        CHECK(compact_in_p(BasisId::e, Mark::Plain, 2) ==
              p_of({{"[2]", rat(-1, 2)}, {"[1,1]", rat(1, 2)}}));
    }
    SECTION("biline h at small degree") {
        CHECK(compact_in_p(BasisId::h, Mark::Biline, 0) ==
              p_of({{"[0b]", 1}, {"[0o,0u]", 1}}));
        Poly h1 = compact_in_p(BasisId::h, Mark::Biline, 1);
        CHECK(h1.coeff(parse_spar("[1b]")) == Rat(2));  // zeta^{-1} z^{-1} = 2
        // The canonical-order product p_(1u,0o) = p̲₁p̄₀ picks up the
        // grouped_p_sign −1 relative to the uniform z,ζ coefficients.
        CHECK(h1 == p_of({{"[1b]", 2},
                          {"[1o,0u]", 1},
                          {"[1u,0o]", -1},
                          {"[1,0b]", 1},
                          {"[1,0o,0u]", 1}}));
    }
    SECTION("m-expansions of the compact forms match Table 1, all marks, n <= 4") {
        for (BasisId fam : {BasisId::h, BasisId::e})
            for (Mark mark : {Mark::Plain, Mark::Over, Mark::Under, Mark::Biline})
                for (int n = 0; n <= 4; ++n) {
                    Poly expanded(BasisId::m);
                    const Poly compact = compact_in_p(fam, mark, n);
                    for (const auto& [sp, c] : compact.terms())
                        expanded += multiplicative_expand(BasisId::p, sp) * c;
                    CAPTURE(to_string(fam), static_cast<int>(mark), n);
                    CHECK(expanded == generator_in_m(fam, mark, n));
                }
    }
    SECTION("alpha = 1 reduces g to h, n <= 5") {
        for (Mark mark : {Mark::Plain, Mark::Over, Mark::Under, Mark::Biline})
            for (int n = 0; n <= 5; ++n)
                CHECK(compact_in_p(BasisId::g, mark, n, Rat(1)) ==
                      compact_in_p(BasisId::h, mark, n));
    }
    SECTION("g carries alpha^{-length}") {
        auto g = compact_in_p<QAlpha>(BasisId::g, Mark::Plain, 2, QAlpha::alpha());
        CHECK(g.coeff(parse_spar("[2]")) == QAlpha(rat(1, 2)) / QAlpha::alpha());
        CHECK(g.coeff(parse_spar("[1,1]")) ==
              QAlpha(rat(1, 2)) / (QAlpha::alpha() * QAlpha::alpha()));
    }
}

TEST_CASE("h/e recursions agree with the compact forms") {
    const int n_max = 5;
    for (BasisId fam : {BasisId::h, BasisId::e}) {
        GeneratorTable t = hep_recursions(fam, n_max);
        for (int n = 0; n <= n_max; ++n)
            for (Mark mark : {Mark::Plain, Mark::Over, Mark::Under, Mark::Biline}) {
                CAPTURE(to_string(fam), static_cast<int>(mark), n);
                CHECK(t.get(mark, n) == compact_in_p(fam, mark, n));
            }
    }
}

TEST_CASE("recursion spot checks") {
    GeneratorTable h = hep_recursions(BasisId::h, 2);
    GeneratorTable e = hep_recursions(BasisId::e, 1);
    CHECK(h.get(Mark::Plain, 2) == p_of({{"[2]", rat(1, 2)}, {"[1,1]", rat(1, 2)}}));
    CHECK(e.get(Mark::Plain, 1) == p_of({{"[1]", 1}}));
    CHECK(h.get(Mark::Biline, 0) == p_of({{"[0b]", 1}, {"[0o,0u]", 1}}));
}

TEST_CASE("Table 2 cross-family rows vanish") {
    // A-1: sum_r (-1)^r e_r h_{n-r} = 0 (n >= 1);
    // A-2: sum_r (-1)^r (e_r hbar_{n-r} - ebar_r h_{n-r}) = 0, and the
    //      under variant; A-3: the two-circle row.
    const int n_max = 5;
    GeneratorTable h = hep_recursions(BasisId::h, n_max);
    GeneratorTable e = hep_recursions(BasisId::e, n_max);
    const auto at = [](const GeneratorTable& t, Mark m, int n) -> const Poly& {
        return t.get(m, n);
    };

    for (int n = 1; n <= n_max; ++n) {
        Poly acc(BasisId::p);
        for (int r = 0; r <= n; ++r)
            acc += mul_p(at(e, Mark::Plain, r), at(h, Mark::Plain, n - r)) * Rat(parity_sign(r));
        CAPTURE(n);
        CHECK(acc.is_zero());
    }
    for (Mark mark : {Mark::Over, Mark::Under}) {
        for (int n = 0; n <= n_max; ++n) {
            Poly acc(BasisId::p);
            for (int r = 0; r <= n; ++r) {
                acc += mul_p(at(e, Mark::Plain, r), at(h, mark, n - r)) * Rat(parity_sign(r));
                acc -= mul_p(at(e, mark, r), at(h, Mark::Plain, n - r)) * Rat(parity_sign(r));
            }
            CAPTURE(static_cast<int>(mark), n);
            CHECK(acc.is_zero());
        }
    }
    for (int n = 0; n <= n_max; ++n) {  // A-3
        Poly acc(BasisId::p);
        for (int r = 0; r <= n; ++r) {
            const Rat sg(parity_sign(r));
            acc += mul_p(at(e, Mark::Biline, r), at(h, Mark::Plain, n - r)) * sg;
            acc -= mul_p(at(h, Mark::Over, n - r), at(e, Mark::Under, r)) * sg;
            acc -= mul_p(at(e, Mark::Over, r), at(h, Mark::Under, n - r)) * sg;
            acc += mul_p(at(e, Mark::Plain, r), at(h, Mark::Biline, n - r)) * sg;
        }
        CAPTURE(n);
        CHECK(acc.is_zero());
    }
}
