#pragma once
// ============================================================================
//  rational.hpp — exact rational scalars and small numeric helpers
//
//  The whole library computes over exact fields only.  Plain rationals are
//  GMP's mpq_class; this header adds the handful of conveniences the rest of
//  the code needs (canonical string form, parsing, factorials, binomials).
// ============================================================================

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace supersym {

/// Exact rational number (always kept in canonical form).
using Rat = mpq_class;

/// @brief Build p/q as an exact rational.
[[nodiscard]] inline Rat rat(long p, long q = 1) {
    if (q == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

/// @brief Canonical decimal string: "p" when the denominator is 1, else "p/q".
[[nodiscard]] inline std::string rat_to_string(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c.get_str();
}

/// @brief Parse "p" or "p/q" (optional sign, decimal digits only).
[[nodiscard]] inline Rat rat_from_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("rat_from_string: empty token");
    Rat r;
    if (r.set_str(std::string(s), 10) != 0)
        throw std::invalid_argument("rat_from_string: bad rational '" + std::string(s) + "'");
    r.canonicalize();
    if (r.get_den() == 0)
        throw std::invalid_argument("rat_from_string: zero denominator in '" + std::string(s) + "'");
    return r;
}

/// @brief n! as an exact rational (n small and non-negative).
[[nodiscard]] inline Rat factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(f);
}

/// @brief Generalized binomial coefficient binom(a, k) = a(a-1)...(a-k+1)/k!
///        over any exact scalar type with field operations.
template <class F>
[[nodiscard]] F binomial(const F& a, long k) {
    if (k < 0) return F(0);
    F num(1);
    for (long i = 0; i < k; ++i) num *= a - F(static_cast<int>(i));
    F den(1);
    for (long i = 2; i <= k; ++i) den *= F(static_cast<int>(i));
    return num / den;
}

/// @brief (-1)^n as an int (n may be negative).
[[nodiscard]] constexpr int parity_sign(long n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace supersym
