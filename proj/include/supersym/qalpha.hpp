#pragma once
// ============================================================================
//  qalpha.hpp — the field Q(alpha) of univariate rational functions
//
//  Dense polynomials over Rat with a normalized fraction on top: gcd-reduced,
//  monic denominator, zero represented as 0/1.  This is the coefficient field
//  used for the alpha-deformed basis when alpha is kept symbolic; evaluating
//  at a sampled rational alpha recovers plain Rat computations.
//
//  Canonical string forms ("a" is the deformation parameter):
//      constant         ->  "p/q"                 (same as a plain rational)
//      polynomial       ->  "2*a^2 - a + 1/3"
//      proper fraction  ->  "(a + 1)/(a^2 + 2)"
// ============================================================================

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supersym/rational.hpp"

namespace supersym {

// ============================================================================
//  UPoly — dense univariate polynomial over Rat
// ============================================================================

class UPoly {
  public:
    UPoly() = default;
    explicit UPoly(const Rat& c) {
        if (c != 0) c_ = {c};
    }
    /// Monomial c * a^k.
    UPoly(const Rat& c, std::size_t k) {
        if (c != 0) {
            c_.assign(k + 1, Rat(0));
            c_[k] = c;
        }
    }

    [[nodiscard]] static UPoly variable() { return UPoly(Rat(1), 1); }

    [[nodiscard]] bool is_zero() const { return c_.empty(); }
    [[nodiscard]] bool is_constant() const { return c_.size() <= 1; }
    /// Degree of the zero polynomial is -1 by convention.
    [[nodiscard]] long degree() const { return static_cast<long>(c_.size()) - 1; }

    [[nodiscard]] const Rat& coeff(std::size_t k) const {
        static const Rat kZero(0);
        return k < c_.size() ? c_[k] : kZero;
    }
    [[nodiscard]] const Rat& leading() const {
        if (c_.empty()) throw std::logic_error("UPoly::leading on zero polynomial");
        return c_.back();
    }

    void set_coeff(std::size_t k, const Rat& v) {
        if (k >= c_.size()) c_.resize(k + 1, Rat(0));
        c_[k] = v;
        trim();
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        UPoly r;
        r.c_.assign(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) + b.coeff(i);
        r.trim();
        return r;
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        UPoly r;
        r.c_.assign(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) - b.coeff(i);
        r.trim();
        return r;
    }
    friend UPoly operator-(const UPoly& a) { return UPoly() - a; }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        UPoly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    UPoly& operator+=(const UPoly& o) { return *this = *this + o; }
    UPoly& operator-=(const UPoly& o) { return *this = *this - o; }
    UPoly& operator*=(const UPoly& o) { return *this = *this * o; }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    /// Exact division by a scalar.
    [[nodiscard]] UPoly scaled(const Rat& s) const {
        if (s == 0) return {};
        UPoly r = *this;
        for (auto& c : r.c_) c *= s;
        return r;
    }

    /// Polynomial long division: returns {quotient, remainder}.
    [[nodiscard]] std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
        if (d.is_zero()) throw std::invalid_argument("UPoly::divmod by zero");
        UPoly q, r = *this;
        while (!r.is_zero() && r.degree() >= d.degree()) {
            const std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
            const Rat factor = r.leading() / d.leading();
            UPoly t(factor, shift);
            q += t;
            r -= t * d;
        }
        return {q, r};
    }

    /// Monic gcd (gcd of anything with 0 is the other argument made monic).
    [[nodiscard]] static UPoly gcd(UPoly a, UPoly b) {
        while (!b.is_zero()) {
            UPoly r = a.divmod(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        if (a.is_zero()) return a;
        return a.scaled(Rat(1) / a.leading());
    }

    [[nodiscard]] Rat eval(const Rat& x) const {
        Rat acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    [[nodiscard]] std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const Rat& c = c_[i];
            if (c == 0) continue;
            const bool neg = c < 0;
            const Rat ac = neg ? Rat(-c) : c;
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            if (i == 0) {
                out += rat_to_string(ac);
            } else {
                if (ac != 1) out += rat_to_string(ac) + "*";
                out += (i == 1) ? "a" : "a^" + std::to_string(i);
            }
        }
        return out;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;  ///< c_[k] multiplies a^k; no trailing zeros.
};

// ============================================================================
//  QAlpha — normalized fraction of UPoly (the field Q(alpha))
// ============================================================================

class QAlpha {
  public:
    QAlpha() : num_(), den_(Rat(1)) {}
    QAlpha(int v) : num_(Rat(v)), den_(Rat(1)) {}  // NOLINT: implicit for field genericity
    QAlpha(const Rat& v) : num_(v), den_(Rat(1)) {}
    QAlpha(UPoly n, UPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    /// The deformation parameter itself.
    [[nodiscard]] static QAlpha alpha() { return QAlpha(UPoly::variable(), UPoly(Rat(1))); }
    /// alpha^k for k of either sign.
    [[nodiscard]] static QAlpha alpha_pow(long k) {
        UPoly p(Rat(1), static_cast<std::size_t>(k >= 0 ? k : -k));
        if (k >= 0) return QAlpha(std::move(p), UPoly(Rat(1)));
        return QAlpha(UPoly(Rat(1)), std::move(p));
    }

    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
    [[nodiscard]] bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    [[nodiscard]] const UPoly& num() const { return num_; }
    [[nodiscard]] const UPoly& den() const { return den_; }

    friend QAlpha operator+(const QAlpha& a, const QAlpha& b) {
        return QAlpha(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend QAlpha operator-(const QAlpha& a, const QAlpha& b) {
        return QAlpha(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend QAlpha operator-(const QAlpha& a) { return QAlpha(-a.num_, a.den_); }
    friend QAlpha operator*(const QAlpha& a, const QAlpha& b) {
        return QAlpha(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend QAlpha operator/(const QAlpha& a, const QAlpha& b) {
        if (b.is_zero()) throw std::domain_error("QAlpha: division by zero");
        return QAlpha(a.num_ * b.den_, a.den_ * b.num_);
    }
    QAlpha& operator+=(const QAlpha& o) { return *this = *this + o; }
    QAlpha& operator-=(const QAlpha& o) { return *this = *this - o; }
    QAlpha& operator*=(const QAlpha& o) { return *this = *this * o; }
    QAlpha& operator/=(const QAlpha& o) { return *this = *this / o; }

    /// Normal forms make equality a plain component compare.
    friend bool operator==(const QAlpha& a, const QAlpha& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const QAlpha& a, const QAlpha& b) { return !(a == b); }

    /// Evaluate at a sampled rational alpha (denominator must not vanish).
    [[nodiscard]] Rat eval(const Rat& x) const {
        const Rat d = den_.eval(x);
        if (d == 0) throw std::domain_error("QAlpha::eval: denominator vanishes at sample point");
        return num_.eval(x) / d;
    }

    [[nodiscard]] std::string str() const {
        if (den_ == UPoly(Rat(1))) {
            return num_.is_constant() ? rat_to_string(num_.coeff(0)) : num_.str();
        }
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("QAlpha: zero denominator");
        if (num_.is_zero()) {
            den_ = UPoly(Rat(1));
            return;
        }
        UPoly g = UPoly::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.divmod(g).first;
            den_ = den_.divmod(g).first;
        }
        const Rat lead = den_.leading();
        if (lead != 1) {
            const Rat inv = Rat(1) / lead;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    UPoly num_;
    UPoly den_;  ///< monic; equals 1 whenever the fraction is polynomial.
};

// ============================================================================
//  Scalar-to-string, generic over the two coefficient fields
// ============================================================================

[[nodiscard]] inline std::string coeff_to_string(const Rat& r) { return rat_to_string(r); }
[[nodiscard]] inline std::string coeff_to_string(const QAlpha& q) { return q.str(); }

// ============================================================================
//  Parsing: rationals, polynomials in "a", and (poly)/(poly) fractions
// ============================================================================

namespace detail {

/// Parse a polynomial expression in "a"/"alpha" with rational coefficients,
/// e.g. "2*a^2 - a + 1/3".  Grammar: sum of terms; term = coeff ["*" pow] |
/// pow; pow = ("a"|"alpha") ["^" uint]; coeff = rational literal.
[[nodiscard]] inline UPoly parse_upoly(std::string_view s, std::size_t& pos) {
    auto skip_ws = [&] {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    };
    auto parse_uint = [&]() -> std::size_t {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("QAlpha parse: expected integer");
        return static_cast<std::size_t>(std::stoul(std::string(s.substr(start, pos - start))));
    };

    UPoly out;
    bool first = true;
    for (;;) {
        skip_ws();
        int sign = 1;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            sign = (s[pos] == '-') ? -1 : 1;
            ++pos;
        } else if (!first) {
            break;  // no more terms at this level
        }
        skip_ws();
        if (pos >= s.size()) throw std::invalid_argument("QAlpha parse: dangling sign");

        Rat coeff(1);
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
                ++pos;
            coeff = rat_from_string(s.substr(start, pos - start));
            have_coeff = true;
            skip_ws();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                skip_ws();
            }
        }

        std::size_t power = 0;
        if (pos < s.size() && (s[pos] == 'a')) {
            if (s.substr(pos, 5) == "alpha")
                pos += 5;
            else
                ++pos;
            power = 1;
            skip_ws();
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                skip_ws();
                power = parse_uint();
            }
        } else if (!have_coeff) {
            throw std::invalid_argument("QAlpha parse: expected term");
        }

        out += UPoly(Rat(sign) * coeff, power);
        first = false;
    }
    return out;
}

}  // namespace detail

/// @brief Parse a coefficient string: "p/q", a polynomial in a, or
///        "(poly)/(poly)".  Inverse of QAlpha::str() on canonical output.
[[nodiscard]] inline QAlpha qalpha_from_string(std::string_view s) {
    // Trim outer whitespace.
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) throw std::invalid_argument("qalpha_from_string: empty token");

    if (s.front() == '(') {
        // "(num)/(den)" — find the matching close paren of the numerator.
        int depth = 0;
        std::size_t split = std::string_view::npos;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') {
                if (--depth == 0) {
                    split = i;
                    break;
                }
            }
        }
        if (split == std::string_view::npos)
            throw std::invalid_argument("qalpha_from_string: unbalanced parentheses");
        std::string_view rest = s.substr(split + 1);
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        if (rest.size() < 2 || rest.front() != '/')
            throw std::invalid_argument("qalpha_from_string: expected '/(den)'");
        rest.remove_prefix(1);
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
            throw std::invalid_argument("qalpha_from_string: expected '(den)'");
        std::size_t p1 = 0, p2 = 0;
        const std::string_view num_src = s.substr(1, split - 1);
        const std::string_view den_src = rest.substr(1, rest.size() - 2);
        UPoly num = detail::parse_upoly(num_src, p1);
        UPoly den = detail::parse_upoly(den_src, p2);
        if (p1 != num_src.size() || p2 != den_src.size())
            throw std::invalid_argument("qalpha_from_string: trailing characters in '" +
                                        std::string(s) + "'");
        return QAlpha(std::move(num), std::move(den));
    }
    std::size_t pos = 0;
    UPoly p = detail::parse_upoly(s, pos);
    if (pos != s.size())
        throw std::invalid_argument("qalpha_from_string: trailing characters in '" +
                                    std::string(s) + "'");
    return QAlpha(std::move(p), UPoly(Rat(1)));
}

}  // namespace supersym
