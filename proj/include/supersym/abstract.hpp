#pragma once
// ============================================================================
//  abstract.hpp — abstract superpolynomials: formal F-linear combinations of
//  basis elements indexed by superpartitions.
//
//  A value carries its basis tag (m, p, h, e, g); arithmetic is only defined
//  between polynomials expressed in the same basis.  Terms are kept in the
//  canonical cross-sector order so iteration (and hence all serialization)
//  is deterministic.
// ============================================================================

#include <map>
#include <stdexcept>
#include <string>

#include "supersym/superpartition.hpp"

namespace supersym {

/// Basis families: monomial, power-sum, complete homogeneous, elementary,
/// and the alpha-deformed homogeneous family g^(α).
enum class BasisId : char { m = 'm', p = 'p', h = 'h', e = 'e', g = 'g' };

[[nodiscard]] inline std::string to_string(BasisId b) {
    return std::string(1, static_cast<char>(b));
}

/// Two operands were expressed in different bases.
struct BasisMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// @brief Formal linear combination Σ c_Λ · B_Λ with exact coefficients.
template <class F>
class AbstractPoly {
  public:
    using TermMap = std::map<SuperPartition, F, SpLess>;

    AbstractPoly() = default;
    explicit AbstractPoly(BasisId basis) : basis_(basis) {}

    [[nodiscard]] static AbstractPoly unit(BasisId basis, const SuperPartition& sp,
                                           const F& c = F(1)) {
        AbstractPoly p(basis);
        p.add_term(sp, c);
        return p;
    }

    [[nodiscard]] BasisId basis() const { return basis_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    /// Coefficient of a basis element (zero when absent).
    [[nodiscard]] F coeff(const SuperPartition& sp) const {
        auto it = terms_.find(sp);
        return it == terms_.end() ? F(0) : it->second;
    }

    void add_term(const SuperPartition& sp, const F& c) {
        if (c == F(0)) return;
        auto [it, inserted] = terms_.emplace(sp, c);
        if (!inserted) {
            it->second += c;
            if (it->second == F(0)) terms_.erase(it);
        }
    }

    AbstractPoly& operator+=(const AbstractPoly& o) {
        require_same_basis(o, "operator+=");
        for (const auto& [sp, c] : o.terms_) add_term(sp, c);
        return *this;
    }
    AbstractPoly& operator-=(const AbstractPoly& o) {
        require_same_basis(o, "operator-=");
        for (const auto& [sp, c] : o.terms_) add_term(sp, F(0) - c);
        return *this;
    }
    AbstractPoly& operator*=(const F& s) {
        if (s == F(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [sp, c] : terms_) c *= s;
        return *this;
    }
    friend AbstractPoly operator+(AbstractPoly a, const AbstractPoly& b) { return a += b; }
    friend AbstractPoly operator-(AbstractPoly a, const AbstractPoly& b) { return a -= b; }
    friend AbstractPoly operator*(AbstractPoly a, const F& s) { return a *= s; }

    friend bool operator==(const AbstractPoly& a, const AbstractPoly& b) {
        return a.basis_ == b.basis_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const AbstractPoly& a, const AbstractPoly& b) { return !(a == b); }

    /// @brief The common sector of all terms, if the polynomial is nonzero
    ///        and homogeneous; throws otherwise.
    [[nodiscard]] Sector homogeneous_sector() const {
        if (terms_.empty())
            throw std::logic_error("homogeneous_sector: zero polynomial has no sector");
        const Sector s = terms_.begin()->first.sector();
        for (const auto& [sp, c] : terms_)
            if (sp.sector() != s)
                throw std::logic_error("homogeneous_sector: polynomial is not homogeneous");
        return s;
    }

    /// Re-tag the basis (used by the involution, which maps h-coefficients
    /// to e-coefficients verbatim).
    [[nodiscard]] AbstractPoly retagged(BasisId basis) const {
        AbstractPoly p = *this;
        p.basis_ = basis;
        return p;
    }

  private:
    void require_same_basis(const AbstractPoly& o, const char* op) const {
        if (basis_ != o.basis_)
            throw BasisMismatch(std::string(op) + ": operands in bases '" +
                                to_string(basis_) + "' and '" + to_string(o.basis_) + "'");
    }

    BasisId basis_ = BasisId::m;
    TermMap terms_;
};

}  // namespace supersym
