#pragma once
// ============================================================================
//  report.hpp — result object for the built-in verification routines
//
//  Every verify-style routine returns a CheckReport: a named check, the
//  sector (or scope) it ran over, and an exact list of mismatches (empty on
//  success).  Serialization to JSON lives in io.hpp.
// ============================================================================

#include <string>
#include <vector>

namespace supersym {

/// One coefficient-level disagreement: where, and the two exact values.
struct Mismatch {
    std::string key;
    std::string lhs;
    std::string rhs;
};

/// Outcome of a verification routine; pass() iff no mismatches.
struct CheckReport {
    std::string check;
    std::string sector;  ///< sector or scope description, e.g. "(2|1,1)" or "n<=5"
    std::vector<Mismatch> mismatches;

    [[nodiscard]] bool pass() const { return mismatches.empty(); }

    void record(std::string key, std::string lhs, std::string rhs) {
        mismatches.push_back({std::move(key), std::move(lhs), std::move(rhs)});
    }

    /// Fold another report's findings into this one (key-prefixed).
    void absorb(const CheckReport& other) {
        for (const Mismatch& m : other.mismatches)
            mismatches.push_back({other.check + " " + other.sector + ": " + m.key, m.lhs, m.rhs});
    }
};

}  // namespace supersym
