#pragma once

#include <string>
#include <vector>

#include "rational.hpp"

namespace qhlat {

struct VerifyCheck {
    std::string name;
    bool passed;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed)
                return false;
        return true;
    }
};

/// Replays every explicitly known matrix of the single-defect family at the
/// given coupling: the band metrics R = 1..7 against their reference forms
/// and the exact residual, the tridiagonal Dyson pair (gram identity and
/// explicit inverse), and both hermitized partners. Needs 0 < |g| < 1 and a
/// window of at least 16.
VerifyReport verify_reference(const Rational& g, long window);

} // namespace qhlat
