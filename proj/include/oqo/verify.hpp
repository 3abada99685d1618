#ifndef OQO_VERIFY_HPP
#define OQO_VERIFY_HPP

// Invariant suite behind `oqo verify`: every structural identity of the
// library re-checked on seeded random states, grouped by module.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oqo/types.hpp"

namespace oqo {

struct CheckResult {
    std::string group;
    std::string name;
    double value = 0;
    double threshold = 0;
    bool upper = true;  // value must stay below threshold; else above
    bool pass = false;
};

struct VerifyOptions {
    Index dim = 60;
    std::uint64_t seed = 7;
    int random_states = 20;
};

std::vector<CheckResult> run_verification(const VerifyOptions& opts);

/// One line per check, then one summary line per group. Returns true when all pass.
bool print_verification(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace oqo

#endif  // OQO_VERIFY_HPP
