#pragma once

#include <string>
#include <vector>

namespace coheat {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Analytic-oracle invariant suite: simulation against every closed form the
// model admits, plus the structural identities the dynamics must satisfy.
// Runs in about a second.
std::vector<CheckResult> run_selfcheck();

}  // namespace coheat
