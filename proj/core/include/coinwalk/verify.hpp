#pragma once

// Full verification grid: every protocol family at its published parameter
// ranges, engine soundness cross-checks, and schedule certifications. Used
// by both the CLI `verify-all` subcommand and the acceptance suite.

#include <string>
#include <vector>

namespace coinwalk::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CriterionResult> run_all_criteria();

} // namespace coinwalk::verify
