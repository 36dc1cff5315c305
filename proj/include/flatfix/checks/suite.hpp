#pragma once

#include <vector>

#include "flatfix/checks/brouwer_checks.hpp"
#include "flatfix/checks/cli_checks.hpp"
#include "flatfix/checks/construction_checks.hpp"
#include "flatfix/checks/dynamics_checks.hpp"
#include "flatfix/checks/genfun_checks.hpp"

namespace flatfix::checks {

inline std::vector<CheckResult> run_all(const SuiteConfig& cfg) {
    std::vector<CheckResult> all;
    for (auto suite : {genfun_suite, construction_suite, dynamics_suite, brouwer_suite, cli_suite}) {
        auto rs = suite(cfg);
        all.insert(all.end(), rs.begin(), rs.end());
    }
    return all;
}

} // namespace flatfix::checks
