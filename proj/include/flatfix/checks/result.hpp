#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace flatfix::checks {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    // The check could not discriminate at the configured resolution for some
    // samples; those samples are counted in `limited` and not judged.
    bool resolution_limited = false;
    std::size_t samples = 0;
    std::size_t limited = 0;
    std::string detail;
};

struct SuiteConfig {
    int k0 = 4;
    double grid_step = 1.0 / 1200;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    bool flip_gradient_sign = false;  // mutation: negate the counterexample's g_grad
    int area_samples = 10000;
};

inline bool all_passed(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.passed) return false;
    return !rs.empty();
}

inline nlohmann::json to_json(const CheckResult& r) {
    return {{"suite", r.suite},   {"name", r.name},       {"passed", r.passed}, {"resolution_limited", r.resolution_limited},
            {"samples", r.samples}, {"limited", r.limited}, {"detail", r.detail}};
}

inline nlohmann::json to_json(const std::vector<CheckResult>& rs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a;
}

// Starting offset into the Halton sequence for a seed.
inline std::uint64_t halton_offset(std::uint64_t seed) { return seed * 100003; }

} // namespace flatfix::checks
