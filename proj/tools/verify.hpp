#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace nasolv::cli {

struct CheckResult {
    std::string module;
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    std::string relation;  // "<=", ">=", "=="
    bool pass = false;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    int failures() const;
    nlohmann::json to_json() const;
};

struct CZSuiteRow {
    int index = 0;
    double alphaFactor = 0.0;
    double alpha = 0.0;
    int parts = 0;
    double gBound = 0.0;
    double sumMeasures = 0.0;
    double sumL1 = 0.0;
    bool ok = false;
    std::string failure;
};
// Random discretised functions decomposed at alpha = factor * ||f||_1 / mu(window).
std::vector<CZSuiteRow> cz_suite(const Config& cfg, int nFunctions, std::uint64_t seed);

// Invariant suite over all modules; deterministic for a given config and seed.
VerifyReport verify_all(const Config& cfg, std::uint64_t seed);

}  // namespace nasolv::cli
