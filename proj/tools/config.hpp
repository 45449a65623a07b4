#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nasolv/czspace.hpp"
#include "nasolv/group.hpp"

namespace nasolv::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a command ran but its checks failed.
class ValidationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string group = "abelian:2";
    // admissible-set constants
    double M = 3.5;
    double r0 = 1.2;
    double eta = 2.0;
    double Cstar = 2.5;
    // CZ window: z-box [zLo, zHi)^Q, u in [uLo, uHi)
    double zLo = 0.0, zHi = 1.0;
    double uLo = -12.0, uHi = -10.0;
    int czFunctions = 50;
    std::vector<double> czAlphaFactors = {0.25, 0.5, 1.0, 2.0};
    // dyadic systems
    int dyadicKMin = -2, dyadicKMax = 2, dyadicPerSide = 4;
    // numerics
    double tol = 1e-6;
    std::vector<double> tGrid = {1.0, 4.0, 16.0, 64.0};
    std::int64_t mcSamples = 1000000;
    std::uint64_t seed = 7;
    std::string out;  // empty: stdout

    GroupModel model() const;
    Window window() const;
    AdmissibilityConstants constants() const;
};

// JSON object with any subset of the keys above; unknown keys are rejected.
Config load_config(const std::string& path);
void validate(const Config& c);

}  // namespace nasolv::cli
