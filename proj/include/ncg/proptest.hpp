#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ncg {

struct PropertyOutcome {
    std::string name;
    long cases = 0;
    long failures = 0;
    double worst = 0.0;  // largest violation seen, relative to the case scale
    std::string first_failure;
};

struct PropertySuiteReport {
    std::uint64_t seed = 0;
    int models = 0;
    double noise = 1e-10;
    std::vector<PropertyOutcome> outcomes;

    bool passed() const;
};

// s-number identities and inequalities on seeded random (M_n(C), c·Tr) models.
// Grid points t = (k + 1/3)·c avoid the jumps of μ.
PropertySuiteReport run_property_suite(std::uint64_t seed, int models = 200, double noise = 1e-10);

}  // namespace ncg
