#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uclab/report.hpp"

namespace uclab {

struct SuiteOptions {
    std::uint64_t seed = 1;
    int meshkov_points = 10000;
    int carleman_samples = 100;
};

struct CriterionOutcome {
    int id = 0;
    std::string title;
    VerificationReport report;
    double seconds = 0.0;  // wall time, kept out of the report
};

inline constexpr int kCriteria = 9;

// Runs one entry (1..9) of the desk-scale acceptance matrix.
CriterionOutcome run_criterion(int id, const SuiteOptions& opt);
std::vector<CriterionOutcome> run_suite(const SuiteOptions& opt);

// All entries, prefixed "cN/".
VerificationReport consolidate(const std::vector<CriterionOutcome>& outcomes);

}  // namespace uclab
