#pragma once

#include <optional>
#include <string>
#include <vector>

namespace phasebound {

struct SuiteCheck {
    std::string name;
    std::vector<std::string> constants;  // bound constants the actual value depends on
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;  // error text when the check could not be computed
};

/// Scales one named bound constant wherever the suite uses it. A correct
/// build must fail at least one check for every constant in
/// bound_constant_names() under a 1 % perturbation.
struct SuiteOptions {
    std::optional<std::string> perturb_constant;
    double perturb_factor = 1.01;
};

struct SuiteResult {
    std::vector<SuiteCheck> checks;
    double seconds = 0.0;

    bool ok() const;
    std::vector<std::string> failures() const;
};

std::vector<std::string> bound_constant_names();

/// Reruns the reference scenarios and compares each against a stored expectation.
/// Throws ConfigError for an unknown perturbation name.
SuiteResult paper_suite(const SuiteOptions& options = {});

/// Human-readable diff table, one line per check.
std::string format_suite_table(const SuiteResult& result);

}  // namespace phasebound
