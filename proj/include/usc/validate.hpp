// validate.hpp: runs the library's cross-checks (closed forms against
// independent numerical oracles) and reports each with its deviation.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace usc::validation {

struct CheckResult {
    std::string name;
    bool pass{false};
    double deviation{0.0};
    double tolerance{0.0};
    std::string detail;  // error text when the check itself threw
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool pass() const;
};

struct ValidationOptions {
    std::map<std::string, double> tolerance_overrides;
    // Negative control: compares squeezed moments against a reference that
    // assumes vacuum variance 1/2 instead of 1/4.
    bool inject_half_vacuum{false};
    // Skip the checks that diagonalise large Fock spaces.
    bool quick{false};
};

std::vector<std::string> check_names();
ValidationReport validate(const ValidationOptions& options = {});

}  // namespace usc::validation
