#ifndef POLYPROP_VERIFY_HPP
#define POLYPROP_VERIFY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polyprop/lattice_state.hpp"

namespace polyprop {

/// One verified property: pass iff max_deviation <= tolerance, or < when strict.
struct CheckResult {
    std::string suite;
    std::string property;
    double max_deviation = 0;
    double tolerance = 0;
    bool strict = false;
    std::string where;

    bool passed() const { return strict ? max_deviation < tolerance : max_deviation <= tolerance; }
    std::string key() const { return suite + "." + property; }
};

struct VerifyOptions {
    PhysicalParams<double> params;
    int N = 8;
    std::uint64_t seed = 20240601;
    /// keyed by "suite.property"
    std::map<std::string, double> tolerance_overrides;
};

const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Unknown names and unknown
/// override keys are usage errors.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options);

} // namespace polyprop

#endif
