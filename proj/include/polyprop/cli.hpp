#ifndef POLYPROP_CLI_HPP
#define POLYPROP_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyprop/lattice_state.hpp"

namespace polyprop::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failure = 1,
    exit_usage = 2,
    exit_precondition = 3,
};

enum class OutputFormat { csv, json };

struct RunConfig {
    PhysicalParams<double> params;
    /// true when hbar, mass or mu0 came from the config file or a flag
    bool params_given = false;
    std::string system = "free";
    int N = 8;
    std::optional<int> image_cutoff;
    std::vector<double> times{1.0};
    OutputFormat format = OutputFormat::csv;
    std::uint64_t seed = 20240601;
    std::map<std::string, double> tolerance_overrides;
    IndexRange j_range{0, 0};
    IndexRange r_range{0, 0};
    double dx = 1.0;
    std::vector<double> mu0_list{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
};

/// Applies a JSON config document on top of `base`. Unknown keys, wrong types
/// and invalid values are usage errors.
RunConfig apply_config_json(std::string_view text, RunConfig base = {});

void validate(const RunConfig& config);

/// "7" or "-3:5"
IndexRange parse_index_range(std::string_view text);

/// Full command line without the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace polyprop::cli

#endif
