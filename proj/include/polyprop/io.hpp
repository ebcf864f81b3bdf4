#ifndef POLYPROP_IO_HPP
#define POLYPROP_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "polyprop/errors.hpp"
#include "polyprop/lattice_state.hpp"

namespace polyprop::io {

/// Malformed or missing input file.
class FormatError : public UsageError {
public:
    using UsageError::UsageError;
};

/// 17 significant digits; parses back to the same double.
std::string format_real(double v);

double parse_real(std::string_view field, std::string_view what);
int parse_int(std::string_view field, std::string_view what);

/// state.csv -> state.json
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

std::string wavefunction_csv(const LatticeWavefunction<double>& psi);
std::string sidecar_json(const Lattice<double>& lattice);

/// Rows must cover n_min..n_max of the sidecar, one per site, strictly increasing.
LatticeWavefunction<double> parse_wavefunction(std::string_view csv, std::string_view sidecar);

LatticeWavefunction<double> read_wavefunction(const std::filesystem::path& csv_path);
void write_wavefunction(const std::filesystem::path& csv_path, const LatticeWavefunction<double>& psi);

std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames, so a failed run leaves no partial file.
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace polyprop::io

#endif
