#include "polyprop/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

namespace polyprop::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.push_back(line);
    }
    // a trailing newline yields one empty final entry
    if (!out.empty() && out.back().empty())
        out.pop_back();
    return out;
}

} // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

double parse_real(std::string_view field, std::string_view what) {
    double v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw FormatError(fmt::format("{}: '{}' is not a finite real number", what, field));
    return v;
}

int parse_int(std::string_view field, std::string_view what) {
    int v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc() || ptr != end)
        throw FormatError(fmt::format("{}: '{}' is not an integer", what, field));
    return v;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".json");
    return p;
}

std::string wavefunction_csv(const LatticeWavefunction<double>& psi) {
    std::string out = "n,re,im\n";
    for (int n = psi.window().first; n <= psi.window().last; ++n) {
        const auto a = psi.at(n);
        out += fmt::format("{},{},{}\n", n, format_real(a.real()), format_real(a.imag()));
    }
    return out;
}

std::string sidecar_json(const Lattice<double>& lattice) {
    return fmt::format("{{\"hbar\": {}, \"mass\": {}, \"mu0\": {}, \"n_min\": {}, \"n_max\": {}}}\n",
                       format_real(lattice.params.hbar()), format_real(lattice.params.mass()),
                       format_real(lattice.params.mu0()), lattice.n_min(), lattice.n_max());
}

LatticeWavefunction<double> parse_wavefunction(std::string_view csv, std::string_view sidecar) {
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(sidecar);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(fmt::format("sidecar: {}", e.what()));
    }
    if (!meta.is_object())
        throw FormatError("sidecar: expected a JSON object");
    for (const char* key : {"hbar", "mass", "mu0", "n_min", "n_max"})
        if (!meta.contains(key))
            throw FormatError(fmt::format("sidecar: missing field '{}'", key));
    for (const char* key : {"hbar", "mass", "mu0"})
        if (!meta[key].is_number())
            throw FormatError(fmt::format("sidecar: field '{}' must be a number", key));
    for (const char* key : {"n_min", "n_max"})
        if (!meta[key].is_number_integer())
            throw FormatError(fmt::format("sidecar: field '{}' must be an integer", key));

    const int n_min = meta["n_min"].get<int>();
    const int n_max = meta["n_max"].get<int>();
    if (n_max < n_min)
        throw FormatError("sidecar: n_max < n_min");
    std::optional<PhysicalParams<double>> params;
    try {
        params.emplace(meta["hbar"].get<double>(), meta["mass"].get<double>(), meta["mu0"].get<double>());
    } catch (const DomainError& e) {
        throw FormatError(fmt::format("sidecar: {}", e.what()));
    }

    const auto lines = lines_of(csv);
    if (lines.empty() || lines.front() != "n,re,im")
        throw FormatError("wavefunction csv: header must be 'n,re,im'");
    const int sites = n_max - n_min + 1;
    if (static_cast<long>(lines.size()) - 1 != sites)
        throw FormatError(fmt::format("wavefunction csv: expected {} rows for sites {}..{}, found {}", sites, n_min,
                                      n_max, lines.size() - 1));

    LatticeWavefunction<double> psi(Lattice<double>(*params, n_min, n_max));
    for (int row = 0; row < sites; ++row) {
        const auto fields = split(lines[row + 1], ',');
        const auto where = fmt::format("wavefunction csv line {}", row + 2);
        if (fields.size() != 3)
            throw FormatError(where + ": expected 3 fields");
        const int n = parse_int(fields[0], where);
        if (n != n_min + row)
            throw FormatError(fmt::format("{}: site {} out of order (expected {})", where, n, n_min + row));
        psi[n] = {parse_real(fields[1], where), parse_real(fields[2], where)};
    }
    return psi;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw UsageError(fmt::format("cannot write '{}'", path.string()));
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            std::filesystem::remove(tmp);
            throw UsageError(fmt::format("cannot write '{}'", path.string()));
        }
    }
    std::filesystem::rename(tmp, path);
}

LatticeWavefunction<double> read_wavefunction(const std::filesystem::path& csv_path) {
    const auto meta = sidecar_path(csv_path);
    if (!std::filesystem::exists(meta))
        throw FormatError(fmt::format("missing sidecar metadata '{}'", meta.string()));
    return parse_wavefunction(read_file(csv_path), read_file(meta));
}

void write_wavefunction(const std::filesystem::path& csv_path, const LatticeWavefunction<double>& psi) {
    const auto meta = sidecar_path(csv_path);
    if (meta == csv_path)
        throw UsageError("wavefunction path must not end in .json");
    write_file(csv_path, wavefunction_csv(psi));
    write_file(meta, sidecar_json(psi.lattice()));
}

} // namespace polyprop::io
