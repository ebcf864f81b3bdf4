#include "polyprop/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "polyprop/continuum.hpp"
#include "polyprop/errors.hpp"
#include "polyprop/io.hpp"
#include "polyprop/propagators.hpp"
#include "polyprop/verify.hpp"

namespace polyprop::cli {

namespace {

using io::format_real;
using json = nlohmann::json;

const std::vector<std::string> systems{"free", "box", "box-images", "periodic"};

bool is_box_like(const std::string& system) { return system != "free"; }

double json_real(const json& v, const char* key) {
    if (!v.is_number())
        throw UsageError(fmt::format("config: '{}' must be a number", key));
    return v.get<double>();
}

int json_int(const json& v, const char* key) {
    if (!v.is_number_integer())
        throw UsageError(fmt::format("config: '{}' must be an integer", key));
    return v.get<int>();
}

std::vector<double> json_reals(const json& v, const char* key) {
    if (v.is_number())
        return {v.get<double>()};
    if (!v.is_array())
        throw UsageError(fmt::format("config: '{}' must be a number or an array of numbers", key));
    std::vector<double> out;
    for (const auto& x : v)
        out.push_back(json_real(x, key));
    return out;
}

IndexRange json_range(const json& v, const char* key) {
    if (v.is_number_integer())
        return IndexRange::single(v.get<int>());
    if (v.is_array() && v.size() == 2)
        return {json_int(v[0], key), json_int(v[1], key)};
    throw UsageError(fmt::format("config: '{}' must be an integer or a [first, last] pair", key));
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv")
        return OutputFormat::csv;
    if (s == "json")
        return OutputFormat::json;
    throw UsageError(fmt::format("unknown format '{}'", s));
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        out << text;
    else
        io::write_file(out_path, text);
}

// ---------------------------------------------------------------------------
// subcommands

std::complex<double> kernel_value(const RunConfig& c, int j, int r, double dt, double z) {
    const auto cutoff = [&] { return c.image_cutoff.value_or(minimal_image_cutoff(c.N, std::abs(z), j, r)); };
    if (c.system == "free")
        return free_kernel(j, r, dt, c.params);
    if (c.system == "box")
        return box_spectral_kernel(j, r, dt, c.N, c.params);
    if (c.system == "box-images")
        return box_images_kernel(j, r, dt, c.N, cutoff(), c.params);
    return periodic_kernel(j, r, dt, c.N, cutoff(), c.params);
}

std::string cmd_kernel(const RunConfig& c) {
    std::string text = c.format == OutputFormat::csv ? "system,j,r,dt,z,re,im\n" : "[\n";
    bool first = true;
    for (double dt : c.times) {
        const double z = dimensionless_time(c.params, dt);
        for (int j = c.j_range.first; j <= c.j_range.last; ++j)
            for (int r = c.r_range.first; r <= c.r_range.last; ++r) {
                const auto k = kernel_value(c, j, r, dt, z);
                if (c.format == OutputFormat::csv) {
                    text += fmt::format("{},{},{},{},{},{},{}\n", c.system, j, r, format_real(dt), format_real(z),
                                        format_real(k.real()), format_real(k.imag()));
                } else {
                    text += fmt::format(
                        "{}  {{\"system\": \"{}\", \"j\": {}, \"r\": {}, \"dt\": {}, \"z\": {}, \"re\": {}, \"im\": {}}}",
                        first ? "" : ",\n", c.system, j, r, format_real(dt), format_real(z), format_real(k.real()),
                        format_real(k.imag()));
                    first = false;
                }
            }
    }
    if (c.format == OutputFormat::json)
        text += first ? "]\n" : "\n]\n";
    return text;
}

int cmd_evolve(const RunConfig& c, const std::string& in_path, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        throw UsageError("evolve: --out is required");
    if (c.times.size() != 1)
        throw UsageError("evolve: exactly one --dt is required");
    const auto psi0 = io::read_wavefunction(in_path);
    const auto& p = psi0.params();
    if (c.params_given && !(c.params == p))
        throw UsageError("evolve: hbar/mass/mu0 conflict with the state's sidecar metadata");

    const double dt = c.times.front();
    const double z = std::abs(dimensionless_time(p, dt));
    IndexRange window = psi0.window();
    std::optional<PropagatorKernel<double>> kernel;
    if (c.system == "free") {
        kernel = PropagatorKernel<double>::free(p);
        window = window.expanded(z == 0 ? 0 : truncation_window(z));
    } else if (c.system == "box") {
        kernel = PropagatorKernel<double>::box_spectral(c.N, p);
        window = IndexRange(0, c.N);
    } else if (c.system == "box-images") {
        kernel = PropagatorKernel<double>::box_images(c.N, c.image_cutoff.value_or(minimal_image_cutoff(c.N, z, c.N, c.N)), p);
        window = IndexRange(0, c.N);
    } else {
        const int reach = std::max(std::abs(window.first), std::abs(window.last));
        window = IndexRange(0, 2 * c.N - 1);
        kernel = PropagatorKernel<double>::periodic(
            c.N, c.image_cutoff.value_or(minimal_image_cutoff(c.N, z, 2 * c.N - 1, reach)), p);
    }

    const auto psi = evolve(psi0, *kernel, dt, window);
    io::write_wavefunction(out_path, psi);
    out << "norm_before=" << format_real(psi0.norm()) << "\n";
    out << "norm_after=" << format_real(psi.norm()) << "\n";
    return exit_ok;
}

int cmd_verify(const RunConfig& c, const std::string& suite, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
    VerifyOptions options;
    options.params = c.params;
    options.N = c.N;
    options.seed = c.seed;
    options.tolerance_overrides = c.tolerance_overrides;
    const auto results = run_suite(suite, options);

    std::string text = c.format == OutputFormat::csv ? "suite,property,max_deviation,comparison,tolerance,status\n"
                                                     : "[\n";
    bool all_pass = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const char* status = r.passed() ? "pass" : "fail";
        const char* cmp = r.strict ? "<" : "<=";
        if (c.format == OutputFormat::csv)
            text += fmt::format("{},{},{},{},{},{}\n", r.suite, r.property, format_real(r.max_deviation), cmp,
                                format_real(r.tolerance), status);
        else
            text += fmt::format("  {{\"suite\": \"{}\", \"property\": \"{}\", \"max_deviation\": {}, \"comparison\": "
                                "\"{}\", \"tolerance\": {}, \"status\": \"{}\"}}{}\n",
                                r.suite, r.property, format_real(r.max_deviation), cmp, format_real(r.tolerance),
                                status, i + 1 < results.size() ? "," : "");
        if (!r.passed()) {
            all_pass = false;
            err << fmt::format("FAIL {}: max deviation {} not {} tolerance {} at {}\n", r.key(),
                               format_real(r.max_deviation), cmp, format_real(r.tolerance), r.where);
        }
    }
    if (c.format == OutputFormat::json)
        text += "]\n";
    emit(text, out_path, out);
    return all_pass ? exit_ok : exit_verification_failure;
}

std::string cmd_sweep(const RunConfig& c) {
    if (c.times.size() != 1)
        throw UsageError("sweep: exactly one --dt is required");
    const auto pts = continuum_sweep(c.dx, c.times.front(), c.mu0_list, c.params.hbar(), c.params.mass());
    const auto orders = empirical_orders(pts);
    std::string text = c.format == OutputFormat::csv ? "mu0,l,z,abs_error,empirical_order\n" : "[\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& pt = pts[i];
        if (c.format == OutputFormat::csv)
            text += fmt::format("{},{},{},{},{}\n", format_real(pt.mu0), pt.l, format_real(pt.z),
                                format_real(pt.abs_error), orders[i] ? format_real(*orders[i]) : "");
        else
            text += fmt::format("  {{\"mu0\": {}, \"l\": {}, \"z\": {}, \"abs_error\": {}, \"empirical_order\": {}}}{}\n",
                                format_real(pt.mu0), pt.l, format_real(pt.z), format_real(pt.abs_error),
                                orders[i] ? format_real(*orders[i]) : "null", i + 1 < pts.size() ? "," : "");
    }
    if (c.format == OutputFormat::json)
        text += "]\n";
    return text;
}

} // namespace

IndexRange parse_index_range(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        return IndexRange::single(io::parse_int(text, "index range"));
    const IndexRange r(io::parse_int(text.substr(0, colon), "index range"),
                       io::parse_int(text.substr(colon + 1), "index range"));
    if (r.last < r.first)
        throw UsageError(fmt::format("index range '{}' is empty", text));
    return r;
}

RunConfig apply_config_json(std::string_view text, RunConfig c) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError(fmt::format("config: {}", e.what()));
    }
    if (!doc.is_object())
        throw UsageError("config: expected a JSON object");

    double hbar = c.params.hbar(), mass = c.params.mass(), mu0 = c.params.mu0();
    for (const auto& [key, v] : doc.items()) {
        if (key == "system") {
            if (!v.is_string())
                throw UsageError("config: 'system' must be a string");
            c.system = v.get<std::string>();
        } else if (key == "N") {
            c.N = json_int(v, "N");
        } else if (key == "hbar" || key == "mass" || key == "mu0") {
            (key == "hbar" ? hbar : key == "mass" ? mass : mu0) = json_real(v, key.c_str());
            c.params_given = true;
        } else if (key == "dt") {
            c.times = json_reals(v, "dt");
        } else if (key == "format") {
            if (!v.is_string())
                throw UsageError("config: 'format' must be a string");
            c.format = parse_format(v.get<std::string>());
        } else if (key == "seed") {
            if (!v.is_number_unsigned())
                throw UsageError("config: 'seed' must be a nonnegative integer");
            c.seed = v.get<std::uint64_t>();
        } else if (key == "image_cutoff") {
            if (v.is_null())
                c.image_cutoff.reset();
            else
                c.image_cutoff = json_int(v, "image_cutoff");
        } else if (key == "j") {
            c.j_range = json_range(v, "j");
        } else if (key == "r") {
            c.r_range = json_range(v, "r");
        } else if (key == "dx") {
            c.dx = json_real(v, "dx");
        } else if (key == "mu0_list") {
            c.mu0_list = json_reals(v, "mu0_list");
        } else if (key == "tolerance_overrides") {
            if (!v.is_object())
                throw UsageError("config: 'tolerance_overrides' must be an object");
            for (const auto& [name, tol] : v.items())
                c.tolerance_overrides[name] = json_real(tol, "tolerance_overrides");
        } else {
            throw UsageError(fmt::format("config: unknown key '{}'", key));
        }
    }
    try {
        c.params = PhysicalParams<double>(hbar, mass, mu0);
    } catch (const DomainError& e) {
        throw UsageError(fmt::format("config: {}", e.what()));
    }
    return c;
}

void validate(const RunConfig& c) {
    if (std::find(systems.begin(), systems.end(), c.system) == systems.end())
        throw UsageError(fmt::format("unknown system '{}'", c.system));
    if (c.times.empty())
        throw UsageError("at least one dt is required");
    for (double t : c.times)
        if (!std::isfinite(t))
            throw UsageError("dt values must be finite");
    if (c.N < 2)
        throw UsageError("N must be at least 2");
    if (c.image_cutoff && *c.image_cutoff < 1)
        throw UsageError("image_cutoff must be positive");
    if (c.j_range.last < c.j_range.first || c.r_range.last < c.r_range.first)
        throw UsageError("index ranges must be nonempty");
    if (c.mu0_list.empty())
        throw UsageError("mu0_list must be nonempty");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Polymer-quantized lattice propagators", "polyprop"};
    app.require_subcommand(1);

    std::string config_path, system, format, out_path, in_path, suite = "all", j_text, r_text;
    int N = 0, image_cutoff = 0;
    double mu0 = 0, hbar = 0, mass = 0, dx = 0;
    std::uint64_t seed = 0;
    std::vector<double> times, mu0_list;

    auto* opt_config = app.add_option("--config", config_path, "JSON run configuration");
    auto* opt_system = app.add_option("--system", system, "free|box|box-images|periodic");
    auto* opt_N = app.add_option("--N", N, "box / period size in sites");
    auto* opt_mu0 = app.add_option("--mu0", mu0, "lattice spacing");
    auto* opt_hbar = app.add_option("--hbar", hbar);
    auto* opt_mass = app.add_option("--mass", mass);
    auto* opt_dt = app.add_option("--dt", times, "elapsed time(s); repeat or comma-separate")->delimiter(',');
    auto* opt_format = app.add_option("--format", format, "csv|json");
    app.add_option("--out", out_path, "output file (stdout when omitted; required for evolve)");
    auto* opt_cutoff = app.add_option("--image-cutoff", image_cutoff, "image sum cutoff (minimal when omitted)");
    auto* opt_seed = app.add_option("--seed", seed, "seed for sampled verification points");

    auto* kernel = app.add_subcommand("kernel", "tabulate kernel values");
    auto* opt_j = kernel->add_option("--j", j_text, "site index or range first:last");
    auto* opt_r = kernel->add_option("--r", r_text, "site index or range first:last");
    auto* evolve_cmd = app.add_subcommand("evolve", "evolve a wavefunction file");
    evolve_cmd->add_option("--in", in_path, "input wavefunction CSV")->required();
    auto* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("--suite", suite, "bessel|free|box|momentum|continuum|all");
    auto* sweep = app.add_subcommand("sweep", "continuum-limit sweep");
    auto* opt_dx = sweep->add_option("--dx", dx, "fixed separation");
    auto* opt_mu0_list = sweep->add_option("--mu0-list", mu0_list, "lattice spacings")->delimiter(',');
    for (auto* sub : {kernel, evolve_cmd, verify, sweep})
        sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        RunConfig c;
        if (*opt_config)
            c = apply_config_json(io::read_file(config_path), c);
        if (*opt_system)
            c.system = system;
        if (*opt_N)
            c.N = N;
        if (*opt_hbar || *opt_mass || *opt_mu0) {
            c.params = PhysicalParams<double>(*opt_hbar ? hbar : c.params.hbar(), *opt_mass ? mass : c.params.mass(),
                                              *opt_mu0 ? mu0 : c.params.mu0());
            c.params_given = true;
        }
        if (*opt_dt)
            c.times = times;
        if (*opt_format)
            c.format = parse_format(format);
        if (*opt_cutoff)
            c.image_cutoff = image_cutoff;
        if (*opt_seed)
            c.seed = seed;
        if (*opt_j)
            c.j_range = parse_index_range(j_text);
        if (*opt_r)
            c.r_range = parse_index_range(r_text);
        if (*opt_dx)
            c.dx = dx;
        if (*opt_mu0_list)
            c.mu0_list = mu0_list;
        validate(c);
        if (is_box_like(c.system) && *kernel && c.system != "periodic") {
            const IndexRange domain(0, c.N);
            if (!domain.contains(c.j_range) || !domain.contains(c.r_range))
                throw UsageError("kernel: box site indices must lie within 0..N");
        }

        if (*kernel) {
            emit(cmd_kernel(c), out_path, out);
            return exit_ok;
        }
        if (*evolve_cmd)
            return cmd_evolve(c, in_path, out_path, out);
        if (*verify)
            return cmd_verify(c, suite, out_path, out, err);
        emit(cmd_sweep(c), out_path, out);
        return exit_ok;
    } catch (const PreconditionViolation& e) {
        err << "precondition violation: " << e.what() << "\n";
        return exit_precondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

} // namespace polyprop::cli
