// chp-pack: command-line front end. Exit codes: 0 success, 2 bad arguments,
// 3 computation error or invalid configuration. Errors go to stderr as JSON.

#include "chp/builder.hpp"
#include "chp/dna.hpp"
#include "chp/error.hpp"
#include "chp/io.hpp"
#include "chp/optimizer.hpp"
#include "chp/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitBadArguments = 2;
constexpr int kExitComputation = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int fail(const std::string& kind, const std::string& message, int code) {
    nlohmann::ordered_json err;
    err["error"] = kind;
    err["message"] = message;
    err["exit_code"] = code;
    std::cerr << err.dump() << "\n";
    return code;
}

int parse_sigma(const std::string& text) {
    if (text == "circle") return chp::kCircle;
    std::size_t used = 0;
    int sigma = 0;
    try {
        sigma = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || sigma < 6) throw UsageError("--sigma must be a multiple of 6 or 'circle', got '" + text + "'");
    if (sigma % 6 != 0) throw UsageError("--sigma must be a multiple of 6, got " + text);
    return sigma;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::vector<int> parse_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_sigma(item));
    if (out.empty()) throw UsageError("--sigma-list is empty");
    return out;
}

chp::PinSet border_pins(const chp::PackingConfiguration& config) {
    chp::PinSet pins;
    chp::PolygonSpec inner = config.polygon;
    inner.delta = 0.0;
    const double tol = 1e-9 * config.diameter;
    for (Eigen::Index i = 0; i < config.size(); ++i) {
        if (chp::containment_violation<double>(inner, config.centers.col(i)) >= -tol) pins.indices.insert(i);
    }
    return pins;
}

std::string real12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curved hexagonal packings of disks in regular polygons and circles"};
    app.require_subcommand(1);

    std::string sigma_text;
    int k = 1;
    const auto add_sigma_k = [&](CLI::App* sub) {
        sub->add_option("--sigma", sigma_text, "Number of polygon sides (multiple of 6) or 'circle'")->required();
        sub->add_option("--k", k, "Number of shells")->required()->check(CLI::PositiveNumber);
    };

    auto* solve = app.add_subcommand("solve", "Border chain and diameter as JSON");
    add_sigma_k(solve);

    auto* dens = app.add_subcommand("density", "Packing fraction of the CHP configurations");
    add_sigma_k(dens);

    auto* count = app.add_subcommand("count", "Number of inequivalent CHP configurations");
    add_sigma_k(count);

    std::size_t limit = 100000;
    auto* enumerate = app.add_subcommand("enumerate", "Canonical DNA of every inequivalent configuration");
    add_sigma_k(enumerate);
    enumerate->add_option("--limit", limit, "Refuse to enumerate more than this many")->check(CLI::PositiveNumber);

    std::string dna_text;
    std::string output;
    auto* build = app.add_subcommand("build", "Construct a CHP configuration");
    add_sigma_k(build);
    build->add_option("--dna", dna_text, "Letters a, b, ... (default: first canonical DNA)");
    build->add_option("-o,--output", output, "Output file (default: stdout)");

    std::string sigma_list = "12,18,24,30,36,42,48,54,60";
    int k_max = 8;
    std::size_t enumerate_cap = 100000;
    auto* tables = app.add_subcommand("tables", "Classification tables as CSV");
    tables->add_option("--sigma-list", sigma_list, "Comma-separated sides");
    tables->add_option("--k-max", k_max, "Largest shell count")->check(CLI::PositiveNumber);
    tables->add_option("--enumerate-cap", enumerate_cap, "Enumerate only rows with at most this many configurations");
    tables->add_option("-o,--output", output, "Output file (default: stdout)");

    int n_disks = 0;
    std::uint64_t seed = 0;
    int trials = 1;
    chp::OptimizerParams params;
    const auto add_schedule = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--trials", trials, "Independent trials")->check(CLI::PositiveNumber);
        sub->add_option("--s-initial", params.s_initial, "First exponent of the ladder");
        sub->add_option("--s-factor", params.s_factor, "Ratio between rungs");
        sub->add_option("--s-final", params.s_final, "Last exponent of the ladder");
        sub->add_option("-o,--output", output, "Output file (default: stdout)");
    };
    auto* pack = app.add_subcommand("pack", "Random starts followed by the energy ladder");
    pack->add_option("--sigma", sigma_text, "Number of polygon sides (multiple of 6) or 'circle'")->required();
    pack->add_option("--n", n_disks, "Number of disks")->required()->check(CLI::PositiveNumber);
    add_schedule(pack);

    std::string input;
    std::string pin = "none";
    std::string csv_path;
    auto* shake = app.add_subcommand("shake", "Perturb and re-minimize, keeping improvements");
    shake->add_option("-i,--input", input, "Configuration file")->required();
    shake->add_option("--pin", pin, "Disks held fixed")->check(CLI::IsMember({"none", "border"}));
    shake->add_option("--amplitude", params.perturb_amplitude, "Kick radius as a fraction of the minimum distance");
    shake->add_option("--progress", csv_path, "Density-vs-rung CSV (default: stdout)");
    add_schedule(shake);

    double tol = 1e-9;
    auto* validate = app.add_subcommand("validate", "Check separation and containment; exit 0 iff valid");
    validate->add_option("-i,--input", input, "Configuration file")->required();
    validate->add_option("--tol", tol, "Relative tolerance")->check(CLI::PositiveNumber);

    chp::SvgOptions svg;
    auto* render = app.add_subcommand("render", "SVG diagram of a configuration");
    render->add_option("-i,--input", input, "Configuration file")->required();
    render->add_option("-o,--output", output, "Output file (default: stdout)");
    render->add_flag("--contacts", svg.contacts, "Draw contact edges");
    render->add_flag("--fundamental", svg.fundamental_domain, "Shade the fundamental sector");
    render->add_option("--size", svg.size, "Width and height in pixels")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kExitBadArguments);
    }

    try {
        if (solve->parsed()) {
            std::cout << chp::border_to_json(chp::solve_border(parse_sigma(sigma_text), k));
        } else if (dens->parsed()) {
            std::cout << real12(chp::chp_density(parse_sigma(sigma_text), k)) << "\n";
        } else if (count->parsed()) {
            const auto border = chp::solve_border(parse_sigma(sigma_text), k);
            std::cout << chp::count_configurations(chp::count_input(border)).str() << "\n";
        } else if (enumerate->parsed()) {
            for (const auto& dna : chp::enumerate_dnas(parse_sigma(sigma_text), k, limit)) std::cout << dna.letters << "\n";
        } else if (build->parsed()) {
            const auto border = chp::solve_border(parse_sigma(sigma_text), k);
            std::string letters = dna_text;
            if (letters.empty()) {
                for (int l : border.letter_of_ring) letters.push_back(static_cast<char>('a' + l));
            }
            auto dna = chp::make_dna(border, letters);
            if (dna_text.empty()) dna = chp::canonicalize_dna(dna, border).dna;
            emit(chp::config_to_json(chp::build_chp(border, dna)), output);
        } else if (tables->parsed()) {
            std::vector<chp::TableRow> rows;
            for (int sigma : parse_list(sigma_list)) {
                for (int kk = 1; kk <= k_max; ++kk) rows.push_back(chp::table_row(sigma, kk, enumerate_cap));
            }
            emit(chp::tables_to_csv(rows), output);
        } else if (pack->parsed()) {
            params.seed = seed;
            params.validate();
            emit(chp::config_to_json(chp::algorithm1(parse_sigma(sigma_text), n_disks, params, trials)), output);
        } else if (shake->parsed()) {
            params.seed = seed;
            params.validate();
            auto config = chp::read_config(input);
            const auto pins = pin == "border" ? border_pins(config) : chp::PinSet{};
            std::ofstream csv_file;
            if (!csv_path.empty()) {
                csv_file.open(csv_path, std::ios::binary);
                if (!csv_file) throw UsageError("cannot write " + csv_path);
            }
            std::ostream& csv = csv_path.empty() ? std::cout : csv_file;
            csv << "trial,rung,s,min_distance,density,accepted\n";
            for (int t = 0; t < trials; ++t) {
                std::vector<chp::RungReport> rungs;
                const double before = chp::packing_radius(config);
                config = chp::algorithm2(config, params, pins, static_cast<std::uint64_t>(t),
                                         [&](const chp::RungReport& r) { rungs.push_back(r); });
                const int accepted = chp::packing_radius(config) > before ? 1 : 0;
                for (const auto& r : rungs) {
                    csv << t << "," << r.rung << "," << chp::format_real(r.s) << "," << chp::format_real(r.min_distance)
                        << "," << chp::format_real(r.density) << "," << accepted << "\n";
                }
            }
            if (!output.empty()) emit(chp::config_to_json(config), output);
        } else if (validate->parsed()) {
            const auto report = chp::validate(chp::read_config(input), tol);
            std::cout << chp::report_to_json(report);
            if (!report.is_valid) return fail("InvalidConfiguration", "separation or containment violated", kExitComputation);
        } else if (render->parsed()) {
            emit(chp::render_svg(chp::read_config(input), svg), output);
        }
    } catch (const UsageError& e) {
        return fail("usage", e.what(), kExitBadArguments);
    } catch (const chp::Error& e) {
        const bool argument = e.code() == chp::ErrorCode::NotMultipleOfSix ||
                              e.code() == chp::ErrorCode::PreconditionViolated ||
                              e.code() == chp::ErrorCode::InconsistentDna;
        return fail(std::string(chp::to_string(e.code())), e.what(), argument ? kExitBadArguments : kExitComputation);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kExitComputation);
    }
    return 0;
}
