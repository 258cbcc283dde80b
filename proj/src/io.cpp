#include "chp/io.hpp"

#include "chp/dna.hpp"
#include "chp/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace chp {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string fixed(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

std::string lambda_rule_name(LambdaRule rule) {
    switch (rule) {
        case LambdaRule::MinDistSq: return "min_dist_sq";
    }
    return "min_dist_sq";
}

std::string params_to_json(const OptimizerParams& p) {
    std::string out = "{";
    out += "\"s_initial\": " + format_real(p.s_initial);
    out += ", \"s_factor\": " + format_real(p.s_factor);
    out += ", \"s_final\": " + format_real(p.s_final);
    out += ", \"lambda_rule\": \"" + lambda_rule_name(p.lambda_rule) + "\"";
    out += ", \"inner_tol\": " + format_real(p.inner_tol);
    out += ", \"max_inner_iters\": " + std::to_string(p.max_inner_iters);
    out += ", \"perturb_amplitude\": " + format_real(p.perturb_amplitude);
    out += ", \"seed\": " + std::to_string(p.seed);
    out += "}";
    return out;
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) field_error(path + key, "missing");
    return *it;
}

double real_field(const json& v, const std::string& field) {
    if (!v.is_number()) field_error(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) field_error(field, "not finite");
    return x;
}

long long int_field(const json& v, const std::string& field) {
    if (!v.is_number_integer()) field_error(field, "expected an integer");
    return v.get<long long>();
}

std::string string_field(const json& v, const std::string& field) {
    if (!v.is_string()) field_error(field, "expected a string");
    return v.get<std::string>();
}

OptimizerParams params_from_json(const json& v) {
    if (!v.is_object()) field_error("provenance.params", "expected an object");
    OptimizerParams p;
    const std::string base = "provenance.params.";
    p.s_initial = real_field(require(v, "s_initial", base), base + "s_initial");
    p.s_factor = real_field(require(v, "s_factor", base), base + "s_factor");
    p.s_final = real_field(require(v, "s_final", base), base + "s_final");
    if (string_field(require(v, "lambda_rule", base), base + "lambda_rule") != "min_dist_sq") {
        field_error(base + "lambda_rule", "unknown rule");
    }
    p.inner_tol = real_field(require(v, "inner_tol", base), base + "inner_tol");
    p.max_inner_iters = static_cast<int>(int_field(require(v, "max_inner_iters", base), base + "max_inner_iters"));
    p.perturb_amplitude = real_field(require(v, "perturb_amplitude", base), base + "perturb_amplitude");
    const auto& seed = require(v, "seed", base);
    if (!seed.is_number_unsigned()) field_error(base + "seed", "expected a non-negative integer");
    p.seed = seed.get<std::uint64_t>();
    return p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int line_of(std::string_view text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace

std::string format_real(double x) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "cannot serialize a non-finite value");
    // "-0" would read back as the integer 0 and lose its sign.
    if (x == 0.0 && std::signbit(x)) return "-0.0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string config_to_json(const PackingConfiguration& config) {
    std::string out = "{\n";
    out += "  \"schema_version\": \"" + std::string(kSchemaVersion) + "\",\n";
    out += "  \"sigma\": " + (config.polygon.is_circle() ? std::string("\"circle\"") : std::to_string(config.sigma())) + ",\n";
    if (config.k) out += "  \"k\": " + std::to_string(*config.k) + ",\n";
    out += "  \"n_disks\": " + std::to_string(config.size()) + ",\n";
    out += "  \"diameter\": " + format_real(config.diameter) + ",\n";
    out += "  \"centers\": [";
    for (Eigen::Index i = 0; i < config.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        out += "    [" + format_real(config.centers(0, i)) + ", " + format_real(config.centers(1, i)) + "]";
    }
    out += config.size() > 0 ? "\n  ],\n" : "],\n";
    if (config.dna) out += "  \"dna\": " + json(*config.dna).dump() + ",\n";
    out += "  \"provenance\": {\"mode\": " + json(config.meta.mode).dump();
    if (config.meta.seed) out += ", \"seed\": " + std::to_string(*config.meta.seed);
    if (config.meta.params) out += ", \"params\": " + params_to_json(*config.meta.params);
    out += "}\n}\n";
    return out;
}

PackingConfiguration config_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "line 1: top level is not an object");
    const auto version = string_field(require(doc, "schema_version", ""), "schema_version");
    if (version != kSchemaVersion) {
        throw Error(ErrorCode::SchemaMismatch, "unsupported schema_version '" + version + "'");
    }

    PackingConfiguration c;
    const auto& sigma = require(doc, "sigma", "");
    if (sigma.is_string()) {
        if (sigma.get<std::string>() != "circle") field_error("sigma", "expected an integer or \"circle\"");
        c.polygon = PolygonSpec::circle();
    } else {
        const long long s = int_field(sigma, "sigma");
        if (s < 3) field_error("sigma", "must be at least 3");
        c.polygon = {static_cast<int>(s), 0.0};
    }
    if (const auto it = doc.find("k"); it != doc.end()) {
        const long long k = int_field(*it, "k");
        if (k < 1) field_error("k", "must be positive");
        c.k = static_cast<int>(k);
    }
    c.diameter = real_field(require(doc, "diameter", ""), "diameter");
    if (!(c.diameter > 0.0)) field_error("diameter", "must be positive");

    const auto& centers = require(doc, "centers", "");
    if (!centers.is_array()) field_error("centers", "expected an array");
    const long long n = int_field(require(doc, "n_disks", ""), "n_disks");
    if (n != static_cast<long long>(centers.size())) {
        field_error("n_disks", "is " + std::to_string(n) + " but centers has " + std::to_string(centers.size()) + " entries");
    }
    c.centers.resize(2, static_cast<Eigen::Index>(centers.size()));
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const std::string field = "centers[" + std::to_string(i) + "]";
        const auto& p = centers[i];
        if (!p.is_array() || p.size() != 2) field_error(field, "expected [x, y]");
        c.centers(0, static_cast<Eigen::Index>(i)) = real_field(p[0], field + "[0]");
        c.centers(1, static_cast<Eigen::Index>(i)) = real_field(p[1], field + "[1]");
    }
    if (const auto it = doc.find("dna"); it != doc.end()) c.dna = string_field(*it, "dna");

    const auto& prov = require(doc, "provenance", "");
    if (!prov.is_object()) field_error("provenance", "expected an object");
    c.meta.mode = string_field(require(prov, "mode", "provenance."), "provenance.mode");
    if (c.meta.mode != "deterministic" && c.meta.mode != "algorithm1" && c.meta.mode != "algorithm2") {
        field_error("provenance.mode", "unknown mode '" + c.meta.mode + "'");
    }
    if (const auto it = prov.find("seed"); it != prov.end()) {
        if (!it->is_number_unsigned()) field_error("provenance.seed", "expected a non-negative integer");
        c.meta.seed = it->get<std::uint64_t>();
    }
    if (const auto it = prov.find("params"); it != prov.end()) c.meta.params = params_from_json(*it);
    return c;
}

void write_config(const PackingConfiguration& config, const std::filesystem::path& path) {
    const std::string text = config_to_json(config);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::PreconditionViolated, "cannot write " + path.string());
    out << text;
}

PackingConfiguration read_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return config_from_json(text);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string border_to_json(const BorderSolution& border) {
    ordered out;
    out["sigma"] = border.sigma == kCircle ? ordered("circle") : ordered(border.sigma);
    out["k"] = border.k;
    out["d"] = border.d;
    out["phi"] = border.phi;
    ordered chain = ordered::array();
    for (const auto& p : border.chain) chain.push_back({p.x(), p.y()});
    out["chain"] = chain;
    out["building_blocks"] = border.building_blocks();
    out["degeneracies"] = border.degeneracies;
    out["n_vertices"] = border.n_vertices;
    out["eta"] = border.eta;
    out["density"] = chp_density(border.sigma, border.k);
    return out.dump(2) + "\n";
}

std::string report_to_json(const ValidationReport& report) {
    ordered out;
    out["is_valid"] = report.is_valid;
    out["min_distance"] = report.min_distance;
    out["worst_containment_violation"] = report.worst_containment_violation;
    out["density"] = report.density;
    out["symmetry_residual"] = report.symmetry_residual;
    ordered hist = ordered::object();
    for (const auto& [contacts, count] : report.contact_count_histogram) hist[std::to_string(contacts)] = count;
    out["contact_count_histogram"] = hist;
    return out.dump(2) + "\n";
}

TableRow table_row(int sigma, int k, std::size_t enumerate_cap) {
    const auto border = solve_border(sigma, k);
    const auto count = count_configurations(count_input(border));
    TableRow row;
    row.sigma = sigma;
    row.k = k;
    row.building_blocks = border.building_blocks();
    row.degeneracies = border.degeneracies;
    row.eta = border.eta;
    row.n_vertices = border.n_vertices;
    row.k_mod = sigma == kCircle ? k : k % (sigma / 6);
    row.formula_count = count.str();
    if (count <= enumerate_cap) row.enumerated_count = static_cast<long long>(enumerate_dnas(border, enumerate_cap).size());
    return row;
}

std::string tables_to_csv(const std::vector<TableRow>& rows) {
    std::string out = "sigma,k,building_blocks,degeneracies,eta,n_v,k_mod,independent,formula\n";
    for (const auto& r : rows) {
        std::string degs;
        for (std::size_t i = 0; i < r.degeneracies.size(); ++i) degs += (i ? " " : "") + std::to_string(r.degeneracies[i]);
        out += (r.sigma == kCircle ? std::string("circle") : std::to_string(r.sigma)) + "," + std::to_string(r.k) + "," +
               std::to_string(r.building_blocks) + "," + degs + "," + std::to_string(r.eta) + "," +
               std::to_string(r.n_vertices) + "," + std::to_string(r.k_mod) + "," +
               (r.enumerated_count >= 0 ? std::to_string(r.enumerated_count) : std::string()) + "," + r.formula_count +
               "\n";
    }
    return out;
}

std::string render_svg(const PackingConfiguration& config, const SvgOptions& options) {
    const double r = 0.5 * config.diameter;
    PolygonSpec outline = config.polygon;
    outline.delta = r;
    const bool circle = outline.is_circle();
    const auto vs = vertices(outline);
    const double extent = circle ? apothem(outline) : vs.front().norm();
    const double half = 0.5 * options.size;
    const double scale = half / (1.02 * extent);
    const auto px = [&](const Point2& p) { return fixed(half + scale * p.x()) + "," + fixed(half - scale * p.y()); };
    const auto attr = [&](const char* name, double v) { return std::string(" ") + name + "=\"" + fixed(v) + "\""; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\"" + attr("width", options.size) +
                      attr("height", options.size) + " viewBox=\"0 0 " + fixed(options.size) + " " + fixed(options.size) +
                      "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (options.fundamental_domain) {
        out += "<path class=\"fundamental\" fill=\"#dde6f0\" stroke=\"none\" d=\"M " + px(Point2::Zero());
        if (circle) {
            const double a0 = fundamental_angle(kCircle);
            const Point2 from = extent * Point2(std::cos(a0), std::sin(a0));
            const Point2 to = rotate<double>(from, std::numbers::pi / 3.0);
            out += " L " + px(from) + " A " + fixed(scale * extent) + " " + fixed(scale * extent) + " 0 0 0 " + px(to);
        } else {
            for (int i = 0; i <= outline.sigma / 6; ++i) out += " L " + px(vs[static_cast<std::size_t>(i)]);
        }
        out += " Z\"/>\n";
    }

    if (circle) {
        out += "<circle class=\"container\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"" + attr("cx", half) +
               attr("cy", half) + attr("r", scale * extent) + "/>\n";
    } else {
        out += "<polygon class=\"container\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? " " : "") + px(vs[i]);
        out += "\"/>\n";
    }

    out += "<g fill=\"#9ecae1\" stroke=\"#08519c\" stroke-width=\"0.75\">\n";
    for (Eigen::Index i = 0; i < config.size(); ++i) {
        const Point2 c = config.centers.col(i);
        out += "<circle class=\"disk\"" + attr("cx", half + scale * c.x()) + attr("cy", half - scale * c.y()) +
               attr("r", scale * r) + "/>\n";
    }
    out += "</g>\n";

    if (options.contacts) {
        out += "<g stroke=\"#d62728\" stroke-width=\"1\">\n";
        for (const auto& [i, j] : pairs_within(config.centers, config.diameter * (1.0 + 1e-6))) {
            const Point2 a = config.centers.col(i);
            const Point2 b = config.centers.col(j);
            out += "<line class=\"contact\"" + attr("x1", half + scale * a.x()) + attr("y1", half - scale * a.y()) +
                   attr("x2", half + scale * b.x()) + attr("y2", half - scale * b.y()) + "/>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace chp
