// Acceptance suite: one PASS/FAIL line per criterion. Criterion 9 carries a
// logged stretch measurement that never affects the exit status.
//
// CHP_STRETCH_TRIALS sets the number of shakes in the stretch run (default 2).

#include "chp/builder.hpp"
#include "chp/dna.hpp"
#include "chp/error.hpp"
#include "chp/io.hpp"
#include "chp/optimizer.hpp"
#include "chp/validation.hpp"
#include "table_data.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace chp;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
    if (!ok && o.pass) o.detail = what;
    o.pass = o.pass && ok;
}

std::string real(double x, const char* fmt = "%.3g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

std::string letters_of(const BorderSolution& border) {
    std::string out;
    for (int l : border.letter_of_ring) out.push_back(static_cast<char>('a' + l));
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome tables() {
    Outcome o;
    const auto rows = test_data::load_tables();
    int enumerated = 0;
    for (const auto& g : rows) {
        const std::string tag = "sigma=" + std::to_string(g.sigma) + " k=" + std::to_string(g.k);
        const auto r = table_row(g.sigma, g.k, 2520);
        require(o, r.building_blocks == g.building_blocks, tag + " building blocks");
        require(o, r.degeneracies == g.degeneracies, tag + " degeneracies");
        require(o, r.eta == g.eta, tag + " eta");
        require(o, r.n_vertices == g.n_v, tag + " n_V");
        require(o, r.k_mod == g.k_mod, tag + " k mod sigma/6");
        require(o, r.formula_count == std::to_string(g.formula), tag + " formula count");
        require(o, std::to_string(g.independent) == r.formula_count, tag + " table count");
        if (g.formula <= 2520) {
            ++enumerated;
            require(o, r.enumerated_count == g.independent, tag + " enumeration");
        }
    }
    o.detail = o.pass ? std::to_string(rows.size()) + " rows, " + std::to_string(enumerated) + " enumerated" : o.detail;
    return o;
}

Outcome dodecagon() {
    Outcome o;
    const long long expected[] = {1, 3, 3, 15, 10, 70, 35, 315, 126};
    for (int k = 2; k <= 10; ++k) {
        long long fact = 1;
        for (int i = 2; i <= k; ++i) fact *= i;
        long long half = 1;
        for (int i = 2; i <= k / 2; ++i) half *= i;
        const long long closed = fact / (2 * half * half);
        const auto count = count_configurations(count_input(solve_border(12, k)));
        require(o, closed == expected[k - 2], "closed form k=" + std::to_string(k));
        require(o, count == closed, "count k=" + std::to_string(k));
    }
    if (o.pass) o.detail = "k=2..10 match 1,3,3,15,10,70,35,315,126";
    return o;
}

Outcome densities() {
    Outcome o;
    double worst = 0.0;
    const double d23 = chp_density(12, 23);
    require(o, std::abs(d23 - 0.8368374943) <= 1e-9, "sigma=12 k=23 is " + real(d23, "%.12g"));
    require(o, std::abs(chp_density(12, 7) - (0.838209 - 0.0109501)) <= 1e-5, "sigma=12 k=7");
    for (const auto& g : test_data::load_tables()) {
        if ((6 * g.k) % g.sigma != 0) continue;
        const double diff = std::abs(chp_density_full_vertex(g.sigma, g.k) - chp_density(g.sigma, g.k));
        worst = std::max(worst, diff);
        require(o, diff <= 1e-12, "full vertex sigma=" + std::to_string(g.sigma) + " k=" + std::to_string(g.k));
    }
    for (int k = 1; k <= 10; ++k) {
        const double hex = 3.0 * k * (k + 1) + 1;
        const double h6 = std::abs(chp_density_hexagon(k) - chp_density(6, k));
        const double s = std::sin(pi / (6.0 * k));
        const double circle = hex * s * s / ((1 + s) * (1 + s));
        const double hc = std::abs(chp_density_circle(k) - circle) + std::abs(chp_density(kCircle, k) - circle);
        worst = std::max({worst, h6, hc});
        require(o, h6 <= 1e-12, "hexagon k=" + std::to_string(k));
        require(o, hc <= 1e-12, "circle k=" + std::to_string(k));
    }
    if (o.pass) o.detail = "rho(12,23)=" + real(d23, "%.12g") + ", worst closed-form gap " + real(worst);
    return o;
}

Outcome builder_soundness() {
    Outcome o;
    const std::pair<int, int> cases[] = {{12, 1}, {12, 2}, {12, 3}, {12, 4}, {18, 1}, {18, 2}, {18, 3}, {18, 4}, {12, 5}};
    int built = 0;
    for (const auto& [sigma, k] : cases) {
        const auto border = solve_border(sigma, k);
        const std::string tag = "sigma=" + std::to_string(sigma) + " k=" + std::to_string(k);
        std::vector<PackingConfiguration> configs;
        for (const auto& dna : enumerate_dnas(border)) {
            const auto c = build_chp(border, dna);
            const auto report = validate(c, 1e-9);
            require(o, report.is_valid, tag + " " + dna.letters + " invalid");
            require(o, report.symmetry_residual < 1e-9, tag + " " + dna.letters + " symmetry");
            require(o, std::abs(report.min_distance - border.d) <= 1e-10, tag + " " + dna.letters + " min distance");
            require(o, std::abs(report.density - chp_density(sigma, k)) <= 1e-12, tag + " " + dna.letters + " density");
            require(o, extract_dna(c, sigma, k).letters == dna.letters, tag + " " + dna.letters + " round trip");
            for (const auto& other : configs) require(o, !equivalent(c, other, 1e-9), tag + " " + dna.letters + " duplicate");
            configs.push_back(c);
            ++built;
        }
    }
    if (o.pass) o.detail = std::to_string(built) + " configurations";
    return o;
}

Outcome sum_rules() {
    Outcome o;
    double worst = 0.0;
    for (int sigma = 6; sigma <= 96; sigma += 6) {
        for (int k = 1; k <= 10; ++k) {
            const auto border = solve_border(sigma, k);
            const auto dna = make_dna(border, letters_of(border));
            double phi = 0.0;
            double xi = 0.0;
            for (double p : border.phi) phi += p;
            for (double x : dna.xi) xi += x;
            const double e1 = std::abs(phi - k * pi * (1.0 / 6 - 1.0 / sigma));
            const double e2 = std::abs(xi - k * pi * (0.5 - 1.0 / sigma));
            worst = std::max({worst, e1, e2});
            require(o, e1 <= 1e-10 && e2 <= 1e-10, "sigma=" + std::to_string(sigma) + " k=" + std::to_string(k));
        }
    }
    if (o.pass) o.detail = "worst " + real(worst);
    return o;
}

Outcome circle_limit() {
    Outcome o;
    const long long counts[] = {1, 1, 1, 3, 12, 60, 360, 2520};
    double worst = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double gap = std::abs(chp_density(999996, k) - chp_density(kCircle, k));
        worst = std::max(worst, gap);
        require(o, gap <= 1e-4, "density k=" + std::to_string(k));
        require(o, count_configurations(count_input(solve_border(kCircle, k))) == counts[k - 1], "count k=" + std::to_string(k));
    }
    if (o.pass) o.detail = "sigma=999996, worst gap " + real(worst);
    return o;
}

Outcome gradient() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    double worst = 0.0;
    for (double s : {2.0, 10.0, 100.0}) {
        for (int trial = 0; trial < 50; ++trial) {
            Centers x(2, 10);
            for (Eigen::Index i = 0; i < 10; ++i) x.col(i) = Point2(u(rng), u(rng));
            const double dmin = packing_radius(x);
            const double lambda = dmin * dmin;
            const Centers g = energy_gradient(x, s, lambda);
            Centers fd(2, 10);
            const double h = 1e-6 * dmin;
            for (Eigen::Index i = 0; i < 10; ++i) {
                for (int a = 0; a < 2; ++a) {
                    Centers plus = x;
                    Centers minus = x;
                    plus(a, i) += h;
                    minus(a, i) -= h;
                    fd(a, i) = (energy(plus, s, lambda) - energy(minus, s, lambda)) / (2 * h);
                }
            }
            worst = std::max(worst, (g - fd).norm() / fd.norm());
        }
    }
    require(o, worst < 1e-5, "relative error " + real(worst));
    if (o.pass) o.detail = "worst relative error " + real(worst);
    return o;
}

Outcome recovery() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const double target = chp_density(12, 3);
    int hits = 0;
    double best = -1.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizerParams params;
        params.seed = seed;
        const auto guided = seed_guided(12, 3, 0.05 + 0.02 * static_cast<double>(seed), 0.9);
        const auto out = algorithm2(guided.config, params, guided.pins, 0);
        const double rho = density(out);
        best = std::max(best, rho);
        if (std::abs(rho - target) <= 1e-6) ++hits;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(o, hits >= 1, "no trial within 1e-6, best " + real(best, "%.10f"));
    require(o, seconds < 300.0, "took " + real(seconds) + " s");
    if (o.pass) o.detail = std::to_string(hits) + "/20 trials within 1e-6, " + real(seconds) + " s";
    return o;
}

Outcome shake_monotone(std::string& stretch) {
    Outcome o;
    // Monotone acceptance on a smaller system, every trial checked.
    OptimizerParams params;
    params.seed = 9;
    auto guided = seed_guided(12, 3, 0.3, 0.9);
    auto current = guided.config;
    double previous = packing_radius(current);
    for (std::uint64_t t = 0; t < 5; ++t) {
        current = algorithm2(current, params, guided.pins, t);
        const double now = packing_radius(current);
        require(o, now >= previous, "trial " + std::to_string(t) + " decreased");
        previous = now;
    }

    // Stretch: shakes of the sigma=24 k=6 CHP configuration; logged, never gating.
    int trials = 2;
    if (const char* env = std::getenv("CHP_STRETCH_TRIALS")) trials = std::max(0, std::atoi(env));
    const auto border = solve_border(24, 6);
    auto config = build_chp(border, canonicalize_dna(make_dna(border, letters_of(border)), border).dna);
    const double chp = chp_density(24, 6);
    double rho = density(config);
    const auto start = std::chrono::steady_clock::now();
    OptimizerParams stretch_params;
    for (int t = 0; t < trials; ++t) {
        const double before = rho;
        config = algorithm2(config, stretch_params, {}, static_cast<std::uint64_t>(t));
        rho = density(config);
        require(o, rho >= before, "stretch trial " + std::to_string(t) + " decreased");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    stretch = std::string(rho > chp ? "exceeded" : "did not exceed") + " rho_CHP(24,6)=" + real(chp, "%.10f") + " after " +
              std::to_string(trials) + " of 200 trials (best " + real(rho, "%.10f") + ", " + real(seconds) + " s)";
    if (o.pass) o.detail = "accepted density never decreased";
    return o;
}

Outcome golden() {
    Outcome o;
    const auto a = config_to_json(build_chp(12, 2, "ab"));
    const auto b = config_to_json(build_chp(12, 2, "ab"));
    require(o, a == b, "two builds differ");
    require(o, a == slurp(std::string(CHP_TEST_DATA) + "/build_12_2.json"), "JSON differs from golden file");
    SvgOptions options;
    options.contacts = true;
    options.fundamental_domain = true;
    const auto svg = render_svg(config_from_json(a), options);
    require(o, svg == slurp(std::string(CHP_TEST_DATA) + "/build_12_2.svg"), "SVG differs from golden file");
    if (o.pass) o.detail = "JSON and SVG byte-identical";
    return o;
}

}  // namespace

int main() {
    std::string stretch;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"tables reproduction", tables},
        {"dodecagon closed form", dodecagon},
        {"density constants", densities},
        {"builder soundness", builder_soundness},
        {"angle sum rules", sum_rules},
        {"circle limit", circle_limit},
        {"gradient correctness", gradient},
        {"stochastic recovery", recovery},
        {"shake monotonicity", [&] { return shake_monotone(stretch); }},
        {"golden build output", golden},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), seconds);
        if (!o.pass) ++failures;
        if (i + 1 == 9) std::printf("INFO criterion 9 stretch (not gating): %s\n", stretch.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
