#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chp/builder.hpp"
#include "chp/error.hpp"
#include "chp/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace chp;
using std::numbers::pi;

namespace {

PackingConfiguration rotated(const PackingConfiguration& c, double angle) {
    PackingConfiguration out = c;
    for (Eigen::Index i = 0; i < c.size(); ++i) out.centers.col(i) = rotate<double>(c.centers.col(i), angle);
    return out;
}

PackingConfiguration mirrored(const PackingConfiguration& c, double axis) {
    PackingConfiguration out = c;
    for (Eigen::Index i = 0; i < c.size(); ++i) out.centers.col(i) = reflect<double>(c.centers.col(i), axis);
    return out;
}

PackingConfiguration hex_lattice(int sigma, int k, double d) {
    PackingConfiguration c;
    c.polygon = {sigma, 0.0};
    c.diameter = d;
    std::vector<Point2> pts;
    for (int i = -k; i <= k; ++i) {
        for (int j = -k; j <= k; ++j) {
            if (std::abs(i + j) <= k) pts.push_back(d * Point2(i + 0.5 * j, j * std::sqrt(3.0) / 2));
        }
    }
    c.centers.resize(2, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) c.centers.col(static_cast<Eigen::Index>(i)) = pts[i];
    return c;
}

// Every distinct ordering of the building blocks, built and grouped by geometric equivalence.
std::size_t geometric_classes(int sigma, int k) {
    const auto border = solve_border(sigma, k);
    std::string letters;
    for (int l : border.letter_of_ring) letters.push_back(static_cast<char>('a' + l));
    std::vector<PackingConfiguration> reps;
    do {
        const auto c = build_chp(border, make_dna(border, letters));
        const bool known = std::any_of(reps.begin(), reps.end(), [&](const auto& r) { return equivalent(r, c, 1e-9); });
        if (!known) reps.push_back(c);
    } while (std::next_permutation(letters.begin(), letters.end()));
    return reps.size();
}

}  // namespace

TEST_CASE("packing_radius") {
    Centers two(2, 2);
    two << 0.0, 0.5, 0.0, 0.0;
    CHECK(packing_radius(two) == doctest::Approx(0.5));
    CHECK(packing_radius(hex_lattice(6, 1, 0.3).centers) == doctest::Approx(0.3));
    CHECK(std::abs(packing_radius(build_chp(12, 3, "abc")) - solve_border(12, 3).d) < 1e-10);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Centers c(2, 400);
        for (Eigen::Index i = 0; i < c.cols(); ++i) c.col(i) = Point2(u(rng), u(rng));
        double brute = INFINITY;
        for (Eigen::Index i = 0; i < c.cols(); ++i) {
            for (Eigen::Index j = i + 1; j < c.cols(); ++j) brute = std::min(brute, (c.col(i) - c.col(j)).norm());
        }
        CHECK(packing_radius(c) == brute);
    }
    const auto big = build_chp(12, 10, "aaaaabbbbb");
    CHECK(std::abs(packing_radius(big) - solve_border(12, 10).d) < 1e-10);
}

TEST_CASE("density of built configurations") {
    const auto border = solve_border(12, 23);
    std::string letters;
    for (int l : border.letter_of_ring) letters.push_back(static_cast<char>('a' + l));
    const auto c = build_chp(border, make_dna(border, letters));
    CHECK(std::abs(density(c) - 0.8368374943) < 1e-9);
    CHECK(std::abs(density(build_chp(6, 1, "a")) - chp_density_hexagon(1)) < 1e-12);

    for (int sigma : {12, 18}) {
        for (int k = 1; k <= 4; ++k) {
            for (const auto& dna : enumerate_dnas(sigma, k)) {
                CHECK(std::abs(density(build_chp(sigma, k, dna.letters)) - chp_density(sigma, k)) < 1e-12);
            }
        }
    }

    // One disk: direct ratio of areas against the shoelace polygon.
    PackingConfiguration single;
    single.polygon = {6, 0.0};
    single.diameter = 2.0 * std::cos(pi / 6);
    single.centers = Centers::Zero(2, 1);
    const double r = 0.5 * single.diameter;
    const auto vs = vertices(PolygonSpec{6, r});
    double twice = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        twice += vs[i].x() * vs[(i + 1) % vs.size()].y() - vs[(i + 1) % vs.size()].x() * vs[i].y();
    }
    CHECK(density(single) == doctest::Approx(pi * r * r / (0.5 * twice)).epsilon(1e-12));
}

TEST_CASE("is_chp") {
    for (int k = 1; k <= 5; ++k) {
        for (const auto& dna : enumerate_dnas(12, k)) CHECK(is_chp(build_chp(12, k, dna.letters), 12, k, 1e-9));
    }
    auto c = build_chp(12, 3, "abc");
    CHECK(is_chp(mirrored(c, fundamental_angle(12)), 12, 3, 1e-9));
    const double d = solve_border(12, 3).d;
    c.centers.col(1) += Point2(0.1 * d, 0.0);
    CHECK_FALSE(is_chp(c, 12, 3, 1e-9));
    CHECK_FALSE(is_chp(hex_lattice(12, 3, d), 12, 3, 1e-6));
    try {
        is_chp(build_chp(12, 2, "ab"), 12, 3, 1e-9);
        FAIL("expected ShellCountMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ShellCountMismatch);
    }
}

TEST_CASE("equivalence under the container symmetry group") {
    const auto c = build_chp(12, 5, "aabcc");
    CHECK(equivalent(c, c, 1e-9));
    CHECK(equivalent(c, rotated(c, 2 * pi / 12), 1e-9));
    CHECK(equivalent(rotated(c, 2 * pi / 12), c, 1e-9));
    CHECK(equivalent(c, mirrored(c, 0.0), 1e-9));
    CHECK(equivalent(c, mirrored(rotated(c, 6 * pi / 12), fundamental_angle(12) + 5 * pi / 12), 1e-9));
    CHECK_FALSE(equivalent(c, rotated(c, 0.1), 1e-9));

    const auto circle = build_chp(kCircle, 4, "abdc");
    CHECK(equivalent(circle, rotated(circle, 0.123), 1e-9));
    CHECK(equivalent(circle, mirrored(circle, 0.7), 1e-9));

    const auto all = enumerate_dnas(12, 5);
    REQUIRE(all.size() == 15);
    std::vector<PackingConfiguration> built;
    for (const auto& dna : all) built.push_back(build_chp(12, 5, dna.letters));
    for (std::size_t i = 0; i < built.size(); ++i) {
        for (std::size_t j = 0; j < built.size(); ++j) {
            CHECK(equivalent(built[i], built[j], 1e-9) == (i == j));
        }
    }
}

TEST_CASE("geometric classes equal the combinatorial count") {
    const std::pair<int, int> cases[] = {{12, 3}, {12, 4}, {12, 5}, {12, 6}, {18, 3}, {18, 4}, {24, 3},
                                         {24, 4}, {30, 4}, {36, 4}, {60, 4}, {kCircle, 4}, {kCircle, 5}};
    for (const auto& [sigma, k] : cases) {
        CAPTURE(sigma);
        CAPTURE(k);
        const auto count = count_configurations(count_input(solve_border(sigma, k)));
        CHECK(geometric_classes(sigma, k) == count.convert_to<std::size_t>());
    }
}

TEST_CASE("extract_dna separates exactly the equivalence classes") {
    for (int k = 2; k <= 5; ++k) {
        const auto border = solve_border(12, k);
        std::string letters;
        for (int l : border.letter_of_ring) letters.push_back(static_cast<char>('a' + l));
        std::vector<std::pair<PackingConfiguration, std::string>> items;
        do {
            const auto c = build_chp(border, make_dna(border, letters));
            items.emplace_back(c, extract_dna(c, 12, k).letters);
        } while (std::next_permutation(letters.begin(), letters.end()));
        for (const auto& [a, da] : items) {
            for (const auto& [b, db] : items) CHECK(equivalent(a, b, 1e-9) == (da == db));
        }
    }
}

TEST_CASE("validation report") {
    const auto hex = build_chp(6, 3, "aaa");
    const auto report = validate(hex);
    CHECK(report.is_valid);
    CHECK(report.symmetry_residual < 1e-12);
    CHECK(std::abs(report.density - chp_density_hexagon(3)) < 1e-12);
    CHECK(report.worst_containment_violation < 1e-12);
    // Interior disks of the lattice have six contacts; the 6 corners have three.
    CHECK(report.contact_count_histogram.at(6) == 19);
    CHECK(report.contact_count_histogram.at(3) == 6);
    CHECK(report.contact_count_histogram.at(4) == 12);

    auto broken = build_chp(12, 2, "ab");
    broken.centers.col(1) = broken.centers.col(2) + Point2(0.01, 0.0);
    const auto bad = validate(broken);
    CHECK_FALSE(bad.is_valid);
    CHECK(bad.min_distance < broken.diameter);

    auto outside = build_chp(12, 2, "ab");
    outside.centers.col(8) *= 1.01;
    CHECK_FALSE(validate(outside).is_valid);
}
