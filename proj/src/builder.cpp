#include "chp/builder.hpp"

#include "chp/error.hpp"
#include "chp/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace chp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBuildTol = 1e-9;
constexpr double kContactTol = 1e-6;

// Ring (border chord index) taken by each DNA position. Occurrences of a letter
// are assigned to the rings carrying that letter in increasing ring order.
std::vector<int> ring_order(const BorderSolution& border, const std::string& letters) {
    std::vector<std::vector<int>> pools(static_cast<std::size_t>(border.building_blocks()));
    for (int j = 0; j < border.k; ++j) pools[static_cast<std::size_t>(border.letter_of_ring[static_cast<std::size_t>(j)])].push_back(j);
    std::vector<std::size_t> used(pools.size(), 0);
    std::vector<int> order;
    for (char c : letters) {
        const auto l = static_cast<std::size_t>(c - 'a');
        order.push_back(pools[l][used[l]++]);
    }
    return order;
}

PolygonSpec spec_for(int sigma) { return sigma == kCircle ? PolygonSpec::circle() : PolygonSpec{sigma, 0.0}; }

std::string where(int shell, int position) {
    return "shell " + std::to_string(shell) + ", position " + std::to_string(position);
}

}  // namespace

std::pair<Point2, Point2> circle_pair_intersection(const Point2& c1, const Point2& c2, double d) {
    const Point2 v = c2 - c1;
    const double dist = v.norm();
    if (dist == 0.0) throw Error(ErrorCode::Coincident, "circle centers coincide");
    const double half = 0.5 * dist;
    double h2 = d * d - half * half;
    if (h2 < 0.0) {
        if (dist - 2.0 * d > 1e-12) {
            throw Error(ErrorCode::NoIntersection, "centers " + std::to_string(dist) + " apart exceed 2d");
        }
        h2 = 0.0;
    }
    const Point2 mid = c1 + 0.5 * v;
    const Point2 normal = Point2(-v.y(), v.x()) / dist;
    const double h = std::sqrt(h2);
    return {mid + h * normal, mid - h * normal};
}

PackingConfiguration build_chp(const BorderSolution& border, const Dna& dna) {
    const int k = border.k;
    const double d = border.d;
    if (static_cast<int>(dna.letters.size()) != k) throw Error(ErrorCode::InconsistentDna, "DNA length does not match k");
    make_dna(border, dna.letters);  // validates the multiset
    const std::vector<int> order = ring_order(border, dna.letters);

    // chains[m][b], b = 0..m: shell m of the fundamental sector plus its rotated start.
    std::vector<std::vector<Point2>> chains(static_cast<std::size_t>(k) + 1);
    chains[static_cast<std::size_t>(k)].assign(border.chain.begin(), border.chain.end());
    std::vector<int> rings(order.begin(), order.end());  // rings of the current shell, by border index
    std::sort(rings.begin(), rings.end());
    for (int m = k - 1; m >= 1; --m) {
        const auto& outer = chains[static_cast<std::size_t>(m) + 1];
        auto& chain = chains[static_cast<std::size_t>(m)];
        const int removed = order[static_cast<std::size_t>(k - m - 1)];
        rings.erase(std::find(rings.begin(), rings.end(), removed));

        const double xi = dna.xi[static_cast<std::size_t>(k - m - 1)];
        chain.push_back(outer.front() + d * Point2(std::cos(xi), std::sin(xi)));
        for (int b = 1; b < m; ++b) {
            const int pivot = removed > rings[static_cast<std::size_t>(b) - 1] ? b : b + 1;
            const Point2 pred = chain.back();
            const Point2 q = outer[static_cast<std::size_t>(pivot)];
            Point2 next;
            try {
                next = circle_pair_intersection(pred, q, d).first;
            } catch (const Error& e) {
                throw Error(ErrorCode::ConstructionFailed, where(m, b) + ": " + e.what());
            }
            chain.push_back(next);
        }
        chain.push_back(rotate(chain.front(), kPi / 3.0));
        const double closing = (chain[static_cast<std::size_t>(m)] - chain[static_cast<std::size_t>(m) - 1]).norm();
        if (std::abs(closing - d) > kBuildTol * d) {
            throw Error(ErrorCode::ConstructionFailed, where(m, m) + ": shell does not close");
        }
    }

    PackingConfiguration config;
    config.polygon = spec_for(border.sigma);
    config.diameter = d;
    config.k = k;
    config.dna = dna.letters;
    const auto n = static_cast<Eigen::Index>(hexagonal_number(k));
    config.centers.resize(2, n);
    config.shells.reserve(static_cast<std::size_t>(n));
    config.centers.col(0).setZero();
    config.shells.push_back(0);
    Eigen::Index col = 1;
    for (int m = 1; m <= k; ++m) {
        for (int r = 0; r < 6; ++r) {
            for (int b = 0; b < m; ++b) {
                config.centers.col(col++) = rotate(chains[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)], r * kPi / 3.0);
                config.shells.push_back(m);
            }
        }
    }

    // Certify: containment and separation.
    const PointIndex index(config.centers, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point2 p = config.centers.col(i);
        const int m = config.shells[static_cast<std::size_t>(i)];
        const int b = m == 0 ? 0 : static_cast<int>((i - 1 - 3 * m * (m - 1)) % m);
        if (!contains(config.polygon, p, kBuildTol)) {
            throw Error(ErrorCode::ConstructionFailed, where(m, b) + ": center outside the polygon");
        }
        for (int j : index.within(p, d * (1.0 - kBuildTol))) {
            if (j != i) throw Error(ErrorCode::ConstructionFailed, where(m, b) + ": overlapping disks");
        }
    }
    return config;
}

PackingConfiguration build_chp(int sigma, int k, std::string_view letters) {
    const BorderSolution border = solve_border(sigma, k);
    return build_chp(border, make_dna(border, letters));
}

Dna trace_dna(const PackingConfiguration& config, const BorderSolution& border) {
    const int k = border.k;
    if (config.size() != static_cast<Eigen::Index>(hexagonal_number(k))) {
        throw Error(ErrorCode::ShellCountMismatch, "N=" + std::to_string(config.size()) + " is not 3k(k+1)+1 for k=" + std::to_string(k));
    }
    const double d = border.d;
    const double tol = kContactTol * d;
    const PointIndex index(config.centers, d * (1.0 + kContactTol));
    const int start = index.nearest(border.chain.front(), tol);
    if (start < 0) throw Error(ErrorCode::AmbiguousStart, "no disk at the fundamental vertex");
    const int center = index.nearest(Point2::Zero(), tol);
    if (center < 0) throw Error(ErrorCode::NoPath, "no disk at the origin");

    const auto blocks = border.block_angles();
    std::vector<int> remaining(border.degeneracies.begin(), border.degeneracies.end());
    std::string letters;
    std::vector<Dna> found;

    // Depth-first search over contact steps whose directions are unused building blocks.
    std::function<void(int, int)> dfs = [&](int at, int depth) {
        if (depth == k) {
            if (at == center) {
                Dna dna = make_dna(border, letters);
                const auto rebuilt = build_chp(border, dna);
                if (match_residual(rebuilt.centers, config.centers, 10.0 * tol) <= 10.0 * tol) found.push_back(std::move(dna));
            }
            return;
        }
        const Point2 p = config.centers.col(at);
        for (int next : index.within(p, d + tol)) {
            const Point2 q = config.centers.col(next);
            const Point2 step = q - p;
            if (step.norm() < d - tol) continue;
            if (q.norm() > (k - depth - 1) * d + tol) continue;
            const double angle = std::atan2(step.y(), step.x());
            for (std::size_t l = 0; l < blocks.size(); ++l) {
                if (remaining[l] == 0) continue;
                const double diff = std::remainder(angle - (blocks[l] + kPi / 3.0), 2.0 * kPi);
                if (std::abs(diff) > 1e-4) continue;
                --remaining[l];
                letters.push_back(static_cast<char>('a' + l));
                dfs(next, depth + 1);
                letters.pop_back();
                ++remaining[l];
                if (!found.empty()) return;
            }
        }
    };
    dfs(start, 0);
    if (found.empty()) throw Error(ErrorCode::NoPath, "no contact path from P1 to the center matches a DNA");
    return found.front();
}

Dna extract_dna(const PackingConfiguration& config, int sigma, int k) {
    const BorderSolution border = solve_border(sigma, k);
    return canonicalize_dna(trace_dna(config, border), border).dna;
}

}  // namespace chp
