#include "chp/validation.hpp"

#include "chp/border.hpp"
#include "chp/error.hpp"
#include "chp/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kContactTol = 1e-6;

double brute_min_distance(const Centers& c) {
    double best = INFINITY;
    for (Eigen::Index i = 0; i < c.cols(); ++i) {
        for (Eigen::Index j = i + 1; j < c.cols(); ++j) best = std::min(best, (c.col(i) - c.col(j)).squaredNorm());
    }
    return std::sqrt(best);
}

Centers transformed(const Centers& c, double angle, bool mirror, double axis) {
    Centers out(2, c.cols());
    for (Eigen::Index i = 0; i < c.cols(); ++i) {
        Point2 p = c.col(i);
        if (mirror) p = reflect(p, axis);
        out.col(i) = rotate(p, angle);
    }
    return out;
}

}  // namespace

double packing_radius(const Centers& centers) {
    const Eigen::Index n = centers.cols();
    if (n < 2) return INFINITY;
    if (n <= 200) return brute_min_distance(centers);
    // N disks of diameter m fit in the bounding box grown by m, so m < cell below.
    const Point2 lo = centers.rowwise().minCoeff();
    const Point2 hi = centers.rowwise().maxCoeff();
    const Point2 span = hi - lo;
    const double cell = 2.0 * std::sqrt(std::max(span.x() * span.y(), span.squaredNorm() * 1e-6) / static_cast<double>(n)) +
                        1e-3 * span.norm();
    const auto pairs = pairs_within(centers, cell);
    if (pairs.empty()) return brute_min_distance(centers);
    double best = INFINITY;
    for (const auto& [i, j] : pairs) best = std::min(best, (centers.col(i) - centers.col(j)).squaredNorm());
    return std::sqrt(best);
}

double packing_radius(const PackingConfiguration& config) { return packing_radius(config.centers); }

std::vector<std::pair<int, int>> pairs_within(const Centers& centers, double radius) {
    std::vector<std::pair<int, int>> out;
    const PointIndex index(centers, radius);
    for (Eigen::Index i = 0; i < centers.cols(); ++i) {
        for (int j : index.within(centers.col(i), radius)) {
            if (j > i) out.emplace_back(static_cast<int>(i), j);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double density(const PackingConfiguration& config) {
    const double r = 0.5 * config.diameter;
    PolygonSpec container = config.polygon;
    container.delta = r;
    return static_cast<double>(config.size()) * kPi * r * r / area(container);
}

double symmetry_residual(const Centers& centers, double angle) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < centers.cols(); ++i) {
        const Point2 q = rotate<double>(centers.col(i), angle);
        const double nearest = (centers.colwise() - q).colwise().squaredNorm().minCoeff();
        worst = std::max(worst, std::sqrt(nearest));
    }
    return worst;
}

bool is_chp(const PackingConfiguration& config, int sigma, int k, double tol) {
    if (config.size() != static_cast<Eigen::Index>(hexagonal_number(k))) {
        throw Error(ErrorCode::ShellCountMismatch,
                    "N=" + std::to_string(config.size()) + " is not 3k(k+1)+1 for k=" + std::to_string(k));
    }
    const BorderSolution border = solve_border(sigma, k);
    const double d = border.d;
    const double eps = tol * d;
    if (std::abs(packing_radius(config.centers) - d) > eps) return false;
    if ((config.centers.colwise().squaredNorm().array() <= eps * eps).count() != 1) return false;
    if (symmetry_residual(config.centers, kPi / 3.0) > eps) return false;

    const PolygonSpec spec = sigma == kCircle ? PolygonSpec::circle() : PolygonSpec{sigma, 0.0};
    Centers on_border(2, 6 * k);
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < config.size(); ++i) {
        const double v = containment_violation<double>(spec, config.centers.col(i));
        if (v > eps) return false;
        if (v >= -eps) {
            if (count == 6 * k) return false;
            on_border.col(count++) = config.centers.col(i);
        }
    }
    if (count != 6 * k) return false;
    Centers expected(2, 6 * k);
    for (int r = 0; r < 6; ++r) {
        for (int j = 0; j < k; ++j) expected.col(r * k + j) = rotate(border.chain[static_cast<std::size_t>(j)], r * kPi / 3.0);
    }
    return match_residual(on_border, expected, std::max(eps, 1e-12)) <= eps;
}

bool equivalent(const PackingConfiguration& a, const PackingConfiguration& b, double tol) {
    if (a.size() != b.size() || a.sigma() != b.sigma()) return false;
    const double t = std::max(tol, 1e-15);
    if (!a.polygon.is_circle()) {
        const int sigma = a.sigma();
        const double axis = fundamental_angle(sigma);
        for (int mirror = 0; mirror < 2; ++mirror) {
            for (int g = 0; g < sigma; ++g) {
                const Centers image = transformed(a.centers, 2.0 * kPi * g / sigma, mirror == 1, axis);
                if (match_residual(image, b.centers, t) <= tol) return true;
            }
        }
        return false;
    }
    // Circle: anchor the outermost disk of a on every disk of b at the same radius.
    const Eigen::VectorXd ra = a.centers.colwise().norm();
    const Eigen::VectorXd rb = b.centers.colwise().norm();
    Eigen::Index anchor = 0;
    ra.maxCoeff(&anchor);
    if (ra(anchor) <= tol) return match_residual(a.centers, b.centers, t) <= tol;
    for (int mirror = 0; mirror < 2; ++mirror) {
        const Centers base = transformed(a.centers, 0.0, mirror == 1, 0.0);
        const double from = std::atan2(base(1, anchor), base(0, anchor));
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            if (std::abs(rb(j) - ra(anchor)) > tol) continue;
            const double to = std::atan2(b.centers(1, j), b.centers(0, j));
            if (match_residual(transformed(base, to - from, false, 0.0), b.centers, t) <= tol) return true;
        }
    }
    return false;
}

ValidationReport validate(const PackingConfiguration& config, double tol) {
    ValidationReport report;
    report.min_distance = packing_radius(config.centers);
    PolygonSpec inner = config.polygon;
    inner.delta = 0.0;
    report.worst_containment_violation = -INFINITY;
    for (Eigen::Index i = 0; i < config.size(); ++i) {
        report.worst_containment_violation =
            std::max(report.worst_containment_violation, containment_violation<double>(inner, config.centers.col(i)));
    }
    report.density = density(config);
    report.is_valid = report.min_distance >= config.diameter * (1.0 - tol) && report.worst_containment_violation <= tol;
    report.symmetry_residual = symmetry_residual(config.centers, kPi / 3.0);

    std::vector<int> contacts(static_cast<std::size_t>(config.size()), 0);
    if (config.size() > 1) {
        for (const auto& [i, j] : pairs_within(config.centers, config.diameter * (1.0 + kContactTol))) {
            ++contacts[static_cast<std::size_t>(i)];
            ++contacts[static_cast<std::size_t>(j)];
        }
    }
    for (int c : contacts) ++report.contact_count_histogram[c];
    return report;
}

}  // namespace chp
