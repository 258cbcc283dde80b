#pragma once

#include "chp/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace chp {

/// Uniform-grid bucket index over a fixed set of centers.
class PointIndex {
public:
    PointIndex(const Centers& points, double cell) : points_(points), cell_(cell) {
        for (Eigen::Index i = 0; i < points.cols(); ++i) {
            buckets_[key(cell_of(points(0, i)), cell_of(points(1, i)))].push_back(static_cast<int>(i));
        }
    }

    /// Nearest indexed point within `radius` (radius <= cell), or -1.
    int nearest(const Point2& p, double radius) const {
        const std::int64_t cx = cell_of(p.x());
        const std::int64_t cy = cell_of(p.y());
        int best = -1;
        double best_d2 = radius * radius;
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = buckets_.find(key(cx + dx, cy + dy));
                if (it == buckets_.end()) continue;
                for (int j : it->second) {
                    const double d2 = (points_.col(j) - p).squaredNorm();
                    if (d2 <= best_d2) {
                        best_d2 = d2;
                        best = j;
                    }
                }
            }
        }
        return best;
    }

    /// All indexed points within `radius` (radius <= cell).
    std::vector<int> within(const Point2& p, double radius) const {
        std::vector<int> out;
        const std::int64_t cx = cell_of(p.x());
        const std::int64_t cy = cell_of(p.y());
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = buckets_.find(key(cx + dx, cy + dy));
                if (it == buckets_.end()) continue;
                for (int j : it->second) {
                    if ((points_.col(j) - p).squaredNorm() <= radius * radius) out.push_back(j);
                }
            }
        }
        return out;
    }

private:
    std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
    static std::int64_t key(std::int64_t x, std::int64_t y) { return (x << 32) ^ (y & 0xffffffffLL); }

    const Centers& points_;
    double cell_;
    std::unordered_map<std::int64_t, std::vector<int>> buckets_;
};

/// Largest distance from a point of `a` to its matched point of `b` under a
/// one-to-one nearest matching; +infinity when sizes differ or matching fails.
/// Assumes the points of each set are separated by much more than `tol`.
inline double match_residual(const Centers& a, const Centers& b, double tol) {
    if (a.cols() != b.cols()) return INFINITY;
    const PointIndex index(b, std::max(tol, 1e-12));
    std::vector<char> used(static_cast<std::size_t>(b.cols()), 0);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        const Point2 p = a.col(i);
        const int j = index.nearest(p, tol);
        if (j < 0 || used[static_cast<std::size_t>(j)]) return INFINITY;
        used[static_cast<std::size_t>(j)] = 1;
        worst = std::max(worst, (b.col(j) - p).norm());
    }
    return worst;
}

}  // namespace chp
