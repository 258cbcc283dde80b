#include "chp/border.hpp"

#include "chp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-9;

// Vertex i of the unit-circumradius polygon, counting from P1; i may exceed sigma.
Point2 polygon_vertex(int sigma, int i) {
    const double a = fundamental_angle(sigma) + 2.0 * kPi * i / sigma;
    return {std::cos(a), std::sin(a)};
}

struct MarchResult {
    double travel = 0.0;  // edges walked, fractional
    std::vector<Point2> chain;
};

// Walk k chords of length d along the polygon starting at P1. Each step picks the
// first boundary point past the current one at Euclidean distance d.
MarchResult march(int sigma, int k, double d) {
    MarchResult out;
    out.chain.reserve(static_cast<std::size_t>(k) + 1);
    Point2 p = polygon_vertex(sigma, 0);
    out.chain.push_back(p);
    int edge = 0;
    double param = 0.0;
    for (int step = 0; step < k; ++step) {
        for (;;) {
            const Point2 a = polygon_vertex(sigma, edge);
            const Point2 ab = polygon_vertex(sigma, edge + 1) - a;
            const Point2 ap = a - p;
            const double qa = ab.squaredNorm();
            const double qb = 2.0 * ap.dot(ab);
            const double qc = ap.squaredNorm() - d * d;
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                const double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
                if (t >= param - 1e-15 && t <= 1.0) {
                    param = std::max(t, param);
                    p = a + param * ab;
                    break;
                }
            }
            ++edge;
            param = 0.0;
            if (edge > 2 * sigma) throw Error(ErrorCode::NoSolution, "chord longer than the polygon");
        }
        out.chain.push_back(p);
    }
    out.travel = edge + param;
    return out;
}

BorderSolution circle_border(int k) {
    BorderSolution b;
    b.sigma = kCircle;
    b.k = k;
    b.d = 2.0 * std::sin(kPi / (6.0 * k));
    for (int j = 1; j <= k; ++j) b.phi.push_back((2.0 * j - 1.0) * kPi / (6.0 * k));
    for (int j = 0; j <= k; ++j) {
        const double a = 1.5 * kPi + j * kPi / (3.0 * k);
        b.chain.emplace_back(std::cos(a), std::sin(a));
    }
    b.n_vertices = k;
    b.degeneracies.assign(static_cast<std::size_t>(k), 1);
    for (int j = 0; j < k; ++j) {
        b.letter_of_ring.push_back(j);
        b.vertex_shifts.push_back(j);
    }
    b.eta = 2;
    return b;
}

}  // namespace

std::vector<int> shift_letter_map(const BorderSolution& b, int shift) {
    std::vector<int> map(b.degeneracies.size(), -1);
    for (int j = 0; j < b.k; ++j) {
        const int from = b.letter_of_ring[static_cast<std::size_t>(j)];
        const int to = b.letter_of_ring[static_cast<std::size_t>(((j - shift) % b.k + b.k) % b.k)];
        int& slot = map[static_cast<std::size_t>(from)];
        if (slot != -1 && slot != to) {
            throw Error(ErrorCode::NoSolution, "occupied-vertex rotation does not preserve building blocks");
        }
        slot = to;
    }
    return map;
}

std::vector<double> BorderSolution::block_angles() const {
    std::vector<double> out;
    std::size_t j = 0;
    for (int n : degeneracies) {
        out.push_back(phi[j]);
        j += static_cast<std::size_t>(n);
    }
    return out;
}

BorderSolution solve_border(int sigma, int k) {
    if (k < 1) throw Error(ErrorCode::PreconditionViolated, "k must be >= 1");
    if (sigma == kCircle) return circle_border(k);
    if (sigma < 6 || sigma % 6 != 0) {
        throw Error(ErrorCode::NotMultipleOfSix, "sigma=" + std::to_string(sigma));
    }

    const double edges = sigma / 6;
    const double edge_len = 2.0 * std::sin(kPi / sigma);
    // k d >= |P1 - rotate(P1, pi/3)| = 1, with equality on a straight edge.
    double lo = (1.0 - 1e-9) / k;
    double hi = edges * edge_len / k;
    if (march(sigma, k, lo).travel > edges + 1e-12 || march(sigma, k, hi).travel < edges - 1e-12) {
        throw Error(ErrorCode::NoSolution, "diameter not bracketed");
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (march(sigma, k, mid).travel < edges) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Secant polish on the endpoint residual.
    double d = 0.5 * (lo + hi);
    {
        double x0 = lo;
        double x1 = hi;
        double f0 = march(sigma, k, x0).travel - edges;
        double f1 = march(sigma, k, x1).travel - edges;
        for (int it = 0; it < 8 && f1 != f0; ++it) {
            const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            if (!(x2 >= lo && x2 <= hi)) break;
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = march(sigma, k, x1).travel - edges;
        }
        if (std::abs(f1) <= std::abs(march(sigma, k, d).travel - edges)) d = x1;
    }

    BorderSolution b;
    b.sigma = sigma;
    b.k = k;
    b.d = d;
    b.chain = march(sigma, k, d).chain;
    for (int j = 0; j < k; ++j) {
        const Point2 v = b.chain[static_cast<std::size_t>(j) + 1] - b.chain[static_cast<std::size_t>(j)];
        b.phi.push_back(std::atan2(v.y(), v.x()));
    }

    for (int j = 0; j < k; ++j) {
        const Point2& p = b.chain[static_cast<std::size_t>(j)];
        for (int i = 0; i <= sigma / 6; ++i) {
            if ((p - polygon_vertex(sigma, i)).norm() < kAngleTol) {
                ++b.n_vertices;
                b.vertex_shifts.push_back(j);
                break;
            }
        }
    }

    int letter = -1;
    for (int j = 0; j < k; ++j) {
        if (j == 0 || b.phi[static_cast<std::size_t>(j)] - b.phi[static_cast<std::size_t>(j) - 1] > kAngleTol) {
            ++letter;
            b.degeneracies.push_back(0);
        }
        ++b.degeneracies.back();
        b.letter_of_ring.push_back(letter);
    }

    // eta = 1 iff the mirror image (letter complement) is already an occupied-vertex rotation.
    const int blocks = b.building_blocks();
    b.eta = 2;
    for (int shift : b.vertex_shifts) {
        const auto map = shift_letter_map(b, shift);
        bool same = true;
        for (int l = 0; l < blocks; ++l) same = same && map[static_cast<std::size_t>(l)] == blocks - 1 - l;
        if (same) {
            b.eta = 1;
            break;
        }
    }
    return b;
}

double density_from_diameter(int sigma, long long n_disks, double diameter) {
    if (sigma == kCircle) {
        const double r = 0.5 * diameter;
        return n_disks * r * r / ((1.0 + r) * (1.0 + r));
    }
    const double c = std::cos(kPi / sigma);
    const double denom = sigma * (diameter + 2.0 * c) * (diameter + 2.0 * c);
    return n_disks * kPi * diameter * diameter / std::tan(kPi / sigma) / denom;
}

double chp_density(int sigma, int k) {
    if (sigma == kCircle) return chp_density_circle(k);
    const BorderSolution b = solve_border(sigma, k);
    return density_from_diameter(sigma, hexagonal_number(k), b.d);
}

double chp_density_full_vertex(int sigma, int k) {
    if (sigma < 3 || k < 1 || (6 * k) % sigma != 0) {
        throw Error(ErrorCode::PreconditionViolated,
                    "6k/sigma must be a positive integer (sigma=" + std::to_string(sigma) + ", k=" + std::to_string(k) + ")");
    }
    const double cot = 1.0 / std::tan(kPi / sigma);
    const double denom = 6.0 * k * cot + sigma;
    return kPi * static_cast<double>(hexagonal_number(k)) * sigma * cot / (denom * denom);
}

double chp_density_hexagon(int k) {
    const double s3 = std::numbers::sqrt3;
    const double denom = 6.0 * s3 * k + 6.0;
    return 6.0 * s3 * kPi * static_cast<double>(hexagonal_number(k)) / (denom * denom);
}

double chp_density_circle(int k) {
    if (k < 1) throw Error(ErrorCode::PreconditionViolated, "k must be >= 1");
    const double s = std::sin(kPi / (6.0 * k));
    return static_cast<double>(hexagonal_number(k)) * s * s / ((1.0 + s) * (1.0 + s));
}

double chp_density_limit(int sigma) { return kPi * sigma * std::tan(kPi / sigma) / 12.0; }

}  // namespace chp
