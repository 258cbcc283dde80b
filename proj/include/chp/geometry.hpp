#pragma once

// Regular-polygon model shared by every other module.
//
// Frame convention: the container always has a vertex at the fundamental
// direction 3pi/2 - pi/sigma, so that P1 = (-sin(pi/sigma), -cos(pi/sigma))
// is a vertex of the unit-circumradius polygon and the edge leaving P1
// counter-clockwise is horizontal. For sigma = 6, 18, 30, ... this frame
// coincides with the "vertex at angle 0" frame of the raw `gamma` formula;
// for sigma divisible by 4 the two differ by a rotation of pi/sigma.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace chp {

template <typename Scalar>
using Point2T = Eigen::Matrix<Scalar, 2, 1>;
using Point2 = Point2T<double>;

/// Centers are stored column-wise.
using Centers = Eigen::Matrix2Xd;

/// Sentinel sigma for the circular container (the sigma -> infinity limit).
inline constexpr int kCircle = 0;

struct PolygonSpec {
    int sigma = 6;
    double delta = 0.0;

    bool is_circle() const { return sigma == kCircle; }

    static PolygonSpec circle(double delta = 0.0) { return {kCircle, delta}; }
};

namespace detail {
template <typename Scalar>
Scalar positive_mod(Scalar x, Scalar m) {
    using std::fmod;
    Scalar r = fmod(x, m);
    return r < Scalar(0) ? r + m : r;
}
}  // namespace detail

/// Polar angle of the fundamental vertex P1.
template <typename Scalar = double>
Scalar fundamental_angle(int sigma) {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    if (sigma == kCircle) return Scalar(1.5) * pi;
    return Scalar(1.5) * pi - pi / Scalar(sigma);
}

/// P1, the first border disk of every CHP configuration.
template <typename Scalar = double>
Point2T<Scalar> fundamental_vertex(int sigma) {
    using std::cos;
    using std::sin;
    if (sigma == kCircle) return {Scalar(0), Scalar(-1)};
    const Scalar a = std::numbers::pi_v<Scalar> / Scalar(sigma);
    return {-sin(a), -cos(a)};
}

/// Angular offset of the container frame relative to the raw `gamma` frame.
template <typename Scalar = double>
Scalar frame_phase(int sigma) {
    if (sigma == kCircle) return Scalar(0);
    const Scalar wedge = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(sigma);
    return detail::positive_mod(fundamental_angle<Scalar>(sigma), wedge);
}

/// Boundary radius at polar angle u of the polygon whose vertex sits at u = 0,
/// offset outward by delta along the apothem.
template <typename Scalar>
Scalar gamma(Scalar u, Scalar delta, int sigma) {
    using std::cos;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar half = pi / Scalar(sigma);
    const Scalar rem = detail::positive_mod(u, Scalar(2) * half);
    return (delta + cos(half)) / cos(half - rem);
}

/// (X(u, delta, sigma), Y(u, delta, sigma)) in the raw frame (vertex at u = 0).
template <typename Scalar>
Point2T<Scalar> boundary_point(Scalar u, Scalar delta, int sigma) {
    using std::cos;
    using std::sin;
    const Scalar g = gamma(u, delta, sigma);
    return {g * cos(u), g * sin(u)};
}

/// sin^2(t) radial map of the raw-frame boundary point; unconstrained t.
template <typename Scalar>
Point2T<Scalar> interior_point(Scalar t, Scalar u, int sigma) {
    using std::sin;
    const Scalar s = sin(t);
    return s * s * boundary_point(u, Scalar(0), sigma);
}

/// Boundary point at polar angle u in the container frame.
template <typename Scalar = double>
Point2T<Scalar> boundary_point(const PolygonSpec& spec, Scalar u) {
    using std::cos;
    using std::sin;
    Scalar g;
    if (spec.is_circle()) {
        g = Scalar(1) + Scalar(spec.delta);
    } else {
        g = gamma(u - frame_phase<Scalar>(spec.sigma), Scalar(spec.delta), spec.sigma);
    }
    return {g * cos(u), g * sin(u)};
}

template <typename Scalar = double>
Point2T<Scalar> interior_point(const PolygonSpec& spec, Scalar t, Scalar u) {
    using std::sin;
    const Scalar s = sin(t);
    PolygonSpec inner = spec;
    inner.delta = 0.0;
    return s * s * boundary_point<Scalar>(inner, u);
}

template <typename Scalar>
Point2T<Scalar> rotate(const Point2T<Scalar>& p, Scalar theta) {
    return Eigen::Rotation2D<Scalar>(theta) * p;
}

/// Mirror image across the line through the origin at polar angle `axis`.
template <typename Scalar>
Point2T<Scalar> reflect(const Point2T<Scalar>& p, Scalar axis) {
    using std::cos;
    using std::sin;
    const Scalar c = cos(Scalar(2) * axis);
    const Scalar s = sin(Scalar(2) * axis);
    return {c * p.x() + s * p.y(), s * p.x() - c * p.y()};
}

/// Apothem of the polygon described by spec (1 + delta for the circle).
inline double apothem(const PolygonSpec& spec) {
    if (spec.is_circle()) return 1.0 + spec.delta;
    return std::cos(std::numbers::pi / spec.sigma) + spec.delta;
}

/// Vertices in counter-clockwise order starting at P1 (scaled for delta).
template <typename Scalar = double>
std::vector<Point2T<Scalar>> vertices(const PolygonSpec& spec) {
    using std::cos;
    using std::sin;
    std::vector<Point2T<Scalar>> out;
    if (spec.is_circle()) return out;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar radius = (Scalar(spec.delta) + cos(pi / Scalar(spec.sigma))) / cos(pi / Scalar(spec.sigma));
    const Scalar start = fundamental_angle<Scalar>(spec.sigma);
    out.reserve(static_cast<std::size_t>(spec.sigma));
    for (int i = 0; i < spec.sigma; ++i) {
        const Scalar a = start + Scalar(2) * pi * Scalar(i) / Scalar(spec.sigma);
        out.emplace_back(radius * cos(a), radius * sin(a));
    }
    return out;
}

/// Outward unit normal of edge i (edge i joins vertex i and vertex i+1).
template <typename Scalar = double>
Point2T<Scalar> edge_normal(int sigma, int i) {
    using std::cos;
    using std::sin;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar a = fundamental_angle<Scalar>(sigma) + pi / Scalar(sigma) + Scalar(2) * pi * Scalar(i) / Scalar(sigma);
    return {cos(a), sin(a)};
}

/// Largest signed distance outside the container; <= 0 means inside.
template <typename Scalar = double>
Scalar containment_violation(const PolygonSpec& spec, const Point2T<Scalar>& p) {
    const Scalar a = Scalar(apothem(spec));
    if (spec.is_circle()) return p.norm() - a;
    Scalar worst = -a;
    for (int i = 0; i < spec.sigma; ++i) {
        const Scalar v = edge_normal<Scalar>(spec.sigma, i).dot(p) - a;
        if (v > worst) worst = v;
    }
    return worst;
}

/// Half-plane test against each of the sigma edges.
template <typename Scalar = double>
bool contains(const PolygonSpec& spec, const Point2T<Scalar>& p, Scalar tol) {
    return containment_violation(spec, p) <= tol;
}

/// Closest point of the (convex) container; identity for interior points.
template <typename Scalar = double>
Point2T<Scalar> project_inside(const PolygonSpec& spec, const Point2T<Scalar>& p) {
    if (containment_violation(spec, p) <= Scalar(0)) return p;
    if (spec.is_circle()) return p * (Scalar(apothem(spec)) / p.norm());
    const auto vs = vertices<Scalar>(spec);
    Point2T<Scalar> best = vs.front();
    Scalar best_d2 = (p - best).squaredNorm();
    for (int i = 0; i < spec.sigma; ++i) {
        const auto& a = vs[static_cast<std::size_t>(i)];
        const auto& b = vs[static_cast<std::size_t>((i + 1) % spec.sigma)];
        const Point2T<Scalar> ab = b - a;
        Scalar t = (p - a).dot(ab) / ab.squaredNorm();
        t = t < Scalar(0) ? Scalar(0) : (t > Scalar(1) ? Scalar(1) : t);
        const Point2T<Scalar> q = a + t * ab;
        const Scalar d2 = (p - q).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = q;
        }
    }
    return best;
}

/// Area of the container. Polygon: sigma * apothem^2 * tan(pi/sigma).
inline double area(const PolygonSpec& spec) {
    const double a = apothem(spec);
    if (spec.is_circle()) return std::numbers::pi * a * a;
    return spec.sigma * a * a * std::tan(std::numbers::pi / spec.sigma);
}

}  // namespace chp
