#pragma once

#include "chp/geometry.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chp {

enum class LambdaRule { MinDistSq };

struct OptimizerParams {
    double s_initial = 10.0;
    double s_factor = 1.5;
    double s_final = 1e8;
    LambdaRule lambda_rule = LambdaRule::MinDistSq;
    double inner_tol = 1e-12;  ///< relative projected-gradient norm
    int max_inner_iters = 5000;
    double perturb_amplitude = 0.01;  ///< fraction of the current minimum distance
    std::uint64_t seed = 0;

    /// Throws PreconditionViolated when the schedule or amplitude is invalid.
    void validate() const;
};

/// Indices of frozen disks.
struct PinSet {
    std::set<Eigen::Index> indices;

    bool contains(Eigen::Index i) const { return indices.count(i) != 0; }
    std::size_t size() const { return indices.size(); }
};

struct Provenance {
    std::string mode = "deterministic";  ///< deterministic | algorithm1 | algorithm2
    std::optional<std::uint64_t> seed;
    std::optional<OptimizerParams> params;
};

struct PackingConfiguration {
    PolygonSpec polygon;  ///< delta = 0: the polygon holding the centers
    Centers centers;
    double diameter = 0.0;  ///< minimum admissible separation == 2 * disk radius
    std::optional<int> k;
    std::optional<std::string> dna;
    Provenance meta;
    /// Shell index per center when known (constructor output), else empty.
    std::vector<int> shells;

    Eigen::Index size() const { return centers.cols(); }
    int sigma() const { return polygon.sigma; }
};

}  // namespace chp
