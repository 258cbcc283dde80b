#pragma once

// Certification of packings: separation, containment, density, symmetry,
// CHP structure and equivalence under the container's symmetry group.

#include "chp/configuration.hpp"

#include <map>
#include <utility>
#include <vector>

namespace chp {

struct ValidationReport {
    double min_distance = 0.0;
    double worst_containment_violation = 0.0;  ///< > 0 means outside the delta=0 polygon
    double density = 0.0;
    bool is_valid = false;
    double symmetry_residual = 0.0;  ///< largest distance from a pi/3-rotated center to the set
    std::map<int, int> contact_count_histogram;
};

/// Minimum pairwise center distance (the separation, twice the disk radius).
double packing_radius(const Centers& centers);
double packing_radius(const PackingConfiguration& config);

/// Index pairs (i < j) closer than `radius`, in lexicographic order.
std::vector<std::pair<int, int>> pairs_within(const Centers& centers, double radius);

/// Packing fraction using the declared diameter.
double density(const PackingConfiguration& config);

/// Largest distance from a rotated center to its nearest center.
double symmetry_residual(const Centers& centers, double angle);

/// Throws ShellCountMismatch when N != 3k(k+1)+1. Positional tolerances are tol * d.
bool is_chp(const PackingConfiguration& config, int sigma, int k, double tol);

/// Some element of the container's symmetry group maps a onto b within tol.
bool equivalent(const PackingConfiguration& a, const PackingConfiguration& b, double tol);

ValidationReport validate(const PackingConfiguration& config, double tol = 1e-9);

}  // namespace chp
