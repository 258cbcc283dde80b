#pragma once

// Border geometry of curved hexagonal packings and the closed-form densities.

#include "chp/geometry.hpp"

#include <vector>

namespace chp {

/// Number of disks in a configuration with k shells.
constexpr long long hexagonal_number(int k) { return 3LL * k * (k + 1) + 1; }

struct BorderSolution {
    int sigma = 0;  ///< multiple of 6, or kCircle
    int k = 0;
    std::vector<double> phi;          ///< chord directions, non-decreasing
    double d = 0.0;                   ///< common chord length == disk diameter
    std::vector<Point2> chain;        ///< P1 .. P_{k+1}
    int n_vertices = 0;               ///< chain points P1..Pk sitting on polygon vertices
    std::vector<int> degeneracies;    ///< multiplicity of each distinct phi, ascending
    std::vector<int> letter_of_ring;  ///< letter index of chord j (0 = smallest phi)
    std::vector<int> vertex_shifts;   ///< ring offsets of the occupied vertices (0 first)
    int eta = 2;

    int building_blocks() const { return static_cast<int>(degeneracies.size()); }
    /// Distinct phi values in letter order.
    std::vector<double> block_angles() const;
};

/// Unique chain of k equal chords along the inner polygon from P1 to rotate(P1, pi/3).
///
/// Throws NotMultipleOfSix for sigma not divisible by 6 (and not kCircle) and
/// NoSolution when the diameter cannot be bracketed.
BorderSolution solve_border(int sigma, int k);

/// Letter permutation induced by re-anchoring the chain at the occupied vertex
/// `shift` (ring j is relabelled j - shift modulo k).
std::vector<int> shift_letter_map(const BorderSolution& border, int shift);

/// Packing fraction of any CHP configuration for (sigma, k).
double chp_density(int sigma, int k);

/// Density from a known diameter; shared by chp_density and the validators.
double density_from_diameter(int sigma, long long n_disks, double diameter);

/// Closed form valid when every vertex of the fundamental region is occupied
/// (6k/sigma integer). Throws PreconditionViolated otherwise.
double chp_density_full_vertex(int sigma, int k);

/// Perfect hexagonal packing in the hexagon.
double chp_density_hexagon(int k);

/// Curved hexagonal packing in the circle.
double chp_density_circle(int k);

/// Limit of the full-vertex density as k grows: pi*sigma*tan(pi/sigma)/12.
double chp_density_limit(int sigma);

}  // namespace chp
