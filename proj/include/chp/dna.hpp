#pragma once

// DNA strings: the ordered chord angles along the contact path from P1 to the
// central disk. Letter 'a' is the smallest distinct angle.

#include "chp/border.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chp {

using BigInt = boost::multiprecision::cpp_int;

struct Dna {
    std::vector<double> xi;
    std::string letters;

    friend bool operator==(const Dna& a, const Dna& b) { return a.letters == b.letters; }
};

struct CanonicalDna {
    Dna dna;
    /// The mirror image of the input is also one of its occupied-vertex rotations.
    bool reflection_is_rotation = false;
};

struct CountInput {
    int k = 1;
    int eta = 2;
    int n_vertices = 1;
    std::vector<int> degeneracies;
};

/// DNA built from a letter string; throws InconsistentDna unless the letters are a
/// permutation of the border's building blocks.
Dna make_dna(const BorderSolution& border, std::string_view letters);

/// DNA from raw angles (letters are assigned by rank of the distinct values).
/// Throws InconsistentDna if the multiset differs from {phi_j + pi/3} at 1e-9.
Dna dna_from_angles(const BorderSolution& border, std::span<const double> xi);

/// Mirror image through the axis P1-origin: xi -> pi - xi - 2pi/sigma.
Dna reflect_dna(const Dna& dna, int sigma);

/// Letter permutations of the symmetry group: one per occupied vertex, followed by
/// the same maps composed with the complement (reflection).
std::vector<std::vector<int>> symmetry_letter_maps(const BorderSolution& border);

/// Lexicographically smallest member of the orbit under occupied-vertex
/// rotations and reflection.
CanonicalDna canonicalize_dna(const Dna& dna, const BorderSolution& border);

/// Every inequivalent configuration, as canonical DNAs in lexicographic order.
/// Throws CapExceeded when the configuration count is larger than `cap`.
std::vector<Dna> enumerate_dnas(int sigma, int k, std::size_t cap = 100000);
std::vector<Dna> enumerate_dnas(const BorderSolution& border, std::size_t cap = 100000);

/// max(1, k! / (eta n_V prod n_i!)) in exact integer arithmetic.
BigInt count_configurations(const CountInput& input);

CountInput count_input(const BorderSolution& border);

/// Closed forms used for the circle: n_i = 1, n_V = k, eta = 2.
BigInt count_configurations_circle(int k);

}  // namespace chp
