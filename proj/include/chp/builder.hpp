#pragma once

// Deterministic construction of CHP configurations from their DNA.
//
// Shell m of the fundamental 60-degree sector is a chain of m equal chords
// running from the DNA path (at the first disk of the shell) to the image of
// that disk under a pi/3 rotation. Shells are filled from the border inwards,
// each new disk placed at the intersection of the circles of radius d around
// its in-shell predecessor and one disk of the next outer shell.

#include "chp/border.hpp"
#include "chp/configuration.hpp"
#include "chp/dna.hpp"

#include <string_view>
#include <utility>

namespace chp {

/// Intersections of the radius-d circles about c1 and c2, as (left, right) of
/// the directed line c1 -> c2. Tangent circles (|c1 - c2| = 2d within 1e-12)
/// yield the tangent point twice.
std::pair<Point2, Point2> circle_pair_intersection(const Point2& c1, const Point2& c2, double d);

PackingConfiguration build_chp(const BorderSolution& border, const Dna& dna);
PackingConfiguration build_chp(int sigma, int k, std::string_view letters);

/// DNA read off the configuration in its own frame (not canonicalized).
Dna trace_dna(const PackingConfiguration& config, const BorderSolution& border);

/// Canonical DNA of a CHP configuration.
Dna extract_dna(const PackingConfiguration& config, int sigma, int k);

}  // namespace chp
