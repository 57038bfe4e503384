#pragma once

#include <array>
#include <random>

#include "flatstrata/surface.hpp"

namespace flatstrata {

// Torus spanned by w1, w2 (cross(w1, w2) > 0): two triangles on the edges
// w1, w2, w1 + w2, with w1 marked when `mark_first` is set.
TranslationSurface torus(Complex w1, Complex w2, bool mark_first = false);
TranslationSurface square_torus();
// γ = (1, 0) marked, second generator (s, 1).
TranslationSurface sheared_torus(double s = 0.3);

// Centrally symmetric octagon with sides a0, a1, a2, a3, −a0, −a1, −a2, −a3
// (arguments increasing in (−π, π)), opposite sides glued, fan-triangulated
// from one vertex: 6 triangles, edges a0..a3 then the diagonals. Stratum (2).
TranslationSurface octagon(const std::array<Complex, 4>& a);
// Regular octagon with side 1.
TranslationSurface regular_octagon();
// Random convex octagon surface with side directions spread over (0, π),
// then rotated by a uniform angle.
TranslationSurface random_octagon(std::mt19937_64& rng);

} // namespace flatstrata
