#pragma once

#include <vector>

#include "flatstrata/geodesics.hpp"
#include "flatstrata/io.hpp"
#include "flatstrata/special.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

// Triangulated half-translation surface given by its triangles. Edge e has
// vector z_e on its positive occurrence; the negative occurrence carries −z_e
// for a translation gluing and +z_e when the gluing flips the sign
// (z ↦ −z + c).
struct HalfTranslationData {
    TriangleGluing gluing;
    std::vector<Complex> edge_vectors;
    std::vector<char> flipped; // per edge
};

// A half-translation surface stored through its canonical double cover:
// cover triangle t + F·s is base triangle t on sheet s (vectors multiplied by
// (−1)^s) and cover edge e + N·s is base edge e whose positive occurrence lies
// on sheet s.
struct HalfTranslationSurface {
    HalfTranslationData base;
    TranslationSurface cover;
    std::vector<int> involution;   // per cover edge (0-based)
    std::vector<int> sheet_labels; // per cover triangle
    std::vector<int> vertex_involution;
    std::vector<int> base_orders; // d_i per base singularity
    int base_genus = 0;

    int tau_triangle(int t) const;
    Corner tau_corner(const Corner& c) const { return {tau_triangle(c.triangle), c.side}; }
    // Image of an angle coordinate at cover vertex v under τ.
    double tau_angle(int v, double angle) const;
    double base_area() const { return 0.5 * area(cover); }
    // dim H₁(X̂, Ŝ; R)⁻ = 2g + n − 2 of the base.
    int minus_dimension() const;
};

// Throws IsAbelianSquare when the sign holonomy is trivial.
HalfTranslationSurface double_cover(const HalfTranslationData& base);

// Base side vector of side k of triangle t.
Complex base_side_vector(const HalfTranslationData& base, int t, int k);

// Square pillowcase Q(−1⁴) built from two squares of the given side; the
// base vectors are sheared by [[1, shear], [0, 1]].
HalfTranslationData pillowcase(double side = 0.5, double shear = 0.0);
// Genus-one surface in Q(2, −1, −1): a unit torus slit along [0, a] with both
// slit sides folded, sheared by [[1, shear], [0, 1]].
HalfTranslationData q2_pole_pole(double a = 0.5, double shear = 0.0);
// A plain translation torus presented with trivial signs.
HalfTranslationData trivial_sign_torus();

// τ applied to a cover saddle connection: holonomy negated.
SaddleConnection tau_connection(const HalfTranslationSurface& q, const SaddleConnection& c);

struct LiftedConnection {
    SaddleConnection first, second; // τ(first) = −second
    std::vector<int> cycle;         // [first] + [second] on cover edges
};
// `c` is either lift of the base connection; `first` is the lift leaving a
// sheet-0 triangle.
LiftedConnection lift_saddle_connection(const HalfTranslationSurface& q, const SaddleConnection& c);

// Lift of base edge e as a cover saddle connection.
SaddleConnection base_edge_lift(const HalfTranslationSurface& q, int e);

std::vector<int> tau_chain(const HalfTranslationSurface& q, const std::vector<int>& chain);

bool is_minus_independent(const HalfTranslationSurface& q, const std::vector<SaddleConnection>& family);

struct SymmetricTriangulation {
    SpecialTriangulation special;
    std::vector<int> edge_involution;     // output edge -> τ-image (0-based)
    std::vector<int> triangle_involution; // output triangle -> τ-image
    std::vector<int> tree_involution;     // tree index -> τ-image
    std::vector<std::vector<int>> system; // triangle rows plus Z(e') = Z(e)
    int system_dim = 0;
};

// Special triangulation of the cover with respect to both lifts of each
// marked base edge (1-based base indices). Throws NotGeneric.
SymmetricTriangulation symmetric_special_triangulation(const HalfTranslationSurface& q,
                                                       const std::vector<int>& marked_base_edges);

json halfsurface_to_json(const HalfTranslationSurface& q);

} // namespace flatstrata
