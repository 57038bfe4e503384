#pragma once

#include <vector>

#include "flatstrata/exact.hpp"
#include "flatstrata/special.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

// Triangle equations S_Γ: one row per triangle with entries in {−1, 0, +1}
// (a column may hold ±2 when an edge appears twice in one triangle).
struct LinearSystem {
    int num_edges = 0;
    std::vector<std::vector<int>> rows;
};

LinearSystem linear_system(const TriangleGluing& gluing);

int system_rank(const LinearSystem& sys);
// N₁ − rank, computed exactly.
int solution_dim(const LinearSystem& sys);

// True when the coordinates z_i, i ∈ I (1-based), satisfy no nontrivial
// linear relation on the solution space.
bool is_independent(const LinearSystem& sys, const std::vector<int>& I);

// Greedy ascending family: each index is the smallest keeping independence.
// The first m entries must be 1..m; throws MarkedDependent otherwise.
std::vector<int> primary_family(const LinearSystem& sys, int m);

// Per k > m: the triangle Δ_k carrying e_{i_k} (its parent triangle for a
// tree edge, else the first triangle containing it) and j_k, the smallest
// index among the other sides of Δ_k.
struct AuxiliaryFamily {
    std::vector<int> J;         // j_{m+1}, …, 1-based
    std::vector<int> triangles; // Δ_{m+1}, …, 0-based
};
AuxiliaryFamily auxiliary_family(const AdmissibleGraphFamily& family, const std::vector<int>& I);

// Every z_e as an exact linear combination of the coordinates z_I on the
// solution space: z = C · z_I.
struct CoordinateMap {
    std::vector<int> I;
    RationalMatrix exact; // N₁ × |I|
    std::vector<std::vector<double>> coef;

    std::vector<Complex> evaluate(const std::vector<Complex>& zI) const;
};
CoordinateMap coordinate_map(const LinearSystem& sys, const std::vector<int>& I);

// Signed area of triangle t of the gluing at edge vectors z.
double triangle_signed_area(const TriangleGluing& gluing, int t, const std::vector<Complex>& z);

// Σ η_k over k > m: the areas of the distinct triangles Δ_k.
double area_lower_bound(const TranslationSurface& s, const AuxiliaryFamily& aux);

} // namespace flatstrata
