#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flatstrata/geodesics.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

// Dual graph Γ (the triangles and their gluing) with the rooted trees
// Γ_{i,+} (above γ_i) and Γ_{i,−} (below γ_i). Triangles are the vertices
// of Γ; tree index 2(i−1) is Γ_{i,+} and 2(i−1)+1 is Γ_{i,−}.
struct AdmissibleGraphFamily {
    int m = 0;
    TriangleGluing gluing;
    std::vector<int> tree_of; // per triangle
    std::vector<int> parent;  // parent triangle in its tree, −1 at roots
    std::vector<int> roots;   // per tree, −1 when empty

    int num_trees() const { return 2 * m; }
    bool upper(int tree) const { return tree % 2 == 0; }
    // Edges (0-based) joining a triangle to its children.
    std::vector<std::vector<int>> child_edges() const;
    // Local side index of the base of each triangle (the side towards the root).
    std::vector<int> base_sides() const;
};

// Edge labels 1..N₁. Special triangulations are emitted with their edges
// already numbered, so `label[e]` is e+1 for their own output.
struct CompatibleNumbering {
    std::vector<int> label;
};

struct CertificateEntry {
    std::string kind; // HOR, AREA, TREE_STRICT, TREE_WEAK
    int triangle = -1;
    int base = -1;                         // 1-based base edge
    std::vector<std::pair<int, int>> form; // (1-based edge, coefficient) of the linear form
    double margin = 0.0;

    bool strict() const { return kind != "TREE_WEAK"; }
    bool passes() const { return strict() ? margin > 0.0 : margin >= 0.0; }
};

struct DomainCertificate {
    std::vector<CertificateEntry> entries;

    bool passes() const;
    double min_strict_margin() const;
};

// Angle-coordinate address of an edge endpoint on the input surface.
struct EndpointKey {
    int vertex = -1;
    double angle = 0.0;
};

struct SpecialTriangulation {
    TranslationSurface surface; // numbered edges, marked = 1..m, every Re(z_e) > 0
    AdmissibleGraphFamily family;
    CompatibleNumbering numbering;
    std::vector<EndpointKey> left_key, right_key; // per output edge, on the input surface
    std::vector<int> vertex_map;                  // output vertex -> input vertex
};

struct GenericityReport {
    bool generic = false;
    std::string reason;
};

GenericityReport genericity(const TranslationSurface& s, const std::vector<int>& marked);
bool is_generic(const TranslationSurface& s, const std::vector<int>& marked);

// Throws NotGeneric when the construction does not apply.
SpecialTriangulation special_triangulation(const TranslationSurface& s, const std::vector<int>& marked);

// Inequalities (A)-(C) evaluated at edge vectors z on the family's gluing.
DomainCertificate domain_certificate(const AdmissibleGraphFamily& family, const std::vector<Complex>& z);
DomainCertificate domain_certificate(const SpecialTriangulation& st);

// Ψ: assemble the surface from a solution of the triangle system; throws
// DomainViolation when the system or an inequality fails.
TranslationSurface reconstruct(const AdmissibleGraphFamily& family, const CompatibleNumbering& numbering,
                               const std::vector<Complex>& z);

// Dual graph Γ in DOT syntax with tree edges highlighted.
std::string graph_dot(const SpecialTriangulation& st);

} // namespace flatstrata
