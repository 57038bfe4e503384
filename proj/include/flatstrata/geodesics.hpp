#pragma once

#include <optional>
#include <vector>

#include "flatstrata/exact.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

// One triangle visited by a developed straight path. Sides are local indices
// 0..2; entry_side is -1 in the first triangle and exit_side is -1 in the
// last one.
struct Crossing {
    int triangle = -1;
    int entry_side = -1;
    int exit_side = -1;
};

struct SaddleConnection {
    Complex holonomy;
    int start_vertex = -1;
    int end_vertex = -1;
    double start_angle = 0.0; // angle coordinate of the initial direction
    double end_angle = 0.0;   // angle coordinate of the reversed direction at the end
    int edge = -1;            // 0-based edge index when the connection is an edge
    Corner start_corner;      // corner containing the initial direction
    std::vector<Crossing> crossings; // empty for edges

    double length() const { return std::abs(holonomy); }
    bool is_edge() const { return edge >= 0; }
};

enum class StopReason { HitMarkedInterior, HitSingularity, BudgetExceeded };
const char* to_string(StopReason r);

struct SeparatrixTrace {
    int origin = -1;
    double origin_angle = 0.0;
    Complex direction;
    StopReason reason = StopReason::BudgetExceeded;
    double length = 0.0;
    // HitMarkedInterior: 0-based edge and parameter in (0,1) along its stored orientation
    int hit_edge = -1;
    double hit_param = 0.0;
    // HitSingularity: vertex reached and angle coordinate of the reversed direction there
    int hit_vertex = -1;
    double hit_angle = 0.0;
    Complex endpoint; // developed position of the vertex reached, origin at 0
    // true when the vertex was reached only within the transversal tolerance
    bool ambiguous = false;
    std::vector<Crossing> path;
};

// Transversal tolerance (relative to the local edge length) for deciding
// that a ray passes through a vertex.
constexpr double kVertexTolerance = 1e-12;

// Angle coordinates at v of all copies of the absolute direction `dir`,
// in increasing order (one per sheet of the cone point).
std::vector<double> direction_angles(const TranslationSurface& s, int v, Complex dir);

// Trace the ray leaving v in the given sector copy of `dir`. `stop_edges`
// holds 0-based edge indices whose interiors stop the ray.
SeparatrixTrace trace_separatrix(const TranslationSurface& s, int v, int sector, Complex dir,
                                 const std::vector<int>& stop_edges, double max_length);
// Same, with the outgoing direction given by its angle coordinate at v.
SeparatrixTrace trace_from_angle(const TranslationSurface& s, int v, double angle,
                                 const std::vector<int>& stop_edges, double max_length);

// The saddle connection traced by a ray that stopped at a singularity.
SaddleConnection connection_from_trace(const TranslationSurface& s, const SeparatrixTrace& tr);

// All saddle connections of length <= L, canonically oriented, sorted by
// (length, re, im, start vertex).
std::vector<SaddleConnection> enumerate_saddle_connections(const TranslationSurface& s, double L);
SaddleConnection shortest_saddle_connection(const TranslationSurface& s);

// Edge vector expressed as a saddle connection in canonical orientation.
SaddleConnection edge_connection(const TranslationSurface& s, int edge);
SaddleConnection reversed(const TranslationSurface& s, const SaddleConnection& c);

// Integer chain on the edges homologous (rel. singularities) to c: the
// left boundary of the strip of triangles crossed by c.
std::vector<int> homology_chain(const TranslationSurface& s, const SaddleConnection& c);

// Rows of the triangle equations: one row per triangle, signed edge counts.
std::vector<std::vector<int>> triangle_rows(const TranslationSurface& s);

// Throws NotOnSurface when the crossing record does not develop to a straight
// segment of S with the stated holonomy and endpoints.
void validate_connection(const TranslationSurface& s, const SaddleConnection& c);

// Segment of a non-edge connection inside one triangle, in that triangle's
// local frame, listed from the start of the connection.
struct ConnectionPiece {
    int triangle = -1;
    Complex a, b;
};
std::vector<ConnectionPiece> connection_pieces(const TranslationSurface& s, const SaddleConnection& c);

// True when the interiors of a and b meet.
bool interiors_intersect(const TranslationSurface& s, const SaddleConnection& a, const SaddleConnection& b);

bool is_independent_family(const TranslationSurface& s, const std::vector<SaddleConnection>& family);

// Independence test against a precomputed echelon basis of triangle_rows(s).
bool chains_independent(const EchelonBasis& relations, const std::vector<std::vector<int>>& chains);

} // namespace flatstrata
