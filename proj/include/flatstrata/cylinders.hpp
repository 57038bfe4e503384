#pragma once

#include <string>
#include <vector>

#include "flatstrata/surface.hpp"

namespace flatstrata {

// A saddle connection parallel to the decomposition direction, traced from
// its left end (directions measured after rotating the direction to +x).
struct ParallelConnection {
    Complex holonomy; // in the surface's own coordinates
    double length = 0.0;
    int start_vertex = -1, end_vertex = -1;
    double start_angle = 0.0, end_angle = 0.0;
};

struct Cylinder {
    double width = 0.0;
    double height = 0.0;
    std::vector<int> bottom, top; // connection indices, left to right
    // Horizontal offset from the left end of bottom[0] to the left end of
    // top[0], normalised into [0, width).
    double twist = 0.0;
};

struct CylinderDecomposition {
    Complex direction; // unit vector
    std::vector<ParallelConnection> connections;
    std::vector<Cylinder> cylinders;

    double total_area() const;
    // Combinatorial summary: border lists of every cylinder.
    std::string signature() const;
};

// Throws NotPeriodic when a separatrix fails to close within 10³ × the
// diameter bound.
CylinderDecomposition cylinder_decomposition(const TranslationSurface& s, Complex direction);

// Every parallel saddle connection joins a zero to itself.
bool is_stable(const CylinderDecomposition& dec);

// Largest possible number of cylinders in the stratum: n + g − 1.
int max_cylinders(const StratumSignature& sig);

// Surface glued from horizontal cylinders. Connection i has length
// lengths[i] and becomes edge i + 1; every cylinder is merge-triangulated and
// its crossing edge (bottom[0] left end to top[0] left end) is recorded.
struct CylinderSpec {
    std::vector<int> bottom, top;
    double height = 0.0;
    double twist = 0.0;
};
struct CylinderSurface {
    TranslationSurface surface;
    std::vector<int> crossing_edge; // 0-based, one per cylinder
};
CylinderSurface cylinder_surface(const std::vector<double>& lengths, const std::vector<CylinderSpec>& cylinders);

// A one-cylinder surface in H(1,1) whose border connections join distinct
// zeros (found by searching the top-border orders).
TranslationSurface one_cylinder_h11();

} // namespace flatstrata
