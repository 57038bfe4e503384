#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace flatstrata {

using Complex = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.141592653589793238462643383280;

// Combinatorics of a triangulated surface. Each triangle lists its three
// sides counterclockwise as signed 1-based edge references; every unsigned
// edge index occurs exactly twice overall.
struct TriangleGluing {
    std::vector<std::array<int, 3>> triangles;

    int num_edges() const;
};

// Zero orders k_i (0 = marked regular point), sorted in decreasing order.
struct StratumSignature {
    std::vector<int> orders;
    int genus = 0;

    std::string str() const;
    bool operator==(const StratumSignature& o) const { return orders == o.orders && genus == o.genus; }
};

// A corner of a triangle: the angle at vertex `side`, between the outgoing
// side `side` and the incoming side `side - 1`.
struct Corner {
    int triangle = -1;
    int side = -1;

    bool operator==(const Corner& o) const { return triangle == o.triangle && side == o.side; }
};

// Immutable translation surface. Construct through build_surface, which
// checks every invariant eagerly.
class TranslationSurface {
public:
    TranslationSurface() = default;

    const TriangleGluing& gluing() const { return gluing_; }
    const std::vector<Complex>& edge_vectors() const { return z_; }
    const std::vector<int>& marked() const { return marked_; }

    int num_triangles() const { return static_cast<int>(gluing_.triangles.size()); }
    int num_edges() const { return static_cast<int>(z_.size()); }
    int num_vertices() const { return static_cast<int>(vertex_corners_.size()); }
    int genus() const { return genus_; }

    // Side k of triangle t: 0-based unsigned edge, its sign, and its vector.
    int side_edge(int t, int k) const { return side_edge_[3 * t + k]; }
    int side_sign(int t, int k) const { return side_sign_[3 * t + k]; }
    Complex side_vector(int t, int k) const { return side_vec_[3 * t + k]; }

    // The other occurrence of the edge carried by side k of t.
    Corner opposite(int t, int k) const { return opposite_[3 * t + k]; }
    // The two occurrences of an unsigned edge (first has sign +1).
    std::array<Corner, 2> edge_sides(int e) const { return edge_sides_[e]; }

    // Vertex k of t in the triangle's local frame: vertex 0 sits at the origin
    // and vertex k+1 = vertex k + side k.
    Complex local_vertex(int t, int k) const { return local_[3 * t + k]; }

    int corner_vertex(int t, int k) const { return corner_vertex_[3 * t + k]; }
    double corner_angle(int t, int k) const { return corner_angle_[3 * t + k]; }
    // Angle coordinate (in [0, cone angle)) of the direction of side k at its
    // start vertex; angle coordinates grow counterclockwise.
    double corner_start(int t, int k) const { return corner_start_[3 * t + k]; }

    const std::vector<Corner>& vertex_corners(int v) const { return vertex_corners_[v]; }
    double cone_angle(int v) const { return cone_angle_[v]; }

    double triangle_area(int t) const { return tri_area_[t]; }
    double max_edge_length() const { return max_edge_; }
    // Crude upper bound for the intrinsic diameter (sum of edge lengths).
    double diameter_bound() const { return edge_length_sum_; }

    // Corner containing the direction with the given angle coordinate at v;
    // `offset` receives the angle measured from the corner's start.
    Corner corner_at(int v, double angle, double* offset) const;
    // Angle coordinate of an absolute plane direction (radians) leaving v
    // inside the given corner.
    double angle_in_corner(const Corner& c, double direction) const;

private:
    friend TranslationSurface build_surface(const TriangleGluing&, const std::vector<Complex>&,
                                            const std::vector<int>&);

    TriangleGluing gluing_;
    std::vector<Complex> z_;
    std::vector<int> marked_;
    std::vector<int> side_edge_, side_sign_;
    std::vector<Complex> side_vec_, local_;
    std::vector<Corner> opposite_;
    std::vector<std::array<Corner, 2>> edge_sides_;
    std::vector<int> corner_vertex_;
    std::vector<double> corner_angle_, corner_start_;
    std::vector<std::vector<Corner>> vertex_corners_;
    std::vector<double> cone_angle_;
    std::vector<double> tri_area_;
    double max_edge_ = 0.0;
    double edge_length_sum_ = 0.0;
    int genus_ = 0;
};

// Relative closure tolerance of the triangle equations.
constexpr double kClosureTolerance = 1e-9;

// Glue planar triangles with translation transition maps. Throws
// BadGluing, EquationViolation or DegenerateTriangle.
TranslationSurface build_surface(const TriangleGluing& gluing, const std::vector<Complex>& z,
                                 const std::vector<int>& marked = {});

TranslationSurface with_marked(const TranslationSurface& s, const std::vector<int>& marked);
TranslationSurface with_vectors(const TranslationSurface& s, const std::vector<Complex>& z);

StratumSignature stratum_signature(const TranslationSurface& s);
double area(const TranslationSurface& s);

// Apply the real matrix [[a, b], [c, d]] to every edge vector (det > 0).
TranslationSurface transform(const TranslationSurface& s, double a, double b, double c, double d);
TranslationSurface rotate(const TranslationSurface& s, double theta);
TranslationSurface scale(const TranslationSurface& s, double t);

// Signed area of the triangle spanned by the vectors u, v (½ u ∧ v).
inline double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }

// Reduce an angle into [0, period).
double wrap_angle(double a, double period);

} // namespace flatstrata
