#include "flatstrata/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "flatstrata/errors.hpp"

namespace flatstrata {

int TriangleGluing::num_edges() const
{
    int e = 0;
    for (const auto& tri : triangles)
        for (int r : tri)
            e = std::max(e, std::abs(r));
    return e;
}

std::string StratumSignature::str() const
{
    std::ostringstream out;
    out << "(";
    for (size_t i = 0; i < orders.size(); ++i)
        out << (i ? "," : "") << orders[i];
    out << ")";
    return out.str();
}

double wrap_angle(double a, double period)
{
    double r = std::fmod(a, period);
    if (r < 0)
        r += period;
    if (r >= period)
        r -= period;
    return r;
}

Corner TranslationSurface::corner_at(int v, double angle, double* offset) const
{
    const auto& corners = vertex_corners_[v];
    double a = wrap_angle(angle, cone_angle_[v]);
    // corner starts are increasing along the counterclockwise cycle
    size_t lo = 0, hi = corners.size();
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        const Corner& c = corners[mid];
        if (corner_start(c.triangle, c.side) <= a)
            lo = mid;
        else
            hi = mid;
    }
    const Corner& c = corners[lo];
    if (offset)
        *offset = a - corner_start(c.triangle, c.side);
    return c;
}

double TranslationSurface::angle_in_corner(const Corner& c, double direction) const
{
    double base = std::arg(side_vector(c.triangle, c.side));
    double off = wrap_angle(direction - base, kTwoPi);
    double width = corner_angle(c.triangle, c.side);
    // directions rounded just outside the corner snap to its nearest side
    if (off > width)
        off = (off - width < kTwoPi - off) ? width : 0.0;
    int v = corner_vertex(c.triangle, c.side);
    return wrap_angle(corner_start(c.triangle, c.side) + off, cone_angle_[v]);
}

TranslationSurface build_surface(const TriangleGluing& gluing, const std::vector<Complex>& z,
                                 const std::vector<int>& marked)
{
    const int F = static_cast<int>(gluing.triangles.size());
    if (F == 0)
        fail("BadGluing", "no triangles");
    const int E = gluing.num_edges();
    if (static_cast<int>(z.size()) != E)
        fail("BadGluing", "edge vector count " + std::to_string(z.size()) + " differs from edge count " +
                              std::to_string(E));

    TranslationSurface s;
    s.gluing_ = gluing;
    s.z_ = z;
    s.side_edge_.assign(3 * F, 0);
    s.side_sign_.assign(3 * F, 0);
    s.side_vec_.assign(3 * F, Complex());
    s.local_.assign(3 * F, Complex());
    s.opposite_.assign(3 * F, Corner{});
    s.edge_sides_.assign(E, {Corner{}, Corner{}});

    std::vector<int> seen_pos(E, 0), seen_neg(E, 0);
    for (int t = 0; t < F; ++t) {
        for (int k = 0; k < 3; ++k) {
            int r = gluing.triangles[t][k];
            if (r == 0)
                fail("BadGluing", "edge reference 0 in triangle " + std::to_string(t + 1), t + 1);
            int e = std::abs(r) - 1;
            int sg = r > 0 ? 1 : -1;
            s.side_edge_[3 * t + k] = e;
            s.side_sign_[3 * t + k] = sg;
            if (sg > 0) {
                if (seen_pos[e]++)
                    fail("BadGluing", "edge " + std::to_string(e + 1) + " used twice with the same orientation",
                         e + 1);
                s.edge_sides_[e][0] = {t, k};
            } else {
                if (seen_neg[e]++)
                    fail("BadGluing", "edge " + std::to_string(e + 1) + " used twice with the same orientation",
                         e + 1);
                s.edge_sides_[e][1] = {t, k};
            }
        }
    }
    for (int e = 0; e < E; ++e)
        if (seen_pos[e] != 1 || seen_neg[e] != 1)
            fail("BadGluing", "edge " + std::to_string(e + 1) + " does not appear exactly twice", e + 1);
    for (int e = 0; e < E; ++e) {
        auto [a, b] = s.edge_sides_[e];
        s.opposite_[3 * a.triangle + a.side] = b;
        s.opposite_[3 * b.triangle + b.side] = a;
    }

    for (const Complex& v : z)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail("EquationViolation", "non-finite edge vector");

    s.tri_area_.assign(F, 0.0);
    for (int t = 0; t < F; ++t) {
        double longest = 0.0;
        Complex sum;
        for (int k = 0; k < 3; ++k) {
            Complex v = double(s.side_sign_[3 * t + k]) * z[s.side_edge_[3 * t + k]];
            s.side_vec_[3 * t + k] = v;
            sum += v;
            longest = std::max(longest, std::abs(v));
        }
        if (std::abs(sum) > kClosureTolerance * longest)
            fail("EquationViolation", "triangle " + std::to_string(t + 1) + " does not close", t + 1);
        Complex s0 = s.side_vec_[3 * t], s1 = s.side_vec_[3 * t + 1];
        double a = 0.5 * cross(s0, s1);
        if (!(a > 0.0))
            fail("DegenerateTriangle", "triangle " + std::to_string(t + 1) + " has non-positive area", t + 1);
        s.tri_area_[t] = a;
        s.local_[3 * t] = 0.0;
        s.local_[3 * t + 1] = s0;
        s.local_[3 * t + 2] = s0 + s1;
    }

    // connectedness through the edge gluing
    std::vector<int> parent(F);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int e = 0; e < E; ++e)
        parent[find(s.edge_sides_[e][0].triangle)] = find(s.edge_sides_[e][1].triangle);
    for (int t = 0; t < F; ++t)
        if (find(t) != find(0))
            fail("BadGluing", "gluing is not connected", t + 1);

    s.corner_angle_.assign(3 * F, 0.0);
    for (int t = 0; t < F; ++t)
        for (int k = 0; k < 3; ++k) {
            Complex out = s.side_vec_[3 * t + k];
            Complex in = -s.side_vec_[3 * t + (k + 2) % 3];
            s.corner_angle_[3 * t + k] = wrap_angle(std::arg(in / out), kTwoPi);
        }

    // vertices: cycles of corners, counterclockwise around each cone point
    s.corner_vertex_.assign(3 * F, -1);
    s.corner_start_.assign(3 * F, 0.0);
    for (int t = 0; t < F; ++t) {
        for (int k = 0; k < 3; ++k) {
            if (s.corner_vertex_[3 * t + k] >= 0)
                continue;
            int v = static_cast<int>(s.vertex_corners_.size());
            std::vector<Corner> cyc;
            double acc = 0.0;
            Corner c{t, k};
            do {
                s.corner_vertex_[3 * c.triangle + c.side] = v;
                s.corner_start_[3 * c.triangle + c.side] = acc;
                acc += s.corner_angle_[3 * c.triangle + c.side];
                cyc.push_back(c);
                c = s.opposite_[3 * c.triangle + (c.side + 2) % 3];
            } while (!(c == Corner{t, k}));
            double turns = acc / kTwoPi;
            if (std::abs(turns - std::round(turns)) > 1e-6 || std::round(turns) < 1)
                fail("BadGluing", "cone angle at vertex " + std::to_string(v + 1) + " is not a multiple of 2pi",
                     v + 1);
            s.vertex_corners_.push_back(std::move(cyc));
            s.cone_angle_.push_back(kTwoPi * std::round(turns));
        }
    }

    int chi = s.num_vertices() - E + F;
    if (chi > 2 || (chi % 2) != 0)
        fail("BadGluing", "Euler characteristic " + std::to_string(chi) + " is not that of a closed surface");
    s.genus_ = (2 - chi) / 2;

    for (int m : marked)
        if (m < 1 || m > E)
            fail("BadGluing", "marked edge " + std::to_string(m) + " out of range", m);
    s.marked_ = marked;

    for (const Complex& v : z) {
        s.max_edge_ = std::max(s.max_edge_, std::abs(v));
        s.edge_length_sum_ += std::abs(v);
    }
    return s;
}

TranslationSurface with_marked(const TranslationSurface& s, const std::vector<int>& marked)
{
    return build_surface(s.gluing(), s.edge_vectors(), marked);
}

TranslationSurface with_vectors(const TranslationSurface& s, const std::vector<Complex>& z)
{
    return build_surface(s.gluing(), z, s.marked());
}

StratumSignature stratum_signature(const TranslationSurface& s)
{
    StratumSignature sig;
    for (int v = 0; v < s.num_vertices(); ++v)
        sig.orders.push_back(static_cast<int>(std::lround(s.cone_angle(v) / kTwoPi)) - 1);
    std::sort(sig.orders.rbegin(), sig.orders.rend());
    sig.genus = s.genus();
    return sig;
}

double area(const TranslationSurface& s)
{
    double a = 0.0;
    for (int t = 0; t < s.num_triangles(); ++t)
        a += s.triangle_area(t);
    return a;
}

TranslationSurface transform(const TranslationSurface& s, double a, double b, double c, double d)
{
    if (!(a * d - b * c > 0.0))
        fail("SingularMatrix", "transform requires a matrix with positive determinant");
    std::vector<Complex> z;
    z.reserve(s.num_edges());
    for (const Complex& v : s.edge_vectors())
        z.emplace_back(a * v.real() + b * v.imag(), c * v.real() + d * v.imag());
    return build_surface(s.gluing(), z, s.marked());
}

TranslationSurface rotate(const TranslationSurface& s, double theta)
{
    double c = std::cos(theta), sn = std::sin(theta);
    return transform(s, c, -sn, sn, c);
}

TranslationSurface scale(const TranslationSurface& s, double t)
{
    return transform(s, t, 0.0, 0.0, t);
}

} // namespace flatstrata
