#include "flatstrata/half_translation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "flatstrata/charts.hpp"
#include "flatstrata/errors.hpp"
#include "flatstrata/exact.hpp"

namespace flatstrata {

Complex base_side_vector(const HalfTranslationData& base, int t, int k)
{
    const int r = base.gluing.triangles[t][k];
    const int e = std::abs(r) - 1;
    if (r > 0 || base.flipped[e])
        return base.edge_vectors[e];
    return -base.edge_vectors[e];
}

int HalfTranslationSurface::tau_triangle(int t) const
{
    const int F = static_cast<int>(sheet_labels.size()) / 2;
    return t < F ? t + F : t - F;
}

double HalfTranslationSurface::tau_angle(int v, double angle) const
{
    double off = 0.0;
    Corner c = cover.corner_at(v, angle, &off);
    Corner tc = tau_corner(c);
    return wrap_angle(cover.corner_start(tc.triangle, tc.side) + off, cover.cone_angle(vertex_involution[v]));
}

int HalfTranslationSurface::minus_dimension() const
{
    return 2 * base_genus + static_cast<int>(base_orders.size()) - 2;
}

HalfTranslationSurface double_cover(const HalfTranslationData& base)
{
    const int F = static_cast<int>(base.gluing.triangles.size());
    const int N = base.gluing.num_edges();
    if (static_cast<int>(base.edge_vectors.size()) != N || static_cast<int>(base.flipped.size()) != N)
        fail("BadGluing", "edge vectors and sign flags must cover every edge");
    if (std::none_of(base.flipped.begin(), base.flipped.end(), [](char f) { return f != 0; }))
        fail("IsAbelianSquare", "all transition signs are trivial");

    TriangleGluing gl;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < F; ++t) {
            std::array<int, 3> tri{};
            for (int k = 0; k < 3; ++k) {
                const int r = base.gluing.triangles[t][k];
                const int e = std::abs(r) - 1;
                if (r > 0) {
                    tri[k] = e + N * s + 1;
                } else {
                    const int s0 = base.flipped[e] ? 1 - s : s;
                    tri[k] = -(e + N * s0 + 1);
                }
            }
            gl.triangles.push_back(tri);
        }

    // the cover is connected exactly when the sign holonomy is nontrivial
    std::vector<std::vector<int>> at_edge(2 * N);
    for (int t = 0; t < 2 * F; ++t)
        for (int r : gl.triangles[t])
            at_edge[std::abs(r) - 1].push_back(t);
    std::vector<char> seen(2 * F, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop();
        for (int r : gl.triangles[t])
            for (int u : at_edge[std::abs(r) - 1])
                if (!seen[u]) {
                    seen[u] = 1;
                    ++reached;
                    queue.push(u);
                }
    }
    if (reached != 2 * F)
        fail("IsAbelianSquare", "the sign holonomy is trivial: the quadratic differential is a square");

    std::vector<Complex> z(2 * N);
    for (int e = 0; e < N; ++e) {
        z[e] = base.edge_vectors[e];
        z[e + N] = -base.edge_vectors[e];
    }

    HalfTranslationSurface q;
    q.base = base;
    q.cover = build_surface(gl, z);
    q.involution.resize(2 * N);
    for (int e = 0; e < 2 * N; ++e)
        q.involution[e] = e < N ? e + N : e - N;
    q.sheet_labels.resize(2 * F);
    for (int t = 0; t < 2 * F; ++t)
        q.sheet_labels[t] = t < F ? 0 : 1;

    const int V = q.cover.num_vertices();
    q.vertex_involution.resize(V);
    for (int v = 0; v < V; ++v) {
        Corner c = q.cover.vertex_corners(v).front();
        Corner tc = q.tau_corner(c);
        q.vertex_involution[v] = q.cover.corner_vertex(tc.triangle, tc.side);
    }
    int total = 0;
    for (int v = 0; v < V; ++v) {
        const int w = q.vertex_involution[v];
        if (w < v)
            continue;
        double angle = w == v ? 0.5 * q.cover.cone_angle(v) : q.cover.cone_angle(v);
        int d = static_cast<int>(std::lround(angle / kPi)) - 2;
        q.base_orders.push_back(d);
        total += d;
    }
    std::sort(q.base_orders.rbegin(), q.base_orders.rend());
    q.base_genus = (total + 4) / 4;
    return q;
}

namespace {

Complex shear_vec(Complex v, double shear) { return {v.real() + shear * v.imag(), v.imag()}; }

HalfTranslationData make_data(std::vector<std::array<int, 3>> tris, std::vector<Complex> z,
                              std::vector<char> flipped, double shear)
{
    HalfTranslationData d;
    d.gluing.triangles = std::move(tris);
    for (Complex& v : z)
        v = shear_vec(v, shear);
    d.edge_vectors = std::move(z);
    d.flipped = std::move(flipped);
    return d;
}

} // namespace

HalfTranslationData pillowcase(double side, double shear)
{
    const double s = side;
    // front square: bottom 1, right 2, top 3, left 4, diagonal 5; the back
    // square is its mirror image, so top and bottom fold (z ↦ −z + c) while the
    // vertical sides are glued by translation
    return make_data({{1, 2, -5}, {5, 3, 4}, {-1, -4, -6}, {6, -3, -2}},
                     {{s, 0}, {0, s}, {-s, 0}, {0, -s}, {s, s}, {s, s}}, {1, 0, 1, 0, 0, 0}, shear);
}

HalfTranslationData q2_pole_pole(double a, double shear)
{
    return make_data({{1, 5, -3}, {6, -4, -5}, {-1, 7, -6}, {8, 4, -7}, {2, 9, -8}, {3, -2, -9}},
                     {{a / 2, 0},
                      {1 - a, 0},
                      {0, 1},
                      {-a / 2, 0},
                      {-a / 2, 1},
                      {0, 1},
                      {-a / 2, 1},
                      {0, 1},
                      {a - 1, 1}},
                     {1, 0, 0, 1, 0, 0, 0, 0, 0}, shear);
}

HalfTranslationData trivial_sign_torus()
{
    return make_data({{1, 2, -3}, {3, -1, -2}}, {{1, 0}, {0, 1}, {1, 1}}, {0, 0, 0}, 0.0);
}

SaddleConnection tau_connection(const HalfTranslationSurface& q, const SaddleConnection& c)
{
    const TranslationSurface& s = q.cover;
    if (c.is_edge()) {
        SaddleConnection ec = edge_connection(s, q.involution[c.edge]);
        if (std::abs(ec.holonomy + c.holonomy) <= std::abs(ec.holonomy - c.holonomy))
            return ec;
        return reversed(s, ec);
    }
    SaddleConnection t = c;
    t.holonomy = -c.holonomy;
    t.start_vertex = q.vertex_involution[c.start_vertex];
    t.end_vertex = q.vertex_involution[c.end_vertex];
    t.start_angle = q.tau_angle(c.start_vertex, c.start_angle);
    t.end_angle = q.tau_angle(c.end_vertex, c.end_angle);
    t.start_corner = q.tau_corner(c.start_corner);
    for (Crossing& x : t.crossings)
        x.triangle = q.tau_triangle(x.triangle);
    return t;
}

LiftedConnection lift_saddle_connection(const HalfTranslationSurface& q, const SaddleConnection& c)
{
    LiftedConnection out;
    const int t0 = c.start_corner.triangle;
    out.first = q.sheet_labels[t0] == 0 ? c : tau_connection(q, c);
    out.second = reversed(q.cover, tau_connection(q, out.first));
    std::vector<int> a = homology_chain(q.cover, out.first);
    std::vector<int> b = homology_chain(q.cover, out.second);
    out.cycle.resize(a.size());
    for (size_t e = 0; e < a.size(); ++e)
        out.cycle[e] = a[e] + b[e];
    return out;
}

SaddleConnection base_edge_lift(const HalfTranslationSurface& q, int e)
{
    return edge_connection(q.cover, e);
}

std::vector<int> tau_chain(const HalfTranslationSurface& q, const std::vector<int>& chain)
{
    // τ carries edge e onto edge τ(e) with the vector negated, so on oriented
    // chains it only permutes indices
    std::vector<int> out(chain.size(), 0);
    for (size_t e = 0; e < chain.size(); ++e)
        out[q.involution[e]] += chain[e];
    return out;
}

bool is_minus_independent(const HalfTranslationSurface& q, const std::vector<SaddleConnection>& family)
{
    EchelonBasis rel(q.cover.num_edges());
    for (const auto& row : triangle_rows(q.cover))
        rel.insert(to_rational(row));
    std::vector<std::vector<int>> cycles;
    for (const SaddleConnection& c : family)
        cycles.push_back(lift_saddle_connection(q, c).cycle);
    return chains_independent(rel, cycles);
}

namespace {

bool same_key(const TranslationSurface& s, const EndpointKey& a, int vertex, double angle)
{
    if (a.vertex != vertex)
        return false;
    const double cone = s.cone_angle(vertex);
    double d = std::abs(a.angle - angle);
    return std::min(d, cone - d) <= 1e-7;
}

} // namespace

SymmetricTriangulation symmetric_special_triangulation(const HalfTranslationSurface& q,
                                                       const std::vector<int>& marked_base_edges)
{
    const int N = q.base.gluing.num_edges();
    std::vector<int> marked;
    for (int e : marked_base_edges) {
        if (e < 1 || e > N)
            fail("BadGluing", "marked base edge out of range", e);
        marked.push_back(e);
        marked.push_back(e + N);
    }
    SymmetricTriangulation out;
    out.special = special_triangulation(q.cover, marked);
    const SpecialTriangulation& st = out.special;
    const TranslationSurface& s = st.surface;
    const int E = s.num_edges();

    out.edge_involution.assign(E, -1);
    for (int f = 0; f < E; ++f) {
        const EndpointKey& L = st.left_key[f];
        const EndpointKey& R = st.right_key[f];
        const int tl = q.vertex_involution[R.vertex], tr = q.vertex_involution[L.vertex];
        const double al = q.tau_angle(R.vertex, R.angle), ar = q.tau_angle(L.vertex, L.angle);
        for (int g = 0; g < E; ++g)
            if (same_key(q.cover, st.left_key[g], tl, al) && same_key(q.cover, st.right_key[g], tr, ar)) {
                out.edge_involution[f] = g;
                break;
            }
        if (out.edge_involution[f] < 0)
            fail("NotGeneric", "special triangulation of the cover is not invariant under the involution", f);
    }

    const auto& tris = s.gluing().triangles;
    const int F = static_cast<int>(tris.size());
    auto edge_set = [&](const std::array<int, 3>& tri, bool image) {
        std::array<int, 3> set{};
        for (int k = 0; k < 3; ++k) {
            int e = std::abs(tri[k]) - 1;
            set[k] = image ? out.edge_involution[e] : e;
        }
        std::sort(set.begin(), set.end());
        return set;
    };
    out.triangle_involution.assign(F, -1);
    for (int t = 0; t < F; ++t) {
        auto target = edge_set(tris[t], true);
        for (int u = 0; u < F; ++u)
            if (edge_set(tris[u], false) == target) {
                out.triangle_involution[t] = u;
                break;
            }
        if (out.triangle_involution[t] < 0)
            fail("NotGeneric", "triangles are not permuted by the involution", t);
    }
    out.tree_involution.assign(st.family.num_trees(), -1);
    for (int t = 0; t < F; ++t)
        out.tree_involution[st.family.tree_of[t]] = st.family.tree_of[out.triangle_involution[t]];

    out.system = linear_system(s.gluing()).rows;
    for (int f = 0; f < E; ++f) {
        const int g = out.edge_involution[f];
        if (g <= f)
            continue;
        std::vector<int> row(E, 0);
        row[f] = 1;
        row[g] = -1;
        out.system.push_back(std::move(row));
    }
    out.system_dim = E - exact_rank(out.system);
    return out;
}

json halfsurface_to_json(const HalfTranslationSurface& q)
{
    json j = surface_to_json(q.cover);
    j["format"] = kHalfSurfaceFormat;
    j["involution"] = q.involution;
    j["sheet_labels"] = q.sheet_labels;
    return j;
}

} // namespace flatstrata
