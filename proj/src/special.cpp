#include "flatstrata/special.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "flatstrata/errors.hpp"

namespace flatstrata {

std::vector<std::vector<int>> AdmissibleGraphFamily::child_edges() const
{
    const int F = static_cast<int>(gluing.triangles.size());
    std::vector<int> base = base_sides();
    std::vector<std::vector<int>> out(F);
    for (int t = 0; t < F; ++t)
        if (parent[t] >= 0)
            out[parent[t]].push_back(std::abs(gluing.triangles[t][base[t]]) - 1);
    return out;
}

std::vector<int> AdmissibleGraphFamily::base_sides() const
{
    // the base is the side with the smallest edge number
    std::vector<int> out;
    for (const auto& tri : gluing.triangles) {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(tri[k]) < std::abs(tri[best]))
                best = k;
        out.push_back(best);
    }
    return out;
}

bool DomainCertificate::passes() const
{
    return std::all_of(entries.begin(), entries.end(), [](const CertificateEntry& e) { return e.passes(); });
}

double DomainCertificate::min_strict_margin() const
{
    double m = INFINITY;
    for (const auto& e : entries)
        if (e.strict())
            m = std::min(m, e.margin);
    return m;
}

namespace {

constexpr double kTraceBudgetFactor = 1e3;

bool vertical(Complex z) { return std::abs(z.real()) <= 1e-12 * std::abs(z); }

} // namespace

GenericityReport genericity(const TranslationSurface& s, const std::vector<int>& marked)
{
    GenericityReport rep;
    if (marked.empty()) {
        rep.reason = "no marked saddle connection";
        return rep;
    }
    std::vector<SaddleConnection> fam;
    std::vector<int> stop;
    for (int m : marked) {
        if (m < 1 || m > s.num_edges()) {
            rep.reason = "marked edge out of range";
            return rep;
        }
        if (vertical(s.edge_vectors()[m - 1])) {
            rep.reason = "marked connection " + std::to_string(m) + " is vertical";
            return rep;
        }
        fam.push_back(edge_connection(s, m - 1));
        stop.push_back(m - 1);
    }
    if (!is_independent_family(s, fam)) {
        rep.reason = "marked family is not independent";
        return rep;
    }
    const double budget = kTraceBudgetFactor * s.diameter_bound();
    // every side of every marked connection must be met by some vertical ray
    std::vector<bool> side_hit(2 * marked.size(), false);
    for (int v = 0; v < s.num_vertices(); ++v) {
        for (Complex dir : {Complex(0, -1), Complex(0, 1)}) {
            std::vector<double> angles = direction_angles(s, v, dir);
            for (double a : angles) {
                SeparatrixTrace tr = trace_from_angle(s, v, a, stop, budget);
                if (tr.reason != StopReason::HitMarkedInterior) {
                    rep.reason = std::string("vertical ray from vertex ") + std::to_string(v + 1) + " " +
                                 to_string(tr.reason);
                    return rep;
                }
                const auto it = std::find(stop.begin(), stop.end(), tr.hit_edge);
                side_hit[2 * (it - stop.begin()) + (dir.imag() > 0 ? 1 : 0)] = true;
            }
        }
    }
    for (size_t k = 0; k < side_hit.size(); ++k)
        if (!side_hit[k]) {
            rep.reason = "no vertical ray meets side " + std::string(k % 2 == 0 ? "above" : "below") +
                         " of marked connection " + std::to_string(marked[k / 2]);
            return rep;
        }
    rep.generic = true;
    return rep;
}

bool is_generic(const TranslationSurface& s, const std::vector<int>& marked)
{
    return genericity(s, marked).generic;
}

namespace {

// A singular point seen from one side of a marked connection, developed in
// the plane with the left endpoint of the connection at the origin.
struct RayPoint {
    int vertex = -1;
    double ray_angle = 0.0; // angle coordinate of the vertical ray at the vertex
    Complex pos;
    double height = 0.0;
    double param = 0.0;
};

struct Side {
    int a = -1, b = -1;        // point indices, a left of b
    double angle_a = 0.0;      // angle coordinate at a of the direction a -> b
    double angle_b = 0.0;      // angle coordinate at b of the direction b -> a
    int child = -1;            // triangle built on this side, −1 for a leaf side
    int edge = -1;             // structural edge id
};

struct Tri {
    int tree = -1;
    int parent = -1;
    Side base, left, right; // base LR, left LC, right CR
};

struct Work {
    int tri = -1;     // triangle owning the side (−1 for the marked connection)
    int slot = -1;    // 1 = left side, 2 = right side of that triangle
    Side side;
    std::vector<int> inner;
};

double angle_between(Complex from, Complex to)
{
    // counterclockwise angle from `from` to `to`, in (−π, π]
    return std::arg(to / from);
}

} // namespace

SpecialTriangulation special_triangulation(const TranslationSurface& s, const std::vector<int>& marked)
{
    GenericityReport gen = genericity(s, marked);
    if (!gen.generic)
        fail("NotGeneric", gen.reason);
    const int m = static_cast<int>(marked.size());
    const double budget = kTraceBudgetFactor * s.diameter_bound();
    const double tie_tol = 1e-12 * s.diameter_bound();

    std::vector<int> stop;
    std::vector<int> marked_index(s.num_edges(), -1);
    for (int i = 0; i < m; ++i) {
        stop.push_back(marked[i] - 1);
        marked_index[marked[i] - 1] = i;
    }

    // points[2i] above γ_i, points[2i+1] below; entries 0 and 1 are its endpoints
    std::vector<std::vector<RayPoint>> points(2 * m);
    std::vector<SaddleConnection> gammas;
    for (int i = 0; i < m; ++i) {
        SaddleConnection g = edge_connection(s, marked[i] - 1); // re > 0: left to right
        gammas.push_back(g);
        for (int side = 0; side < 2; ++side) {
            points[2 * i + side].push_back({g.start_vertex, 0.0, Complex(0.0), 0.0, 0.0});
            points[2 * i + side].push_back({g.end_vertex, 0.0, g.holonomy, 0.0, 1.0});
        }
    }
    for (int v = 0; v < s.num_vertices(); ++v) {
        for (int up = 0; up < 2; ++up) {
            Complex dir = up ? Complex(0, 1) : Complex(0, -1);
            for (double a : direction_angles(s, v, dir)) {
                SeparatrixTrace tr = trace_from_angle(s, v, a, stop, budget);
                if (tr.reason != StopReason::HitMarkedInterior)
                    fail("NotGeneric", "vertical ray does not meet a marked connection");
                int i = marked_index[tr.hit_edge];
                Complex z = s.edge_vectors()[tr.hit_edge];
                double p = z.real() > 0 ? tr.hit_param : 1.0 - tr.hit_param;
                Complex q = p * gammas[i].holonomy;
                // downward rays land on the upper side of γ_i
                int side = up ? 1 : 0;
                Complex pos = q + Complex(0.0, up ? -tr.length : tr.length);
                points[2 * i + side].push_back({v, tr.origin_angle, pos, tr.length, p});
            }
        }
    }

    std::vector<Tri> tris;
    std::vector<int> roots(2 * m, -1);
    for (int tree = 0; tree < 2 * m; ++tree) {
        const int i = tree / 2;
        const bool upper = tree % 2 == 0;
        const auto& pts = points[tree];
        const Complex vdir = upper ? Complex(0, -1) : Complex(0, 1); // ray direction at the apex
        std::vector<int> inner;
        for (int k = 2; k < static_cast<int>(pts.size()); ++k)
            inner.push_back(k);
        std::sort(inner.begin(), inner.end(), [&](int a, int b) { return pts[a].param < pts[b].param; });
        if (inner.empty())
            fail("NotGeneric", "no vertical ray meets side " + std::string(upper ? "above" : "below") +
                                   " of marked connection " + std::to_string(i + 1));
        std::deque<Work> work;
        Side root;
        root.a = 0;
        root.b = 1;
        root.angle_a = gammas[i].start_angle;
        root.angle_b = gammas[i].end_angle;
        root.edge = i;
        work.push_back({-1, 0, root, inner});
        while (!work.empty()) {
            Work w = std::move(work.front());
            work.pop_front();
            // apex: minimal height; ties resolved leftmost above, rightmost below
            // heights are vertical distances to the current side
            const Complex A = pts[w.side.a].pos, B = pts[w.side.b].pos;
            auto height = [&](int k) {
                const Complex P = pts[k].pos;
                double line = A.imag() + (P.real() - A.real()) * (B.imag() - A.imag()) / (B.real() - A.real());
                return upper ? P.imag() - line : line - P.imag();
            };
            int best = -1;
            double best_h = 0.0;
            for (int k : w.inner) {
                double h = height(k);
                if (best < 0 || h < best_h - tie_tol) {
                    best = k;
                    best_h = h;
                } else if (std::abs(h - best_h) <= tie_tol) {
                    fail("NotGeneric", "equal ray heights over a marked connection");
                }
            }
            const int c = best;
            const RayPoint &L = pts[w.side.a], &R = pts[w.side.b], &C = pts[c];
            const int vL = L.vertex, vR = R.vertex, vC = C.vertex;
            Tri t;
            t.tree = tree;
            t.parent = w.tri;
            t.base = w.side;
            double phiL = std::abs(angle_between(R.pos - L.pos, C.pos - L.pos));
            double phiR = std::abs(angle_between(L.pos - R.pos, C.pos - R.pos));
            t.left.a = w.side.a;
            t.left.b = c;
            t.right.a = c;
            t.right.b = w.side.b;
            if (upper) {
                t.left.angle_a = wrap_angle(w.side.angle_a + phiL, s.cone_angle(vL));
                t.right.angle_b = wrap_angle(w.side.angle_b - phiR, s.cone_angle(vR));
            } else {
                t.left.angle_a = wrap_angle(w.side.angle_a - phiL, s.cone_angle(vL));
                t.right.angle_b = wrap_angle(w.side.angle_b + phiR, s.cone_angle(vR));
            }
            t.left.angle_b = wrap_angle(C.ray_angle + angle_between(vdir, L.pos - C.pos), s.cone_angle(vC));
            t.right.angle_a = wrap_angle(C.ray_angle + angle_between(vdir, R.pos - C.pos), s.cone_angle(vC));
            const int id = static_cast<int>(tris.size());
            if (w.tri < 0)
                roots[tree] = id;
            else if (w.slot == 1)
                tris[w.tri].left.child = id;
            else
                tris[w.tri].right.child = id;
            std::vector<int> lin, rin;
            for (int k : w.inner) {
                if (k == c)
                    continue;
                (pts[k].param < C.param ? lin : rin).push_back(k);
            }
            tris.push_back(t);
            // children in counterclockwise order after the base
            Work wl{id, 1, t.left, lin}, wr{id, 2, t.right, rin};
            if (upper) {
                if (!rin.empty())
                    work.push_back(std::move(wr));
                if (!lin.empty())
                    work.push_back(std::move(wl));
            } else {
                if (!lin.empty())
                    work.push_back(std::move(wl));
                if (!rin.empty())
                    work.push_back(std::move(wr));
            }
        }
    }
    const int F = static_cast<int>(tris.size());

    // number edges: marked, tree edges in creation order, then leaf pairs
    int next = m;
    for (int t = 0; t < F; ++t)
        if (tris[t].parent >= 0) {
            Tri& p = tris[tris[t].parent];
            Side& sd = (p.left.child == t) ? p.left : p.right;
            sd.edge = next;
            tris[t].base.edge = next;
            ++next;
        }
    struct Leaf {
        int tri, slot;
        int vertex;
        double angle;
        Complex vec;
    };
    std::vector<Leaf> leaves;
    for (int t = 0; t < F; ++t) {
        const bool upper = tris[t].tree % 2 == 0;
        const auto& pts = points[tris[t].tree];
        int order[2] = {upper ? 2 : 1, upper ? 1 : 2};
        for (int slot : order) {
            const Side& sd = slot == 1 ? tris[t].left : tris[t].right;
            if (sd.child >= 0)
                continue;
            leaves.push_back({t, slot, pts[sd.a].vertex, sd.angle_a, pts[sd.b].pos - pts[sd.a].pos});
        }
    }
    // pair leaf sides that are the same saddle connection: same left vertex and direction
    std::vector<int> partner(leaves.size(), -1);
    for (size_t a = 0; a < leaves.size(); ++a) {
        if (partner[a] >= 0)
            continue;
        for (size_t b = a + 1; b < leaves.size(); ++b) {
            if (partner[b] >= 0 || leaves[b].vertex != leaves[a].vertex)
                continue;
            double cone = s.cone_angle(leaves[a].vertex);
            double d = std::abs(leaves[a].angle - leaves[b].angle);
            d = std::min(d, cone - d);
            if (d <= 1e-7) {
                if (partner[a] >= 0)
                    fail("NotGeneric", "ambiguous saddle connection matching");
                partner[a] = static_cast<int>(b);
                partner[b] = static_cast<int>(a);
            }
        }
        if (partner[a] < 0)
            fail("NotGeneric", "unmatched side in special triangulation");
        const Leaf &la = leaves[a], &lb = leaves[partner[a]];
        if (std::abs(la.vec - lb.vec) > 1e-8 * std::abs(la.vec))
            fail("NotGeneric", "matched sides disagree in holonomy");
        Side& sa = la.slot == 1 ? tris[la.tri].left : tris[la.tri].right;
        Side& sb = lb.slot == 1 ? tris[lb.tri].left : tris[lb.tri].right;
        sa.edge = sb.edge = next++;
    }
    const int E = next;

    std::vector<Complex> z(E);
    std::vector<EndpointKey> lkey(E), rkey(E);
    std::vector<char> have(E, 0);
    TriangleGluing gl;
    std::vector<std::array<int, 3>> corner_vertices;
    for (int t = 0; t < F; ++t) {
        const Tri& tr = tris[t];
        const auto& pts = points[tr.tree];
        for (const Side* sd : {&tr.base, &tr.left, &tr.right}) {
            if (have[sd->edge])
                continue;
            have[sd->edge] = 1;
            z[sd->edge] = pts[sd->b].pos - pts[sd->a].pos;
            lkey[sd->edge] = {pts[sd->a].vertex, sd->angle_a};
            rkey[sd->edge] = {pts[sd->b].vertex, sd->angle_b};
        }
        const int b = tr.base.edge + 1, l = tr.left.edge + 1, r = tr.right.edge + 1;
        if (tr.tree % 2 == 0) {
            gl.triangles.push_back({b, -r, -l});
            corner_vertices.push_back({pts[tr.base.a].vertex, pts[tr.base.b].vertex, pts[tr.left.b].vertex});
        } else {
            gl.triangles.push_back({-b, l, r});
            corner_vertices.push_back({pts[tr.base.b].vertex, pts[tr.base.a].vertex, pts[tr.left.b].vertex});
        }
    }
    // marked connections keep their exact input vectors
    for (int i = 0; i < m; ++i)
        z[i] = gammas[i].holonomy;

    std::vector<int> out_marked;
    for (int i = 1; i <= m; ++i)
        out_marked.push_back(i);

    SpecialTriangulation st;
    try {
        st.surface = build_surface(gl, z, out_marked);
    } catch (const Error& e) {
        fail("NotGeneric", std::string("special triangulation failed to assemble: ") + e.what());
    }
    st.family.m = m;
    st.family.gluing = gl;
    st.family.roots = roots;
    for (const Tri& t : tris) {
        st.family.tree_of.push_back(t.tree);
        st.family.parent.push_back(t.parent);
    }
    st.numbering.label.resize(E);
    for (int e = 0; e < E; ++e)
        st.numbering.label[e] = e + 1;
    st.left_key = lkey;
    st.right_key = rkey;
    st.vertex_map.assign(st.surface.num_vertices(), -1);
    for (int t = 0; t < F; ++t)
        for (int k = 0; k < 3; ++k)
            st.vertex_map[st.surface.corner_vertex(t, k)] = corner_vertices[t][k];
    if (st.surface.num_edges() != s.num_edges() || st.surface.num_triangles() != s.num_triangles())
        fail("NotGeneric", "special triangulation has the wrong number of cells");
    return st;
}

DomainCertificate domain_certificate(const AdmissibleGraphFamily& family, const std::vector<Complex>& z)
{
    DomainCertificate cert;
    const auto& tris = family.gluing.triangles;
    const int F = static_cast<int>(tris.size());
    const std::vector<int> base = family.base_sides();
    const auto children = family.child_edges();

    // locate the other occurrence of every side
    const int E = static_cast<int>(z.size());
    std::vector<std::vector<Corner>> occ(E);
    for (int t = 0; t < F; ++t)
        for (int k = 0; k < 3; ++k)
            occ[std::abs(tris[t][k]) - 1].push_back({t, k});
    auto opposite = [&](int t, int k) {
        int e = std::abs(tris[t][k]) - 1;
        return occ[e][0] == Corner{t, k} ? occ[e][1] : occ[e][0];
    };
    auto side_vec = [&](int t, int k) {
        int r = tris[t][k];
        return r > 0 ? z[r - 1] : -z[-r - 1];
    };
    auto eval = [&](const std::vector<std::pair<int, int>>& form) {
        Complex f;
        for (auto [e, c] : form)
            f += double(c) * z[e - 1];
        return f;
    };

    for (int t = 0; t < F; ++t) {
        const int b = base[t];
        const int i1 = std::abs(tris[t][b]);
        const int i2 = std::abs(tris[t][(b + 1) % 3]);
        const int i3 = std::abs(tris[t][(b + 2) % 3]);
        const Complex z1 = z[i1 - 1], z2 = z[i2 - 1], z3 = z[i3 - 1];
        for (auto [ix, zx] : {std::pair{i2, z2}, std::pair{i3, z3}}) {
            CertificateEntry e;
            e.kind = "HOR";
            e.triangle = t + 1;
            e.base = i1;
            e.form = {{i1, 1}, {ix, 1}};
            e.margin = std::min(zx.real(), z1.real() - zx.real());
            cert.entries.push_back(e);
        }
        {
            CertificateEntry e;
            e.kind = "AREA";
            e.triangle = t + 1;
            e.base = i1;
            e.form = {{i1, 1}, {i2, 1}};
            e.margin = z2.real() * z1.imag() - z1.real() * z2.imag();
            cert.entries.push_back(e);
        }

        // subtree hanging from t: its boundary chain from the end of the base
        // back to its start, counterclockwise
        std::vector<char> internal(E, 0);
        std::vector<int> stack{t};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int e : children[u]) {
                internal[e] = 1;
                for (const Corner& c : occ[e])
                    if (c.triangle != u)
                        stack.push_back(c.triangle);
            }
        }
        std::vector<std::pair<int, int>> chain; // signed 1-based edges
        int apex_at = -1;
        Corner cand{t, (b + 1) % 3};
        int guard = 0;
        while (!(cand == Corner{t, b})) {
            if (++guard > 6 * F + 6)
                fail("DomainViolation", "tree polygon boundary does not close");
            if (cand == Corner{t, (b + 2) % 3})
                apex_at = static_cast<int>(chain.size());
            int e = std::abs(tris[cand.triangle][cand.side]) - 1;
            if (internal[e]) {
                Corner o = opposite(cand.triangle, cand.side);
                cand = {o.triangle, (o.side + 1) % 3};
            } else {
                int r = tris[cand.triangle][cand.side];
                chain.push_back({std::abs(r), r > 0 ? 1 : -1});
                cand = {cand.triangle, (cand.side + 1) % 3};
            }
        }
        (void)side_vec;
        const bool upper = family.upper(family.tree_of[t]);
        const int q = static_cast<int>(chain.size());
        // vertices V_1..V_{q−1} other than the apex; V_j − C as a signed sum of chain sides
        for (int j = 1; j < q; ++j) {
            if (j == apex_at)
                continue;
            std::map<int, int> coef;
            if (j > apex_at) {
                for (int l = apex_at; l < j; ++l)
                    coef[chain[l].first] += chain[l].second;
            } else {
                for (int l = j; l < apex_at; ++l)
                    coef[chain[l].first] -= chain[l].second;
            }
            CertificateEntry e;
            e.kind = j > apex_at ? "TREE_STRICT" : "TREE_WEAK";
            e.triangle = t + 1;
            e.base = i1;
            for (auto [edge, c] : coef)
                if (c != 0)
                    e.form.push_back({edge, upper ? -c : c}); // upper trees use C − V_j
            Complex f = eval(e.form);
            e.margin = z1.imag() * f.real() - z1.real() * f.imag();
            cert.entries.push_back(e);
        }
    }
    return cert;
}

DomainCertificate domain_certificate(const SpecialTriangulation& st)
{
    return domain_certificate(st.family, st.surface.edge_vectors());
}

TranslationSurface reconstruct(const AdmissibleGraphFamily& family, const CompatibleNumbering& numbering,
                               const std::vector<Complex>& zin)
{
    const int E = family.gluing.num_edges();
    if (static_cast<int>(zin.size()) != E || static_cast<int>(numbering.label.size()) != E)
        fail("DomainViolation", "coordinate vector has the wrong length");
    std::vector<Complex> z(E);
    for (int e = 0; e < E; ++e)
        z[e] = zin[numbering.label[e] - 1];
    for (size_t t = 0; t < family.gluing.triangles.size(); ++t) {
        Complex sum;
        double longest = 0.0;
        for (int r : family.gluing.triangles[t]) {
            Complex v = r > 0 ? z[r - 1] : -z[-r - 1];
            sum += v;
            longest = std::max(longest, std::abs(v));
        }
        if (std::abs(sum) > kClosureTolerance * longest)
            fail("DomainViolation", "triangle equation " + std::to_string(t + 1) + " fails",
                 static_cast<int>(t) + 1);
    }
    DomainCertificate cert = domain_certificate(family, z);
    for (const auto& e : cert.entries)
        if (!e.passes())
            fail("DomainViolation", e.kind + " inequality fails in triangle " + std::to_string(e.triangle),
                 e.triangle);
    std::vector<int> marked;
    for (int i = 1; i <= family.m; ++i)
        marked.push_back(i);
    return build_surface(family.gluing, z, marked);
}

std::string graph_dot(const SpecialTriangulation& st)
{
    const auto& fam = st.family;
    std::ostringstream out;
    out << "graph dual {\n";
    for (size_t t = 0; t < fam.tree_of.size(); ++t) {
        int tree = fam.tree_of[t];
        out << "  t" << t + 1 << " [label=\"" << t + 1 << "\\nG" << tree / 2 + 1 << (tree % 2 == 0 ? "+" : "-")
            << "\"];\n";
    }
    const auto children = fam.child_edges();
    std::vector<char> tree_edge(st.surface.num_edges(), 0);
    for (const auto& ch : children)
        for (int e : ch)
            tree_edge[e] = 1;
    for (int e = 0; e < st.surface.num_edges(); ++e) {
        auto sides = st.surface.edge_sides(e);
        out << "  t" << sides[0].triangle + 1 << " -- t" << sides[1].triangle + 1 << " [label=\"" << e + 1 << "\"";
        if (e < fam.m)
            out << ", style=dashed";
        else if (tree_edge[e])
            out << ", style=bold";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace flatstrata
