#include "flatstrata/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "flatstrata/errors.hpp"

namespace flatstrata {

namespace {

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

double triangle_scale(const TranslationSurface& s, int t)
{
    return std::max({std::abs(s.side_vector(t, 0)), std::abs(s.side_vector(t, 1)), std::abs(s.side_vector(t, 2))});
}

// Offset placing triangle t2 next to t across the shared side: side `x` of t
// (developed with offset o) is side `k2` of t2 traversed backwards.
Complex neighbour_offset(const TranslationSurface& s, int t, Complex o, int x, int t2, int k2)
{
    return o + s.local_vertex(t, (x + 1) % 3) - s.local_vertex(t2, k2);
}

bool canonical(Complex h)
{
    double tol = 1e-12 * std::abs(h);
    if (h.real() > tol)
        return true;
    return std::abs(h.real()) <= tol && h.imag() > 0;
}

double seg_distance(Complex a, Complex b)
{
    Complex d = b - a;
    double len2 = std::norm(d);
    double t = len2 > 0 ? std::clamp(-dot(a, d) / len2, 0.0, 1.0) : 0.0;
    return std::abs(a + t * d);
}

} // namespace

const char* to_string(StopReason r)
{
    switch (r) {
    case StopReason::HitMarkedInterior:
        return "hit-marked-interior";
    case StopReason::HitSingularity:
        return "hit-singularity";
    case StopReason::BudgetExceeded:
        return "exceeded-budget";
    }
    return "?";
}

std::vector<double> direction_angles(const TranslationSurface& s, int v, Complex dir)
{
    double phi = std::arg(dir);
    std::vector<double> out;
    for (const Corner& c : s.vertex_corners(v)) {
        double off = wrap_angle(phi - std::arg(s.side_vector(c.triangle, c.side)), kTwoPi);
        if (off > kTwoPi - 1e-13)
            off = 0.0;
        // a direction on the closing side of a corner belongs to the next
        // corner, where it shows up with offset ≈ 0
        if (off < s.corner_angle(c.triangle, c.side) - 1e-13)
            out.push_back(s.corner_start(c.triangle, c.side) + off);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SeparatrixTrace trace_separatrix(const TranslationSurface& s, int v, int sector, Complex dir,
                                 const std::vector<int>& stop_edges, double max_length)
{
    if (std::abs(dir) == 0.0)
        fail("BadDirection", "direction must be nonzero");
    if (v < 0 || v >= s.num_vertices())
        fail("BadVertex", "vertex out of range");
    std::vector<double> angles = direction_angles(s, v, dir);
    if (sector < 0 || sector >= static_cast<int>(angles.size()))
        fail("BadSector", "sector out of range", sector);
    return trace_from_angle(s, v, angles[sector], stop_edges, max_length);
}

SeparatrixTrace trace_from_angle(const TranslationSurface& s, int v, double angle,
                                 const std::vector<int>& stop_edges, double max_length)
{
    SeparatrixTrace tr;
    tr.origin = v;
    tr.origin_angle = wrap_angle(angle, s.cone_angle(v));
    double off = 0.0;
    Corner c = s.corner_at(v, angle, &off);
    int t = c.triangle;
    const int k = c.side;
    const Complex d = std::polar(1.0, std::arg(s.side_vector(t, k)) + off);
    tr.direction = d;
    if (!(max_length > 0.0)) {
        tr.reason = StopReason::BudgetExceeded;
        return tr;
    }
    std::vector<char> stop(s.num_edges(), 0);
    for (int e : stop_edges)
        stop[e] = 1;

    Complex o = -s.local_vertex(t, k);
    auto W = [&](int j) { return o + s.local_vertex(t, j % 3); };
    int entry = -1;
    tr.path.push_back({t, -1, -1});

    auto hit_vertex = [&](int j, double odist) {
        double tau = dot(W(j), d);
        if (tau > max_length) {
            tr.reason = StopReason::BudgetExceeded;
            tr.length = max_length;
            return;
        }
        tr.reason = StopReason::HitSingularity;
        tr.length = tau;
        tr.hit_vertex = s.corner_vertex(t, j % 3);
        tr.hit_angle = s.angle_in_corner({t, j % 3}, std::arg(-d));
        tr.endpoint = W(j);
        tr.ambiguous = odist != 0.0;
    };

    for (;;) {
        double tol = kVertexTolerance * triangle_scale(s, t);
        int x;
        if (entry < 0) {
            double o1 = cross(d, W(k + 1)), o2 = cross(d, W(k + 2));
            if (std::abs(o1) <= tol) {
                hit_vertex(k + 1, o1);
                return tr;
            }
            if (std::abs(o2) <= tol) {
                hit_vertex(k + 2, o2);
                return tr;
            }
            x = (k + 1) % 3;
        } else {
            int a = (entry + 2) % 3;
            double oa = cross(d, W(a));
            if (std::abs(oa) <= tol) {
                hit_vertex(a, oa);
                return tr;
            }
            x = oa > 0 ? (entry + 1) % 3 : (entry + 2) % 3;
        }
        Complex wa = W(x), wb = W(x + 1);
        double den = cross(d, wb - wa);
        double tau = cross(wa, wb - wa) / den;
        double u = cross(-wa, d) / cross(wb - wa, d);
        if (tau > max_length) {
            tr.reason = StopReason::BudgetExceeded;
            tr.length = max_length;
            return tr;
        }
        tr.path.back().exit_side = x;
        int e = s.side_edge(t, x);
        if (stop[e]) {
            tr.reason = StopReason::HitMarkedInterior;
            tr.length = tau;
            tr.hit_edge = e;
            tr.hit_param = s.side_sign(t, x) > 0 ? u : 1.0 - u;
            return tr;
        }
        Corner nb = s.opposite(t, x);
        o = neighbour_offset(s, t, o, x, nb.triangle, nb.side);
        t = nb.triangle;
        entry = nb.side;
        tr.path.push_back({t, entry, -1});
    }
}

SaddleConnection connection_from_trace(const TranslationSurface& s, const SeparatrixTrace& tr)
{
    if (tr.reason != StopReason::HitSingularity)
        fail("NotOnSurface", "ray did not end at a singularity");
    double off = 0.0;
    Corner c = s.corner_at(tr.origin, tr.origin_angle, &off);
    if (tr.path.size() == 1) {
        // the ray runs along a side of its first triangle
        const int t = c.triangle;
        int k = c.side;
        bool along_outgoing = std::abs(tr.endpoint - (s.local_vertex(t, (k + 1) % 3) - s.local_vertex(t, k))) <
                              std::abs(tr.endpoint - (s.local_vertex(t, (k + 2) % 3) - s.local_vertex(t, k)));
        int side = along_outgoing ? k : (k + 2) % 3;
        SaddleConnection e = edge_connection(s, s.side_edge(t, side));
        Complex z = along_outgoing ? s.side_vector(t, k) : -s.side_vector(t, (k + 2) % 3);
        return std::abs(e.holonomy - z) <= std::abs(e.holonomy + z) ? e : reversed(s, e);
    }
    SaddleConnection out;
    out.holonomy = tr.endpoint;
    out.start_vertex = tr.origin;
    out.end_vertex = tr.hit_vertex;
    out.start_angle = tr.origin_angle;
    out.end_angle = tr.hit_angle;
    out.start_corner = c;
    out.crossings = tr.path;
    return out;
}

SaddleConnection edge_connection(const TranslationSurface& s, int e)
{
    auto sides = s.edge_sides(e);
    Corner fwd = sides[0], bwd = sides[1];
    SaddleConnection c;
    c.edge = e;
    Complex z = s.edge_vectors()[e];
    if (!canonical(z)) {
        std::swap(fwd, bwd);
        z = -z;
    }
    c.holonomy = z;
    c.start_corner = fwd;
    c.start_vertex = s.corner_vertex(fwd.triangle, fwd.side);
    c.start_angle = s.corner_start(fwd.triangle, fwd.side);
    c.end_vertex = s.corner_vertex(bwd.triangle, bwd.side);
    c.end_angle = s.corner_start(bwd.triangle, bwd.side);
    return c;
}

SaddleConnection reversed(const TranslationSurface& s, const SaddleConnection& c)
{
    SaddleConnection r;
    r.holonomy = -c.holonomy;
    r.start_vertex = c.end_vertex;
    r.end_vertex = c.start_vertex;
    r.start_angle = c.end_angle;
    r.end_angle = c.start_angle;
    r.edge = c.edge;
    if (c.is_edge()) {
        auto sides = s.edge_sides(c.edge);
        r.start_corner = (c.start_corner == sides[0]) ? sides[1] : sides[0];
        return r;
    }
    const int n = static_cast<int>(c.crossings.size());
    for (int i = n - 1; i >= 0; --i) {
        const Crossing& x = c.crossings[i];
        r.crossings.push_back({x.triangle, x.exit_side, x.entry_side});
    }
    const Crossing& last = c.crossings.back();
    r.start_corner = {last.triangle, (last.entry_side + 2) % 3};
    r.crossings.front().entry_side = -1;
    r.crossings.back().exit_side = -1;
    // the old start triangle is entered through the side facing the start vertex
    r.crossings.back().entry_side = (c.start_corner.side + 1) % 3;
    return r;
}

std::vector<SaddleConnection> enumerate_saddle_connections(const TranslationSurface& s, double L)
{
    std::vector<SaddleConnection> out;
    if (!(L > 0.0))
        return out;
    const double Lt = L * (1.0 + 1e-12);
    const double ang_tol = 1e-12;

    for (int e = 0; e < s.num_edges(); ++e)
        if (std::abs(s.edge_vectors()[e]) <= Lt)
            out.push_back(edge_connection(s, e));

    struct Node {
        int triangle;
        Complex offset;
        int entry;
        Complex right, left; // unit vectors bounding the open wedge
        int parent;
        int via;             // side of the parent triangle crossed to get here
    };
    std::vector<Node> nodes;

    for (int t0 = 0; t0 < s.num_triangles(); ++t0) {
        for (int k = 0; k < 3; ++k) {
            nodes.clear();
            Complex o0 = -s.local_vertex(t0, k);
            Complex r0 = o0 + s.local_vertex(t0, (k + 1) % 3);
            Complex l0 = o0 + s.local_vertex(t0, (k + 2) % 3);
            if (seg_distance(r0, l0) > Lt)
                continue;
            int x0 = (k + 1) % 3;
            Corner nb = s.opposite(t0, x0);
            nodes.push_back({nb.triangle, neighbour_offset(s, t0, o0, x0, nb.triangle, nb.side), nb.side,
                             r0 / std::abs(r0), l0 / std::abs(l0), -1, x0});
            for (size_t qi = 0; qi < nodes.size(); ++qi) {
                const Node n = nodes[qi];
                const int t = n.triangle;
                auto W = [&](int j) { return n.offset + s.local_vertex(t, j % 3); };
                const int a = (n.entry + 2) % 3;
                const Complex w = W(a);
                const double wl = std::abs(w);
                const Complex wu = w / wl;
                const double cr = cross(n.right, wu), cl = cross(wu, n.left);
                const bool inside = cr > ang_tol && cl > ang_tol;
                if (inside && wl <= Lt && canonical(w)) {
                    SaddleConnection c;
                    c.holonomy = w;
                    c.start_corner = {t0, k};
                    c.start_vertex = s.corner_vertex(t0, k);
                    c.start_angle = s.angle_in_corner({t0, k}, std::arg(w));
                    c.end_vertex = s.corner_vertex(t, a);
                    c.end_angle = s.angle_in_corner({t, a}, std::arg(-w));
                    // rebuild the crossing record from the parent chain
                    std::vector<Crossing> rec;
                    rec.push_back({t, n.entry, -1});
                    int via = n.via;
                    for (int p = n.parent; p >= 0; p = nodes[p].parent) {
                        rec.push_back({nodes[p].triangle, nodes[p].entry, via});
                        via = nodes[p].via;
                    }
                    rec.push_back({t0, -1, via});
                    std::reverse(rec.begin(), rec.end());
                    c.crossings = std::move(rec);
                    out.push_back(std::move(c));
                }
                // children: side entry+1 lies between the right endpoint and the apex,
                // side entry+2 between the apex and the left endpoint
                struct Child {
                    int side;
                    Complex r, l;
                };
                Child kids[2];
                int nk = 0;
                if (inside) {
                    kids[nk++] = {(n.entry + 1) % 3, n.right, wu};
                    kids[nk++] = {(n.entry + 2) % 3, wu, n.left};
                } else if (cr <= ang_tol) {
                    kids[nk++] = {(n.entry + 2) % 3, n.right, n.left};
                } else {
                    kids[nk++] = {(n.entry + 1) % 3, n.right, n.left};
                }
                for (int ci = 0; ci < nk; ++ci) {
                    const Child& ch = kids[ci];
                    if (seg_distance(W(ch.side), W(ch.side + 1)) > Lt)
                        continue;
                    Corner nb2 = s.opposite(t, ch.side);
                    nodes.push_back({nb2.triangle, neighbour_offset(s, t, n.offset, ch.side, nb2.triangle, nb2.side),
                                     nb2.side, ch.r, ch.l, static_cast<int>(qi), ch.side});
                }
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const SaddleConnection& a, const SaddleConnection& b) {
        return std::make_tuple(a.length(), a.holonomy.real(), a.holonomy.imag(), a.start_vertex, a.start_angle) <
               std::make_tuple(b.length(), b.holonomy.real(), b.holonomy.imag(), b.start_vertex, b.start_angle);
    });
    return out;
}

SaddleConnection shortest_saddle_connection(const TranslationSurface& s)
{
    double L = s.edge_vectors().empty() ? 0.0 : std::abs(s.edge_vectors()[0]);
    for (const Complex& z : s.edge_vectors())
        L = std::min(L, std::abs(z));
    auto all = enumerate_saddle_connections(s, L);
    // ties in length are broken by lexicographic holonomy
    auto best = std::min_element(all.begin(), all.end(), [](const SaddleConnection& a, const SaddleConnection& b) {
        if (std::abs(a.length() - b.length()) > 1e-12 * std::max(a.length(), b.length()))
            return a.length() < b.length();
        return std::make_pair(a.holonomy.real(), a.holonomy.imag()) <
               std::make_pair(b.holonomy.real(), b.holonomy.imag());
    });
    return *best;
}

namespace {

// Developed positions of the triangles along a non-edge connection: offset of
// each visited triangle, with the start vertex at the origin.
std::vector<Complex> develop(const TranslationSurface& s, const SaddleConnection& c)
{
    std::vector<Complex> offs;
    const auto& rec = c.crossings;
    Complex o = -s.local_vertex(rec[0].triangle, c.start_corner.side);
    offs.push_back(o);
    for (size_t i = 0; i + 1 < rec.size(); ++i) {
        o = neighbour_offset(s, rec[i].triangle, o, rec[i].exit_side, rec[i + 1].triangle, rec[i + 1].entry_side);
        offs.push_back(o);
    }
    return offs;
}

} // namespace

std::vector<int> homology_chain(const TranslationSurface& s, const SaddleConnection& c)
{
    std::vector<int> chain(s.num_edges(), 0);
    if (c.is_edge()) {
        Complex z = s.edge_vectors()[c.edge];
        chain[c.edge] = std::abs(c.holonomy - z) <= std::abs(c.holonomy + z) ? 1 : -1;
        return chain;
    }
    const auto& rec = c.crossings;
    std::vector<Complex> offs = develop(s, c);
    const Complex w = c.holonomy;
    int p = c.start_corner.side; // local index of the current chain point
    auto walk = [&](int t, int from, int to) {
        if (from == to)
            return;
        if (to == (from + 1) % 3)
            chain[s.side_edge(t, from)] += s.side_sign(t, from);
        else
            chain[s.side_edge(t, to)] -= s.side_sign(t, to);
    };
    for (size_t i = 0; i < rec.size(); ++i) {
        const int t = rec[i].triangle;
        if (i + 1 == rec.size()) {
            walk(t, p, (rec[i].entry_side + 2) % 3);
            break;
        }
        const int x = rec[i].exit_side;
        Complex e0 = offs[i] + s.local_vertex(t, x), e1 = offs[i] + s.local_vertex(t, (x + 1) % 3);
        int q = cross(w, e0) > cross(w, e1) ? x : (x + 1) % 3;
        walk(t, p, q);
        // the shared side runs backwards in the next triangle
        const int k2 = rec[i + 1].entry_side;
        p = (q == x) ? (k2 + 1) % 3 : k2;
    }
    return chain;
}

std::vector<std::vector<int>> triangle_rows(const TranslationSurface& s)
{
    std::vector<std::vector<int>> rows(s.num_triangles(), std::vector<int>(s.num_edges(), 0));
    for (int t = 0; t < s.num_triangles(); ++t)
        for (int k = 0; k < 3; ++k)
            rows[t][s.side_edge(t, k)] += s.side_sign(t, k);
    return rows;
}

void validate_connection(const TranslationSurface& s, const SaddleConnection& c)
{
    auto bad = [](const std::string& why) { fail("NotOnSurface", "saddle connection inconsistent with surface: " + why); };
    if (!(std::abs(c.holonomy) > 0.0))
        bad("zero holonomy");
    if (c.is_edge()) {
        if (c.edge >= s.num_edges())
            bad("edge out of range");
        Complex z = s.edge_vectors()[c.edge];
        double tol = 1e-9 * std::abs(z);
        if (std::abs(c.holonomy - z) > tol && std::abs(c.holonomy + z) > tol)
            bad("holonomy differs from the edge vector");
        return;
    }
    const auto& rec = c.crossings;
    if (rec.size() < 2)
        bad("crossing record too short");
    for (const Crossing& x : rec)
        if (x.triangle < 0 || x.triangle >= s.num_triangles())
            bad("triangle out of range");
    if (!(c.start_corner.triangle == rec[0].triangle) || c.start_corner.side < 0 || c.start_corner.side > 2 ||
        rec[0].exit_side != (c.start_corner.side + 1) % 3)
        bad("start corner does not face the first exit");
    for (size_t i = 0; i + 1 < rec.size(); ++i) {
        Corner nb = s.opposite(rec[i].triangle, rec[i].exit_side);
        if (!(nb == Corner{rec[i + 1].triangle, rec[i + 1].entry_side}))
            bad("consecutive triangles are not glued along the recorded sides");
        if (i > 0 && (rec[i].exit_side == rec[i].entry_side || rec[i].exit_side < 0))
            bad("invalid exit side");
    }
    std::vector<Complex> offs = develop(s, c);
    const Complex w = c.holonomy;
    const Complex d = w / std::abs(w);
    for (size_t i = 0; i + 1 < rec.size(); ++i) {
        const int t = rec[i].triangle, x = rec[i].exit_side;
        double tol = kVertexTolerance * triangle_scale(s, t);
        double a = cross(d, offs[i] + s.local_vertex(t, x)), b = cross(d, offs[i] + s.local_vertex(t, (x + 1) % 3));
        if (!(a < tol && b > -tol) && !(a > -tol && b < tol))
            bad("developed path is not straight");
    }
    const Crossing& last = rec.back();
    const int apex = (last.entry_side + 2) % 3;
    Complex end = offs.back() + s.local_vertex(last.triangle, apex);
    if (std::abs(end - w) > 1e-9 * std::abs(w))
        bad("holonomy does not match the developed endpoint");
    if (s.corner_vertex(last.triangle, apex) != c.end_vertex ||
        s.corner_vertex(c.start_corner.triangle, c.start_corner.side) != c.start_vertex)
        bad("endpoint vertices do not match");
}

std::vector<ConnectionPiece> connection_pieces(const TranslationSurface& s, const SaddleConnection& c)
{
    if (c.is_edge())
        return {};
    std::vector<ConnectionPiece> out;
    const auto& rec = c.crossings;
    std::vector<Complex> offs = develop(s, c);
    const Complex w = c.holonomy;
    Complex cur = 0.0; // developed start of the current piece
    for (size_t i = 0; i < rec.size(); ++i) {
        const int t = rec[i].triangle;
        Complex next;
        if (i + 1 == rec.size()) {
            next = w;
        } else {
            const int x = rec[i].exit_side;
            Complex wa = offs[i] + s.local_vertex(t, x), wb = offs[i] + s.local_vertex(t, (x + 1) % 3);
            double u = cross(-wa, w) / cross(wb - wa, w);
            next = wa + u * (wb - wa);
        }
        out.push_back({t, cur - offs[i], next - offs[i]});
        cur = next;
    }
    return out;
}

namespace {

bool near_vertex(const TranslationSurface& s, int t, Complex p, double tol)
{
    for (int j = 0; j < 3; ++j)
        if (std::abs(p - s.local_vertex(t, j)) <= tol)
            return true;
    return false;
}

bool pieces_meet(const TranslationSurface& s, const ConnectionPiece& p, const ConnectionPiece& q)
{
    const double scale = triangle_scale(s, p.triangle);
    const double tol = 1e-10 * scale;
    Complex d1 = p.b - p.a, d2 = q.b - q.a;
    double den = cross(d1, d2);
    if (std::abs(den) > 1e-12 * std::abs(d1) * std::abs(d2)) {
        double tp = cross(q.a - p.a, d2) / den;
        double tq = cross(q.a - p.a, d1) / den;
        double etp = tol / std::abs(d1), etq = tol / std::abs(d2);
        if (tp < -etp || tp > 1 + etp || tq < -etq || tq > 1 + etq)
            return false;
        return !near_vertex(s, p.triangle, p.a + tp * d1, tol);
    }
    // parallel pieces: they meet only when collinear and overlapping
    if (std::abs(cross(d1, q.a - p.a)) > tol * std::abs(d1))
        return false;
    Complex u = d1 / std::abs(d1);
    double a0 = 0.0, a1 = std::abs(d1);
    double b0 = dot(q.a - p.a, u), b1 = dot(q.b - p.a, u);
    if (b0 > b1)
        std::swap(b0, b1);
    return std::min(a1, b1) - std::max(a0, b0) > tol;
}

} // namespace

bool interiors_intersect(const TranslationSurface& s, const SaddleConnection& a, const SaddleConnection& b)
{
    if (a.is_edge() && b.is_edge())
        return a.edge == b.edge;
    if (a.is_edge() || b.is_edge()) {
        const SaddleConnection& e = a.is_edge() ? a : b;
        const SaddleConnection& c = a.is_edge() ? b : a;
        for (const Crossing& x : c.crossings)
            if (x.exit_side >= 0 && s.side_edge(x.triangle, x.exit_side) == e.edge)
                return true;
        return false;
    }
    std::vector<ConnectionPiece> pa = connection_pieces(s, a), pb = connection_pieces(s, b);
    for (const ConnectionPiece& p : pa)
        for (const ConnectionPiece& q : pb)
            if (p.triangle == q.triangle && pieces_meet(s, p, q))
                return true;
    return false;
}

bool chains_independent(const EchelonBasis& relations, const std::vector<std::vector<int>>& chains)
{
    EchelonBasis basis = relations;
    for (const auto& ch : chains)
        if (!basis.insert(to_rational(ch)))
            return false;
    return true;
}

bool is_independent_family(const TranslationSurface& s, const std::vector<SaddleConnection>& family)
{
    for (const auto& c : family)
        validate_connection(s, c);
    for (size_t i = 0; i < family.size(); ++i)
        for (size_t j = i + 1; j < family.size(); ++j)
            if (interiors_intersect(s, family[i], family[j]))
                return false;
    EchelonBasis rel(s.num_edges());
    for (const auto& row : triangle_rows(s))
        rel.insert(to_rational(row));
    std::vector<std::vector<int>> chains;
    for (const auto& c : family)
        chains.push_back(homology_chain(s, c));
    return chains_independent(rel, chains);
}

} // namespace flatstrata
