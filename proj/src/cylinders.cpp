#include "flatstrata/cylinders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "flatstrata/errors.hpp"
#include "flatstrata/geodesics.hpp"

namespace flatstrata {

double CylinderDecomposition::total_area() const
{
    double a = 0.0;
    for (const Cylinder& c : cylinders)
        a += c.width * c.height;
    return a;
}

std::string CylinderDecomposition::signature() const
{
    std::ostringstream out;
    for (size_t j = 0; j < cylinders.size(); ++j) {
        out << (j ? " " : "") << "[";
        for (size_t i = 0; i < cylinders[j].bottom.size(); ++i)
            out << (i ? "," : "") << cylinders[j].bottom[i] + 1;
        out << "|";
        for (size_t i = 0; i < cylinders[j].top.size(); ++i)
            out << (i ? "," : "") << cylinders[j].top[i] + 1;
        out << "]";
    }
    return out.str();
}

namespace {

constexpr double kAngleMatch = 1e-7;
// Position along a connection where the vertical height probe starts; kept
// away from rational values so the probe avoids vertices of lattice-like
// surfaces.
const double kProbe = 0.5 + 0.1 * (std::sqrt(2.0) - 1.0);

struct Hit {
    int connection = -1;
    double height = 0.0;
    double position = 0.0; // distance from the connection's left end
};

// Follow the upward vertical from a point of triangle t (local coordinates)
// to the first horizontal connection.
Hit vertical_to_border(const TranslationSurface& s, const std::vector<SaddleConnection>& conns,
                       const std::vector<std::vector<ConnectionPiece>>& pieces, const std::vector<int>& edge_conn,
                       int t, Complex p, int excluded_side, int excluded_conn, double budget)
{
    const Complex d(0.0, 1.0);
    double travelled = 0.0;
    for (int guard = 0; guard < 1000000; ++guard) {
        double scale = std::max({std::abs(s.side_vector(t, 0)), std::abs(s.side_vector(t, 1)),
                                 std::abs(s.side_vector(t, 2))});
        const double eps = 1e-12 * scale;
        double best = INFINITY;
        int best_side = -1;
        double best_u = 0.0;
        for (int x = 0; x < 3; ++x) {
            if (x == excluded_side)
                continue;
            Complex wa = s.local_vertex(t, x), wb = s.local_vertex(t, (x + 1) % 3);
            double den = cross(d, wb - wa);
            if (std::abs(den) < 1e-300)
                continue;
            double tau = cross(wa - p, wb - wa) / den;
            double u = cross(wa - p, d) / den;
            if (tau > eps && u >= -1e-12 && u <= 1 + 1e-12 && tau < best) {
                best = tau;
                best_side = x;
                best_u = u;
            }
        }
        // interior pieces of non-edge connections inside this triangle
        Hit inner;
        double inner_tau = INFINITY;
        for (size_t c = 0; c < conns.size(); ++c) {
            double along = 0.0;
            for (const ConnectionPiece& pc : pieces[c]) {
                double len = std::abs(pc.b - pc.a);
                if (pc.triangle == t && !(static_cast<int>(c) == excluded_conn && travelled == 0.0)) {
                    double den = cross(d, pc.b - pc.a);
                    if (std::abs(den) > 1e-300) {
                        double tau = cross(pc.a - p, pc.b - pc.a) / den;
                        double u = cross(pc.a - p, d) / den;
                        if (tau > eps && u >= -1e-9 && u <= 1 + 1e-9 && tau < inner_tau) {
                            inner_tau = tau;
                            inner.connection = static_cast<int>(c);
                            inner.position = along + std::clamp(u, 0.0, 1.0) * len;
                        }
                    }
                }
                along += len;
            }
        }
        if (inner.connection >= 0 && inner_tau <= best) {
            inner.height = travelled + inner_tau;
            return inner;
        }
        if (best_side < 0)
            fail("AmbiguousRay", "vertical probe left its triangle through a vertex");
        travelled += best;
        if (travelled > budget)
            fail("NotPeriodic", "vertical probe exceeded the length budget");
        const int e = s.side_edge(t, best_side);
        Complex q = p + best * d;
        if (edge_conn[e] >= 0) {
            Complex wa = s.local_vertex(t, best_side), wb = s.local_vertex(t, (best_side + 1) % 3);
            Complex left = wa.real() < wb.real() ? wa : wb;
            (void)best_u;
            return {edge_conn[e], travelled, std::abs(q - left)};
        }
        Corner nb = s.opposite(t, best_side);
        p = q - s.local_vertex(t, (best_side + 1) % 3) + s.local_vertex(nb.triangle, nb.side);
        t = nb.triangle;
        excluded_side = nb.side;
    }
    fail("NotPeriodic", "vertical probe did not terminate");
}

} // namespace

CylinderDecomposition cylinder_decomposition(const TranslationSurface& s0, Complex direction)
{
    if (std::abs(direction) == 0.0)
        fail("BadDirection", "direction must be nonzero");
    const Complex unit = direction / std::abs(direction);
    const TranslationSurface s = rotate(s0, -std::arg(unit));
    const double budget = 1e3 * s.diameter_bound();

    CylinderDecomposition dec;
    dec.direction = unit;
    std::vector<SaddleConnection> conns;
    for (int v = 0; v < s.num_vertices(); ++v) {
        for (double a : direction_angles(s, v, Complex(1.0, 0.0))) {
            SeparatrixTrace tr = trace_from_angle(s, v, a, {}, budget);
            if (tr.reason != StopReason::HitSingularity)
                fail("NotPeriodic", "separatrix from vertex " + std::to_string(v + 1) + " does not close", v + 1);
            SaddleConnection c = connection_from_trace(s, tr);
            ParallelConnection pc;
            pc.length = std::abs(c.holonomy);
            pc.holonomy = pc.length * unit;
            pc.start_vertex = v;
            pc.end_vertex = tr.hit_vertex;
            pc.start_angle = tr.origin_angle;
            pc.end_angle = tr.hit_angle;
            dec.connections.push_back(pc);
            conns.push_back(c);
        }
    }
    const int n = static_cast<int>(conns.size());

    auto find_start = [&](int v, double angle) {
        double cone = s.cone_angle(v);
        for (int i = 0; i < n; ++i) {
            if (dec.connections[i].start_vertex != v)
                continue;
            double diff = std::abs(wrap_angle(dec.connections[i].start_angle - angle, cone));
            if (std::min(diff, cone - diff) < kAngleMatch)
                return i;
        }
        fail("NotPeriodic", "parallel connections do not close up into cylinder borders");
    };
    std::vector<int> bottom_next(n), top_next(n);
    for (int i = 0; i < n; ++i) {
        const auto& c = dec.connections[i];
        bottom_next[i] = find_start(c.end_vertex, c.end_angle - kPi);
        top_next[i] = find_start(c.end_vertex, c.end_angle + kPi);
    }

    std::vector<std::vector<ConnectionPiece>> pieces(n);
    std::vector<int> edge_conn(s.num_edges(), -1);
    for (int i = 0; i < n; ++i) {
        if (conns[i].is_edge())
            edge_conn[conns[i].edge] = i;
        else
            pieces[i] = connection_pieces(s, conns[i]);
    }

    std::vector<char> in_bottom(n, 0), in_top(n, 0);
    for (int i0 = 0; i0 < n; ++i0) {
        if (in_bottom[i0])
            continue;
        Cylinder cyl;
        for (int i = i0; !in_bottom[i]; i = bottom_next[i]) {
            in_bottom[i] = 1;
            cyl.bottom.push_back(i);
            cyl.width += dec.connections[i].length;
        }
        // probe upwards from a point of bottom[0]
        const SaddleConnection& c = conns[i0];
        Hit hit;
        double start_pos;
        if (c.is_edge()) {
            auto sides = s.edge_sides(c.edge);
            Corner up = s.side_vector(sides[0].triangle, sides[0].side).real() > 0 ? sides[0] : sides[1];
            Complex a = s.local_vertex(up.triangle, up.side);
            Complex p = a + kProbe * s.side_vector(up.triangle, up.side);
            start_pos = kProbe * dec.connections[i0].length;
            hit = vertical_to_border(s, conns, pieces, edge_conn, up.triangle, p, up.side, -1, budget);
        } else {
            const auto& pcs = pieces[i0];
            size_t longest = 0;
            double along = 0.0, start_along = 0.0;
            for (size_t k = 0; k < pcs.size(); ++k) {
                if (std::abs(pcs[k].b - pcs[k].a) > std::abs(pcs[longest].b - pcs[longest].a)) {
                    longest = k;
                    start_along = along;
                }
                along += std::abs(pcs[k].b - pcs[k].a);
            }
            if (longest == 0)
                start_along = 0.0;
            const ConnectionPiece& pc = pcs[longest];
            Complex p = pc.a + kProbe * (pc.b - pc.a);
            start_pos = start_along + kProbe * std::abs(pc.b - pc.a);
            hit = vertical_to_border(s, conns, pieces, edge_conn, pc.triangle, p, -1, -1, budget);
        }
        cyl.height = hit.height;
        for (int i = hit.connection; !in_top[i]; i = top_next[i]) {
            in_top[i] = 1;
            cyl.top.push_back(i);
        }
        if (cyl.top.empty() || cyl.top.front() != hit.connection)
            fail("NotPeriodic", "top border of a cylinder was already assigned");
        cyl.twist = wrap_angle(start_pos - hit.position, cyl.width);
        dec.cylinders.push_back(cyl);
    }
    return dec;
}

bool is_stable(const CylinderDecomposition& dec)
{
    return std::all_of(dec.connections.begin(), dec.connections.end(),
                       [](const ParallelConnection& c) { return c.start_vertex == c.end_vertex; });
}

int max_cylinders(const StratumSignature& sig) { return static_cast<int>(sig.orders.size()) + sig.genus - 1; }

CylinderSurface cylinder_surface(const std::vector<double>& lengths, const std::vector<CylinderSpec>& cylinders)
{
    const int n = static_cast<int>(lengths.size());
    std::vector<Complex> z;
    for (double l : lengths)
        z.emplace_back(l, 0.0);
    TriangleGluing g;
    CylinderSurface out;
    for (const CylinderSpec& c : cylinders) {
        const int p = static_cast<int>(c.bottom.size()), q = static_cast<int>(c.top.size());
        if (p == 0 || q == 0)
            fail("BadGluing", "cylinder with an empty border");
        std::vector<double> X(p + 1, 0.0), Y(q + 1, 0.0);
        for (int i = 0; i < p; ++i)
            X[i + 1] = X[i] + lengths.at(c.bottom[i]);
        for (int j = 0; j < q; ++j)
            Y[j + 1] = Y[j] + lengths.at(c.top[j]);
        if (std::abs(X[p] - Y[q]) > 1e-9 * X[p])
            fail("EquationViolation", "cylinder borders have different lengths");
        const int crossing = static_cast<int>(z.size()) + 1;
        z.emplace_back(c.twist, c.height);
        out.crossing_edge.push_back(crossing - 1);
        int i = 0, j = 0, cur = crossing;
        while (i < p || j < q) {
            bool advance_bottom = j == q || (i < p && X[i + 1] <= c.twist + Y[j + 1]);
            int ni = advance_bottom ? i + 1 : i, nj = advance_bottom ? j : j + 1;
            int next;
            if (ni == p && nj == q) {
                next = crossing;
            } else {
                next = static_cast<int>(z.size()) + 1;
                z.emplace_back(c.twist + Y[nj] - X[ni], c.height);
            }
            if (advance_bottom)
                g.triangles.push_back({c.bottom[i] + 1, next, -cur});
            else
                g.triangles.push_back({next, -(c.top[j] + 1), -cur});
            i = ni;
            j = nj;
            cur = next;
        }
    }
    (void)n;
    out.surface = build_surface(g, z);
    return out;
}

TranslationSurface one_cylinder_h11()
{
    const std::vector<double> lengths = {1.0, std::sqrt(2.0) - 0.3, 0.7 + std::sqrt(3.0) / 10, 0.5};
    std::vector<int> top = {0, 1, 2, 3};
    do {
        // the top border's total length must equal the bottom's, which holds
        // for any order; rotate so top[0] differs from bottom[0]
        CylinderSpec c{{0, 1, 2, 3}, top, 1.0, 0.3};
        try {
            CylinderSurface cs = cylinder_surface(lengths, {c});
            const TranslationSurface& s = cs.surface;
            if (stratum_signature(s).orders != std::vector<int>{1, 1})
                continue;
            bool mixed = false;
            for (int e = 0; e < 4; ++e) {
                auto sides = s.edge_sides(e);
                int a = s.corner_vertex(sides[0].triangle, sides[0].side);
                int b = s.corner_vertex(sides[1].triangle, sides[1].side);
                mixed = mixed || a != b;
            }
            if (mixed)
                return s;
        } catch (const Error&) {
        }
    } while (std::next_permutation(top.begin(), top.end()));
    fail("BadGluing", "no one-cylinder H(1,1) surface with mixed borders");
}

} // namespace flatstrata
