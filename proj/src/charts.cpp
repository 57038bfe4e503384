#include "flatstrata/charts.hpp"

#include <algorithm>
#include <cmath>

#include "flatstrata/errors.hpp"

namespace flatstrata {

LinearSystem linear_system(const TriangleGluing& gluing)
{
    LinearSystem sys;
    sys.num_edges = gluing.num_edges();
    for (const auto& tri : gluing.triangles) {
        std::vector<int> row(sys.num_edges, 0);
        for (int r : tri)
            row[std::abs(r) - 1] += r > 0 ? 1 : -1;
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

int system_rank(const LinearSystem& sys) { return exact_rank(sys.rows); }

int solution_dim(const LinearSystem& sys) { return sys.num_edges - system_rank(sys); }

namespace {

EchelonBasis relations(const LinearSystem& sys)
{
    EchelonBasis rel(sys.num_edges);
    for (const auto& row : sys.rows)
        rel.insert(to_rational(row));
    return rel;
}

RationalRow unit(int n, int i)
{
    RationalRow v(n, Rational(0));
    v[i] = 1;
    return v;
}

} // namespace

bool is_independent(const LinearSystem& sys, const std::vector<int>& I)
{
    // a relation Σ c_i z_i = 0 on V_Γ means Σ c_i e_i lies in the row space
    EchelonBasis rel = relations(sys);
    for (int i : I) {
        if (i < 1 || i > sys.num_edges)
            fail("BadGluing", "index " + std::to_string(i) + " out of range", i);
        if (!rel.insert(unit(sys.num_edges, i - 1)))
            return false;
    }
    return true;
}

std::vector<int> primary_family(const LinearSystem& sys, int m)
{
    EchelonBasis rel = relations(sys);
    std::vector<int> I;
    for (int i = 1; i <= m; ++i) {
        if (!rel.insert(unit(sys.num_edges, i - 1)))
            fail("MarkedDependent", "marked edges 1.." + std::to_string(m) + " are dependent", i);
        I.push_back(i);
    }
    for (int i = m + 1; i <= sys.num_edges; ++i)
        if (rel.insert(unit(sys.num_edges, i - 1)))
            I.push_back(i);
    return I;
}

AuxiliaryFamily auxiliary_family(const AdmissibleGraphFamily& family, const std::vector<int>& I)
{
    const auto& tris = family.gluing.triangles;
    const int F = static_cast<int>(tris.size());
    const auto children = family.child_edges();
    AuxiliaryFamily aux;
    for (size_t k = family.m; k < I.size(); ++k) {
        const int e = I[k] - 1;
        int tri = -1;
        for (int t = 0; t < F && tri < 0; ++t)
            if (std::find(children[t].begin(), children[t].end(), e) != children[t].end())
                tri = t;
        for (int t = 0; t < F && tri < 0; ++t)
            for (int r : tris[t])
                if (std::abs(r) - 1 == e)
                    tri = t;
        int j = -1;
        bool skipped = false;
        for (int r : tris[tri]) {
            int idx = std::abs(r);
            if (idx == I[k] && !skipped) {
                skipped = true;
                continue;
            }
            if (j < 0 || idx < j)
                j = idx;
        }
        aux.J.push_back(j);
        aux.triangles.push_back(tri);
    }
    return aux;
}

std::vector<Complex> CoordinateMap::evaluate(const std::vector<Complex>& zI) const
{
    std::vector<Complex> z(coef.size());
    for (size_t e = 0; e < coef.size(); ++e) {
        Complex acc;
        for (size_t k = 0; k < zI.size(); ++k)
            if (coef[e][k] != 0.0)
                acc += coef[e][k] * zI[k];
        z[e] = acc;
    }
    return z;
}

CoordinateMap coordinate_map(const LinearSystem& sys, const std::vector<int>& I)
{
    const int N = sys.num_edges;
    RationalMatrix rows;
    for (const auto& r : sys.rows)
        rows.push_back(to_rational(r));
    RationalMatrix K = nullspace(rows, N); // d basis vectors of length N
    const int d = static_cast<int>(K.size());
    if (static_cast<int>(I.size()) != d)
        fail("MarkedDependent", "coordinate family size differs from the solution dimension");
    RationalMatrix KI(d, RationalRow(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            KI[a][b] = K[b][I[a] - 1];
    RationalMatrix inv = inverse(KI);
    CoordinateMap cm;
    cm.I = I;
    cm.exact.assign(N, RationalRow(d, Rational(0)));
    cm.coef.assign(N, std::vector<double>(d, 0.0));
    for (int e = 0; e < N; ++e)
        for (int k = 0; k < d; ++k) {
            Rational acc = 0;
            for (int b = 0; b < d; ++b)
                acc += K[b][e] * inv[b][k];
            cm.exact[e][k] = acc;
            cm.coef[e][k] = acc.convert_to<double>();
        }
    return cm;
}

double triangle_signed_area(const TriangleGluing& gluing, int t, const std::vector<Complex>& z)
{
    const auto& tri = gluing.triangles[t];
    auto side = [&](int k) { return tri[k] > 0 ? z[tri[k] - 1] : -z[-tri[k] - 1]; };
    return 0.5 * cross(side(0), side(1));
}

double area_lower_bound(const TranslationSurface& s, const AuxiliaryFamily& aux)
{
    double a = 0.0;
    for (int t : aux.triangles)
        a += s.triangle_area(t);
    return a;
}

} // namespace flatstrata
