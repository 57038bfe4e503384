#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "doctest.h"
#include "flatstrata/cylinders.hpp"
#include "flatstrata/errors.hpp"
#include "flatstrata/models.hpp"
#include "flatstrata/prym.hpp"

using namespace flatstrata;

namespace {

std::string error_kind(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

// (a, d, e) with e² + 4ad = D, found by brute force.
std::set<std::tuple<int, int, int>> brute_force_triples(int D)
{
    std::set<std::tuple<int, int, int>> out;
    for (int a = 1; a <= D; ++a)
        for (int d = 1; d <= D; ++d)
            for (int e = -D; e <= D; ++e)
                if (e * e + 4 * a * d == D)
                    out.insert({a, d, e});
    return out;
}

const PrymChartPoint kPoint{0.0, 1.0, {0.2, 0.7}, {0.1, 0.5}};

PrymH11Params golden_chart()
{
    for (const auto& p : prym_h11_charts(5))
        if (p.e == 1 && in_chart(p, kPoint))
            return p;
    throw std::runtime_error("no D=5 chart contains the reference point");
}

} // namespace

TEST_CASE("square torus cylinders")
{
    CylinderDecomposition h = cylinder_decomposition(square_torus(), {1, 0});
    REQUIRE(h.cylinders.size() == 1);
    CHECK(h.cylinders[0].width == doctest::Approx(1.0));
    CHECK(h.cylinders[0].height == doctest::Approx(1.0));
    CylinderDecomposition d = cylinder_decomposition(square_torus(), {1, 1});
    REQUIRE(d.cylinders.size() == 1);
    CHECK(d.cylinders[0].width == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.cylinders[0].height == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(is_stable(d));
}

TEST_CASE("decomposition areas add up to the surface area")
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 10; ++i) {
        TranslationSurface s = torus({1.0, 0.0}, {0.3 + 0.05 * i, 1.1});
        for (Complex dir : {Complex(1, 0), Complex(0.3 + 0.05 * i, 1.1), Complex(1.3 + 0.05 * i, 1.1)}) {
            CylinderDecomposition dec = cylinder_decomposition(s, dir);
            CHECK(dec.total_area() == doctest::Approx(area(s)).epsilon(1e-12));
        }
    }
}

TEST_CASE("three-cylinder model surface in H(1,1)")
{
    TranslationSurface s = prym_chart_build(golden_chart(), kPoint).surface;
    CHECK(stratum_signature(s).orders == std::vector<int>{1, 1});
    CylinderDecomposition dec = cylinder_decomposition(s, {1, 0});
    CHECK(dec.cylinders.size() == 3);
    CHECK(dec.signature() == "[1|3] [2|4] [3,4|1,2]");
    CHECK(is_stable(dec));
    CHECK(max_cylinders(stratum_signature(s)) == 3);
}

TEST_CASE("one-cylinder surface in H(1,1) is not stable")
{
    TranslationSurface s = one_cylinder_h11();
    CHECK(stratum_signature(s).orders == std::vector<int>{1, 1});
    CylinderDecomposition dec = cylinder_decomposition(s, {1, 0});
    CHECK(dec.cylinders.size() == 1);
    CHECK_FALSE(is_stable(dec));
}

TEST_CASE("prototype enumeration matches brute force")
{
    for (int D : {5, 8, 9, 12, 13, 16, 17, 20, 21}) {
        std::set<std::tuple<int, int, int>> got;
        for (const auto& f : prym_h11_enumerate(D)) {
            got.insert({f.a, f.d, f.e});
            CHECK(f.lambda == doctest::Approx((f.e + std::sqrt(double(D))) / 2));
            CHECK(f.lambda * f.lambda == doctest::Approx(f.e * f.lambda + f.a * f.d));
        }
        CHECK(got == brute_force_triples(D));
    }
    std::set<std::tuple<int, int, int>> d8{{1, 1, 2}, {1, 1, -2}, {2, 1, 0}, {1, 2, 0}};
    CHECK(brute_force_triples(8) == d8);
    CHECK(brute_force_triples(5) == std::set<std::tuple<int, int, int>>{{1, 1, 1}, {1, 1, -1}});
}

TEST_CASE("invalid discriminants")
{
    for (int D : {7, 4, 3, 10})
        CHECK(error_kind([D] { prym_h11_enumerate(D); }) == "BadDiscriminant");
}

TEST_CASE("eigenform at the reference point")
{
    const PrymH11Params p = golden_chart();
    CylinderSurface cs = prym_chart_build(p, kPoint);
    const auto w = surface_periods(cs);
    // ω·T − λω written out from the matrix of T
    const double a = p.a, b = p.b, d = p.d, e = p.e;
    const std::array<Complex, 4> wT = {e * w[0] + d * w[2], e * w[1] - b * w[2] + a * w[3], a * w[0], b * w[0] + d * w[1]};
    double res = 0.0;
    for (int k = 0; k < 4; ++k)
        res += std::norm(wT[k] - p.lambda * w[k]);
    CHECK(std::sqrt(res) < 1e-10);
    CHECK(eigen_residual(p, w) < 1e-10);
    ChartArea ca = chart_area(p, kPoint);
    CHECK(ca.area == doctest::Approx(area(cs.surface)).epsilon(1e-12));
    CHECK(ca.c1 == doctest::Approx(ca.c2).epsilon(1e-12));
}

TEST_CASE("leaving the chart raises DomainViolation")
{
    const PrymH11Params p = golden_chart();
    PrymChartPoint x = kPoint;
    x.u = {p.lambda * x.r, 0.7};
    CHECK(error_kind([&] { prym_chart_build(p, x); }) == "DomainViolation");
    CHECK(error_kind([&] { kernel_foliation_move(p, kPoint, 0.6); }) == "DomainViolation");
}

TEST_CASE("kernel foliation moves preserve area and absolute periods")
{
    const PrymH11Params p = golden_chart();
    PrymChartPoint same = kernel_foliation_move(p, kPoint, 0.0);
    CHECK(same.u == kPoint.u);
    CHECK(same.v == kPoint.v);
    const double a0 = area(prym_chart_build(p, kPoint).surface);
    for (double t : {0.125, -0.0625, 0.375}) {
        PrymChartPoint y = kernel_foliation_move(p, kPoint, t);
        CHECK(area(prym_chart_build(p, y).surface) == doctest::Approx(a0).epsilon(1e-12));
        CHECK(absolute_periods(p, y) == absolute_periods(p, kPoint));
        PrymChartPoint back = kernel_foliation_move(p, y, -t);
        CHECK(back.u == kPoint.u);
        CHECK(back.v == kPoint.v);
    }
}

TEST_CASE("c1 = c2 > 0 in every chart up to discriminant 100")
{
    for (int D = 5; D <= 100; ++D) {
        if (D % 4 == 2 || D % 4 == 3)
            continue;
        for (const auto& p : prym_h11_charts(D)) {
            ChartArea ca = chart_area(p, {0.0, 1.0, {0.0, 1.0}, {0.0, 1.0}});
            CHECK(ca.c1 > 0.0);
            CHECK(ca.c1 == doctest::Approx(ca.c2).epsilon(1e-12));
        }
    }
}

TEST_CASE("crossing periods and the kernel foliation")
{
    // A crossing period is absolute exactly when the kernel move u → u + it,
    // v → v − it leaves it fixed, i.e. ξ_j = ζ_j; an absolute crossing must then
    // have ξ_j, ζ_j > 0. In the three-cylinder chart every crossing joins the
    // two distinct zeros, so each one moves.
    for (int D : {5, 8, 12, 13})
        for (const auto& p : prym_h11_charts(D)) {
            if (!chart_nonempty(p))
                continue;
            PrymChartPoint x;
            bool found = false;
            for (int i = 0; i < 60 && !found; ++i)
                for (int j = 0; j < 60 && !found; ++j) {
                    x = {0.0, 1.0, {p.lambda * (i + 0.5) / 60, 1.0}, {(p.lambda + p.a) * (j + 0.5) / 60, 0.01}};
                    found = in_chart(p, x);
                }
            if (!found)
                continue;
            CylinderSurface cs = prym_chart_build(p, x);
            auto cyl = chart_cylinders(p);
            for (int j = 0; j < 3; ++j) {
                const Corner c = cs.surface.edge_sides(cs.crossing_edge[j])[0];
                const bool closed = cs.surface.corner_vertex(c.triangle, c.side) ==
                                    cs.surface.corner_vertex(c.triangle, (c.side + 1) % 3);
                CHECK_FALSE(closed);
                CHECK(cyl[j].xi != cyl[j].zeta);
                if (cyl[j].xi == cyl[j].zeta) {
                    CHECK(cyl[j].xi > 0.0);
                    CHECK(cyl[j].zeta > 0.0);
                }
            }
        }
}

TEST_CASE("normalised widths sum to one")
{
    const PrymH11Params p = golden_chart();
    const double s = normalised_width_scale(p);
    auto cyl = chart_cylinders(p, s);
    // |a1| + |a2| + |a3| + |a4| = 2(λ + a) s
    CHECK(cyl[0].lambda_hat + cyl[1].lambda_hat == doctest::Approx(0.5));
}

TEST_CASE("non-empty chart test agrees with a grid search")
{
    for (int D : {5, 8, 12, 13, 17})
        for (const auto& p : prym_h11_charts(D)) {
            bool hit = false;
            for (int i = 0; i < 100 && !hit; ++i)
                for (int j = 0; j < 100 && !hit; ++j)
                    hit = in_chart(p, {0.0, 1.0, {p.lambda * (i + 0.5) / 100, 1.0}, {(p.lambda + p.a) * (j + 0.5) / 100, 1e-3}});
            if (hit)
                CHECK(chart_nonempty(p));
        }
}
