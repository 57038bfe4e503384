#include <cmath>

#include "doctest.h"
#include "flatstrata/errors.hpp"
#include "flatstrata/geodesics.hpp"
#include "flatstrata/half_translation.hpp"

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

// Shoelace area of the base triangles.
double base_area(const HalfTranslationData& d)
{
    double a = 0.0;
    for (int t = 0; t < static_cast<int>(d.gluing.triangles.size()); ++t)
        a += 0.5 * cross(base_side_vector(d, t, 0), base_side_vector(d, t, 1));
    return a;
}

} // namespace

TEST_CASE("pillowcase cover is the unit torus with four marked points")
{
    HalfTranslationSurface q = double_cover(pillowcase());
    CHECK(q.cover.genus() == 1);
    CHECK(stratum_signature(q.cover).orders == std::vector<int>{0, 0, 0, 0});
    CHECK(area(q.cover) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.base_genus == 0);
    CHECK(q.base_orders == std::vector<int>{-1, -1, -1, -1});
    CHECK(q.minus_dimension() == 2);
}

TEST_CASE("Q(2,-1,-1) cover")
{
    HalfTranslationData base = q2_pole_pole(0.4, 0.3137);
    HalfTranslationSurface q = double_cover(base);
    // Gauss–Bonnet on the assembled cover: Σ(cone/2π − 1) = 2g − 2
    double excess = 0.0;
    for (int v = 0; v < q.cover.num_vertices(); ++v)
        excess += q.cover.cone_angle(v) / kTwoPi - 1.0;
    CHECK(excess == doctest::Approx(2 * q.cover.genus() - 2));
    CHECK(stratum_signature(q.cover).orders == std::vector<int>{1, 1, 0, 0});
    CHECK(area(q.cover) == doctest::Approx(2 * base_area(base)).epsilon(1e-12));
    CHECK(q.minus_dimension() == 3);
}

TEST_CASE("trivial sign holonomy is rejected")
{
    CHECK(error_kind([] { double_cover(trivial_sign_torus()); }) == "IsAbelianSquare");
}

TEST_CASE("the involution negates edge vectors and is an involution")
{
    for (const HalfTranslationData& base : {pillowcase(0.5, 0.2137), q2_pole_pole(0.45, 0.1713)}) {
        HalfTranslationSurface q = double_cover(base);
        const auto& z = q.cover.edge_vectors();
        for (int e = 0; e < q.cover.num_edges(); ++e) {
            CHECK(z[q.involution[e]] == -z[e]);
            CHECK(q.involution[q.involution[e]] == e);
        }
        for (int t = 0; t < q.cover.num_triangles(); ++t) {
            CHECK(q.tau_triangle(q.tau_triangle(t)) == t);
            CHECK(q.sheet_labels[q.tau_triangle(t)] != q.sheet_labels[t]);
        }
    }
}

TEST_CASE("lifted connections have equal holonomy and anti-invariant cycles")
{
    HalfTranslationSurface q = double_cover(pillowcase(0.5, 0.2137));
    for (int e = 0; e < 3; ++e) {
        LiftedConnection lift = lift_saddle_connection(q, base_edge_lift(q, e));
        CHECK(std::abs(lift.first.holonomy - lift.second.holonomy) <= 1e-14);
        std::vector<int> image = tau_chain(q, lift.cycle);
        for (size_t k = 0; k < image.size(); ++k)
            CHECK(image[k] == -lift.cycle[k]);
        SaddleConnection t = tau_connection(q, lift.first);
        CHECK(std::abs(t.holonomy + lift.first.holonomy) <= 1e-14);
    }
}

TEST_CASE("minus independence")
{
    HalfTranslationSurface q = double_cover(pillowcase(0.5, 0.2137));
    SaddleConnection side = base_edge_lift(q, 0);
    CHECK(is_minus_independent(q, {side}));
    CHECK_FALSE(is_minus_independent(q, {side, side}));
    std::vector<SaddleConnection> many;
    for (int e = 0; e <= q.minus_dimension(); ++e)
        many.push_back(base_edge_lift(q, e));
    CHECK_FALSE(is_minus_independent(q, many));
}

TEST_CASE("symmetric special triangulation dimensions")
{
    SymmetricTriangulation p = symmetric_special_triangulation(double_cover(pillowcase(0.5, 0.2137)), {1});
    CHECK(p.system_dim == 2);
    CHECK(p.special.surface.num_triangles() == 8);
    SymmetricTriangulation s = symmetric_special_triangulation(double_cover(q2_pole_pole(0.4, 0.3137)), {1});
    CHECK(s.system_dim == 3);
    CHECK(s.special.surface.num_triangles() == 12);
    for (size_t e = 0; e < s.edge_involution.size(); ++e)
        CHECK(s.edge_involution[s.edge_involution[e]] == static_cast<int>(e));
}

TEST_CASE("unsheared pillowcase is not generic")
{
    CHECK(error_kind([] { symmetric_special_triangulation(double_cover(pillowcase()), {1}); }) == "NotGeneric");
}
