#include <cmath>
#include <random>

#include "doctest.h"
#include "flatstrata/errors.hpp"
#include "flatstrata/io.hpp"
#include "flatstrata/models.hpp"
#include "flatstrata/surface.hpp"

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

// Shoelace area of the polygon with the given consecutive sides.
double shoelace(const std::vector<Complex>& sides)
{
    Complex p = 0.0;
    double twice = 0.0;
    for (Complex s : sides) {
        twice += cross(p, p + s);
        p += s;
    }
    return twice / 2;
}

} // namespace

TEST_CASE("square torus has genus one and a single marked point")
{
    TranslationSurface s = square_torus();
    CHECK(s.genus() == 1);
    CHECK(s.num_vertices() == 1);
    CHECK(stratum_signature(s).orders == std::vector<int>{0});
    CHECK(area(s) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("regular octagon lies in H(2) with a 6π cone point")
{
    TranslationSurface s = regular_octagon();
    CHECK(s.num_triangles() == 6);
    CHECK(s.num_vertices() == 1);
    CHECK(s.cone_angle(0) == doctest::Approx(6 * kPi).epsilon(1e-12));
    CHECK(stratum_signature(s).orders == std::vector<int>{2});
    CHECK(s.genus() == 2);
}

TEST_CASE("octagon area matches the shoelace formula")
{
    std::vector<Complex> sides;
    for (int k = 0; k < 8; ++k)
        sides.push_back(std::polar(1.0, k * kPi / 4));
    const double oracle = shoelace(sides);
    CHECK(oracle == doctest::Approx(2 * (1 + std::sqrt(2.0))).epsilon(1e-14));
    CHECK(area(regular_octagon()) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("broken closure raises EquationViolation")
{
    TranslationSurface s = square_torus();
    std::vector<Complex> z = s.edge_vectors();
    z[2] = {1.1, 1.0};
    CHECK(error_kind([&] { build_surface(s.gluing(), z); }) == "EquationViolation");
}

TEST_CASE("a gluing using an edge three times is rejected")
{
    TriangleGluing g;
    g.triangles = {{1, 2, -3}, {1, -1, -2}};
    CHECK(!error_kind([&] { build_surface(g, {{1, 0}, {0, 1}, {1, 1}}); }).empty());
}

TEST_CASE("area is homogeneous of degree two and rotations invert")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        TranslationSurface s = random_octagon(rng);
        const double t = 0.3 + 0.1 * i;
        CHECK(area(scale(s, t)) == doctest::Approx(t * t * area(s)).epsilon(1e-12));
        CHECK(area(transform(s, t, 0, 0, t)) == doctest::Approx(t * t * area(s)).epsilon(1e-12));
        TranslationSurface back = rotate(rotate(s, 0.1 * i + 0.05), -(0.1 * i + 0.05));
        for (int e = 0; e < s.num_edges(); ++e)
            CHECK(std::abs(back.edge_vectors()[e] - s.edge_vectors()[e]) <= 1e-12 * std::abs(s.edge_vectors()[e]));
        TranslationSurface same = transform(s, 1, 0, 0, 1);
        CHECK(same.edge_vectors() == s.edge_vectors());
    }
}

TEST_CASE("cone angles sum to 2π(2g − 2 + n)")
{
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
        TranslationSurface s = random_octagon(rng);
        double total = 0.0;
        for (int v = 0; v < s.num_vertices(); ++v)
            total += s.cone_angle(v);
        CHECK(total == doctest::Approx(kTwoPi * (2 * s.genus() - 2 + s.num_vertices())).epsilon(1e-12));
    }
}

TEST_CASE("surface documents round-trip through JSON")
{
    TranslationSurface s = sheared_torus(0.3);
    SurfaceDocument doc = parse_surface_document(surface_to_json(s));
    TranslationSurface t = build_surface(doc.gluing, doc.edge_vectors, doc.marked);
    CHECK(t.edge_vectors() == s.edge_vectors());
    CHECK(t.marked() == s.marked());
    CHECK(t.gluing().triangles == s.gluing().triangles);
}
