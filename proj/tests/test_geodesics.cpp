#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "flatstrata/geodesics.hpp"
#include "flatstrata/models.hpp"

using namespace flatstrata;

namespace {

// Primitive lattice vectors of length ≤ L, one per ± pair.
int primitive_pairs(Complex w1, Complex w2, double L)
{
    int count = 0;
    for (int i = -60; i <= 60; ++i)
        for (int j = -60; j <= 60; ++j)
            if (std::gcd(i, j) == 1 && std::abs(double(i) * w1 + double(j) * w2) <= L)
                ++count;
    return count / 2;
}

bool has_holonomy(const std::vector<SaddleConnection>& sc, Complex h)
{
    return std::any_of(sc.begin(), sc.end(), [&](const SaddleConnection& c) {
        return std::abs(c.holonomy - h) < 1e-12 || std::abs(c.holonomy + h) < 1e-12;
    });
}

} // namespace

TEST_CASE("square torus saddle connections up to length 1 and 1.5")
{
    auto one = enumerate_saddle_connections(square_torus(), 1.0);
    CHECK(one.size() == 2);
    CHECK(has_holonomy(one, {1, 0}));
    CHECK(has_holonomy(one, {0, 1}));
    auto more = enumerate_saddle_connections(square_torus(), 1.5);
    CHECK(more.size() == 4);
    for (Complex h : {Complex(1, 0), Complex(0, 1), Complex(1, 1), Complex(1, -1)})
        CHECK(has_holonomy(more, h));
}

TEST_CASE("torus counts agree with primitive lattice vectors")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    for (int i = 0; i < 5; ++i) {
        Complex w1{1.0 + 0.2 * U(rng), 0.1 * U(rng)}, w2{U(rng), 0.9 + 0.2 * U(rng)};
        for (double L : {1.5, 3.0, 6.0})
            CHECK(enumerate_saddle_connections(torus(w1, w2), L).size() == primitive_pairs(w1, w2, L));
    }
}

TEST_CASE("a length below the systole gives no connections")
{
    CHECK(enumerate_saddle_connections(square_torus(), 0.99).empty());
    CHECK(enumerate_saddle_connections(regular_octagon(), 0.99).empty());
}

TEST_CASE("shortest saddle connection")
{
    CHECK(shortest_saddle_connection(square_torus()).length() == doctest::Approx(1.0));
    CHECK(shortest_saddle_connection(scale(square_torus(), 0.37)).length() == doctest::Approx(0.37));
    CHECK(shortest_saddle_connection(regular_octagon()).length() == doctest::Approx(1.0));
}

TEST_CASE("every enumerated connection develops to a straight segment")
{
    std::mt19937_64 rng(22);
    TranslationSurface s = random_octagon(rng);
    auto sc = enumerate_saddle_connections(s, 2.5 * shortest_saddle_connection(s).length());
    REQUIRE(!sc.empty());
    for (const auto& c : sc)
        CHECK_NOTHROW(validate_connection(s, c));
}

TEST_CASE("vertical ray on the square torus returns to the vertex")
{
    TranslationSurface s = with_marked(square_torus(), {1});
    auto angles = direction_angles(s, 0, {0, 1});
    REQUIRE(angles.size() == 1);
    SeparatrixTrace tr = trace_from_angle(s, 0, angles[0], {0}, 10.0);
    CHECK(tr.reason == StopReason::HitSingularity);
    CHECK(tr.length == doctest::Approx(1.0));
}

TEST_CASE("zero budget stops immediately")
{
    TranslationSurface s = regular_octagon();
    SeparatrixTrace tr = trace_from_angle(s, 0, 0.3, {}, 0.0);
    CHECK(tr.reason == StopReason::BudgetExceeded);
    CHECK(tr.path.empty());
}

TEST_CASE("independence of torus families")
{
    TranslationSurface s = square_torus();
    SaddleConnection a = edge_connection(s, 0), b = edge_connection(s, 1);
    CHECK(is_independent_family(s, {a}));
    CHECK(is_independent_family(s, {a, b}));
    CHECK_FALSE(is_independent_family(s, {a, a}));
}
