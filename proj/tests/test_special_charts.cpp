#include <cmath>
#include <random>

#include "doctest.h"
#include "flatstrata/charts.hpp"
#include "flatstrata/errors.hpp"
#include "flatstrata/models.hpp"
#include "flatstrata/prym.hpp"
#include "flatstrata/special.hpp"

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

TranslationSurface generic_octagon(std::mt19937_64& rng)
{
    for (;;) {
        TranslationSurface s = with_marked(random_octagon(rng), {1});
        if (is_generic(s, {1}))
            return s;
    }
}

double max_relative_drift(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double worst = 0.0, scale = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(a[i]));
    }
    return worst / scale;
}

} // namespace

TEST_CASE("genericity of marked tori")
{
    CHECK(is_generic(sheared_torus(0.3), {1}));
    CHECK_FALSE(is_generic(with_marked(square_torus(), {1}), {1}));
    CHECK_FALSE(is_generic(rotate(sheared_torus(0.3), kPi / 2), {1}));
    CHECK(error_kind([] { special_triangulation(with_marked(square_torus(), {1}), {1}); }) == "NotGeneric");
}

TEST_CASE("sheared torus certificate has horizontal margin 0.3")
{
    SpecialTriangulation st = special_triangulation(sheared_torus(0.3), {1});
    DomainCertificate cert = domain_certificate(st);
    CHECK(cert.passes());
    bool found = false;
    for (const auto& e : cert.entries)
        if (e.kind == "HOR") {
            found = true;
            CHECK(e.margin == doctest::Approx(0.3).epsilon(1e-12));
        }
    CHECK(found);
}

TEST_CASE("special triangulation in H(2) with two marked connections")
{
    std::mt19937_64 rng(31);
    int done = 0;
    while (done < 5) {
        TranslationSurface s = with_marked(random_octagon(rng), {1, 2});
        if (!is_generic(s, {1, 2}))
            continue;
        SpecialTriangulation st = special_triangulation(s, {1, 2});
        CHECK(st.surface.num_edges() == 9);
        CHECK(st.surface.num_triangles() == 6);
        CHECK(st.family.num_trees() == 4);
        CHECK(st.surface.marked() == std::vector<int>{1, 2});
        for (Complex z : st.surface.edge_vectors())
            CHECK(z.real() > 0.0);
        CHECK(domain_certificate(st).min_strict_margin() > 0.0);
        ++done;
    }
}

TEST_CASE("reconstruction round trip and lower-unipotent invariance")
{
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    for (int i = 0; i < 20; ++i) {
        SpecialTriangulation st = special_triangulation(generic_octagon(rng), {1});
        const auto& z = st.surface.edge_vectors();
        TranslationSurface back = reconstruct(st.family, st.numbering, z);
        CHECK(max_relative_drift(z, back.edge_vectors()) <= 1e-12);
        for (int k = 0; k < 5; ++k) {
            const double c = U(rng);
            std::vector<Complex> w;
            for (Complex e : z)
                w.push_back({e.real(), e.imag() + c * e.real()});
            CHECK(domain_certificate(st.family, w).passes());
            CHECK_NOTHROW(reconstruct(st.family, st.numbering, w));
        }
    }
}

TEST_CASE("violated inequalities are detected")
{
    SpecialTriangulation st = special_triangulation(sheared_torus(0.3), {1});
    std::vector<Complex> z = st.surface.edge_vectors();
    std::vector<Complex> flipped = z;
    for (Complex& e : flipped)
        e = std::conj(e);
    DomainCertificate cert = domain_certificate(st.family, flipped);
    bool area_fails = false;
    for (const auto& e : cert.entries)
        area_fails = area_fails || (e.kind == "AREA" && e.margin < 0.0);
    CHECK(area_fails);
    // push the generator's horizontal component past the marked edge
    std::vector<Complex> wide = z;
    for (Complex& e : wide)
        if (std::abs(e.imag()) > 0.5)
            e += Complex(1.0, 0.0) * (e.imag() > 0 ? 1.0 : -1.0);
    CHECK(error_kind([&] { reconstruct(st.family, st.numbering, wide); }) != "");
}

TEST_CASE("solution space dimensions")
{
    CHECK(solution_dim(linear_system(square_torus().gluing())) == 2);
    CHECK(solution_dim(linear_system(regular_octagon().gluing())) == 4);
    auto charts = prym_h11_charts(5);
    for (const auto& p : charts) {
        if (p.e != 1 || !in_chart(p, {0.0, 1.0, {0.2, 0.7}, {0.1, 0.5}}))
            continue;
        TranslationSurface s = prym_chart_build(p, {0.0, 1.0, {0.2, 0.7}, {0.1, 0.5}}).surface;
        CHECK(s.num_triangles() == 8);
        CHECK(s.num_edges() == 12);
        CHECK(solution_dim(linear_system(s.gluing())) == 5);
    }
}

TEST_CASE("independence and primary families on the torus")
{
    LinearSystem sys = linear_system(square_torus().gluing());
    CHECK(is_independent(sys, {1, 2}));
    CHECK_FALSE(is_independent(sys, {1, 2, 3}));
    CHECK(is_independent(sys, {}));
    CHECK(primary_family(sys, 1) == std::vector<int>{1, 2});
    CHECK(primary_family(sys, 2) == std::vector<int>{1, 2});
}

TEST_CASE("auxiliary family and area lower bound on the torus")
{
    SpecialTriangulation st = special_triangulation(sheared_torus(0.3), {1});
    std::vector<int> I = primary_family(linear_system(st.family.gluing), 1);
    CHECK(I == std::vector<int>{1, 2});
    AuxiliaryFamily aux = auxiliary_family(st.family, I);
    CHECK(aux.J == std::vector<int>{1});
    const double A = area(st.surface);
    CHECK(area_lower_bound(st.surface, aux) == doctest::Approx(A / 2));
}

TEST_CASE("area lower bound stays below the area in H(2)")
{
    std::mt19937_64 rng(33);
    for (int i = 0; i < 20; ++i) {
        SpecialTriangulation st = special_triangulation(generic_octagon(rng), {1});
        std::vector<int> I = primary_family(linear_system(st.family.gluing), 1);
        CHECK(I.size() == 4);
        AuxiliaryFamily aux = auxiliary_family(st.family, I);
        CHECK(aux.J.size() == 3);
        CHECK(area_lower_bound(st.surface, aux) < area(st.surface));
    }
}

TEST_CASE("coordinate map reproduces every edge vector")
{
    std::mt19937_64 rng(34);
    SpecialTriangulation st = special_triangulation(generic_octagon(rng), {1});
    LinearSystem sys = linear_system(st.family.gluing);
    std::vector<int> I = primary_family(sys, 1);
    CoordinateMap map = coordinate_map(sys, I);
    std::vector<Complex> zI;
    for (int i : I)
        zI.push_back(st.surface.edge_vectors()[i - 1]);
    CHECK(max_relative_drift(st.surface.edge_vectors(), map.evaluate(zI)) <= 1e-12);
}
