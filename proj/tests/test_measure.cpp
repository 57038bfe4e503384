#include <cmath>
#include <random>

#include "doctest.h"
#include "flatstrata/errors.hpp"
#include "flatstrata/measure.hpp"
#include "flatstrata/models.hpp"
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

// Shortest nonzero vector of Z w1 + Z w2 by exhaustive search.
double brute_force_shortest(Complex w1, Complex w2)
{
    double best = INFINITY;
    for (int i = -30; i <= 30; ++i)
        for (int j = -30; j <= 30; ++j)
            if (i != 0 || j != 0)
                best = std::min(best, std::abs(double(i) * w1 + double(j) * w2));
    return best;
}

// ∫ e^{−|z₁|²/ε² − A} over a chart with one marked coordinate z₁ and one free
// coordinate z₂: Gauss–Hermite-like midpoint grid over z₁, midpoint grid over
// Re z₂, and the exact integral ∫ e^{−A} dy₂ = 1/|∂A/∂y₂| along the half-line
// where the area is positive.
double nested_quadrature(const EnergyChart& chart, double eps)
{
    const auto& gl = chart.family.gluing;
    auto total_area = [&](const std::vector<Complex>& z) {
        double A = 0.0;
        for (int t = 0; t < static_cast<int>(gl.triangles.size()); ++t)
            A += triangle_signed_area(gl, t, z);
        return A;
    };
    const int n1 = 80, n2 = 200;
    const double R = 5.0 * eps, h1 = 2 * R / n1;
    double sum = 0.0;
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) {
            const Complex z1{-R + (a + 0.5) * h1, -R + (b + 0.5) * h1};
            const double g = std::exp(-std::norm(z1) / (eps * eps)) * h1 * h1;
            const double X = 2.0 * std::abs(z1) + 1e-300, h2 = 2 * X / n2;
            double inner = 0.0;
            for (int c = 0; c < n2; ++c) {
                const double x2 = -X + (c + 0.5) * h2;
                const double A0 = total_area(chart.map.evaluate({z1, {x2, 0.0}}));
                const double slope = total_area(chart.map.evaluate({z1, {x2, 1.0}})) - A0;
                if (!(std::abs(slope) > 0.0))
                    continue;
                const double y = (1.0 - A0) / slope; // a point with A = 1
                if (domain_certificate(chart.family, chart.map.evaluate({z1, {x2, y}})).passes())
                    inner += h2 / std::abs(slope);
            }
            sum += g * inner;
        }
    return sum;
}

} // namespace

TEST_CASE("radial split closed forms")
{
    CHECK(radial_split(1, 1.0) == doctest::Approx(1.0));
    CHECK(radial_split(2, 1.0) == doctest::Approx(1.0));
    CHECK(radial_split(4, 2.0) == doctest::Approx(6.0 / 16.0));
}

TEST_CASE("energy value")
{
    const double d = 1e-4;
    CHECK(energy_value(torus({d, 0.0}, {0.0, 1.0 / d}, true), {1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    TranslationSurface unit = with_marked(square_torus(), {1});
    CHECK(energy_value(unit, {1.0}) == doctest::Approx(std::exp(-2.0)));
    CHECK(error_kind([&] { energy_value(unit, {1.0, 1.0}); }) == "DimensionMismatch");
}

TEST_CASE("shortest lattice vector agrees with exhaustive search")
{
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        Complex w1{U(rng), U(rng)}, w2{U(rng), U(rng)};
        if (std::abs(cross(w1, w2)) < 0.2)
            continue;
        CHECK(shortest_lattice_vector(w1, w2) == doctest::Approx(brute_force_shortest(w1, w2)).epsilon(1e-12));
    }
}

TEST_CASE("torus estimator: exact law and zero threshold")
{
    auto r = estimate_torus_small_sc({0.0, 0.1}, 1000000, 5, 1);
    CHECK(r[0].estimate == 0.0);
    CHECK(std::abs(r[1].estimate - torus_small_sc_exact(0.1)) <= 3 * r[1].std_error);
    CHECK(torus_small_sc_exact(0.1) == doctest::Approx(3.0 / kPi * 0.01));
}

TEST_CASE("estimates do not depend on the worker count")
{
    auto one = estimate_torus_small_sc({0.1, 0.2}, 50000, 9, 1);
    auto three = estimate_torus_small_sc({0.1, 0.2}, 50000, 9, 3);
    for (size_t k = 0; k < one.size(); ++k) {
        CHECK(one[k].estimate == three[k].estimate);
        CHECK(one[k].std_error == three[k].std_error);
        CHECK(one[k].samples == three[k].samples);
    }
    StratumChart chart = named_stratum_chart("2");
    auto s1 = estimate_stratum_small_sc(chart, 1, {{0.2}}, 20000, 4, 1);
    auto s2 = estimate_stratum_small_sc(chart, 1, {{0.2}}, 20000, 4, 2);
    CHECK(s1[0].estimate == s2[0].estimate);
    CHECK(csv_row(s1[0]) != csv_row(s2[0])); // only the worker column differs
}

TEST_CASE("stratum indicator saturates for large thresholds")
{
    auto r = estimate_stratum_small_sc(named_stratum_chart("2"), 1, {{3.0}}, 2000, 6, 1);
    CHECK(r[0].estimate == doctest::Approx(1.0));
    CHECK(r[0].acceptance > 0.0);
    CHECK(r[0].acceptance < 1.0);
    CHECK(error_kind([] { estimate_stratum_small_sc(named_stratum_chart("2"), 2, {{0.1}}, 100, 1, 1); }) ==
          "DimensionMismatch");
}

TEST_CASE("energy estimator matches nested quadrature on the torus chart")
{
    EnergyChart chart = energy_chart(special_triangulation(sheared_torus(0.3), {1}), "torus");
    const double eps = 0.2;
    const double quad = nested_quadrature(chart, eps);
    // frozen closed form of the same integral: half of the Gaussian mass
    CHECK(quad == doctest::Approx(kPi * eps * eps / 2).epsilon(2e-2));
    auto r = estimate_energy_integral(chart, {{eps}}, 200000, 3, 1);
    CHECK(std::abs(r[0].report.estimate - quad) <= 3 * r[0].report.std_error + 2e-2 * quad);
}

TEST_CASE("slope fitting")
{
    std::vector<double> x = {0.05, 0.1, 0.2, 0.4}, y;
    for (double v : x)
        y.push_back(3.0 * v * v);
    SlopeFit fit = scaling_exponent(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(error_kind([] { scaling_exponent({0.1, 0.2}, {1.0, 2.0}); }) == "InsufficientGrid");
    CHECK(error_kind([] { scaling_exponent({0.1, 0.2, 0.3}, {1.0, 0.0, 2.0}); }) == "NonPositiveEstimate");
    SlopeFit weighted = scaling_exponent(x, y, {1e-3, 1e-3, 1e-3, 1e-3});
    CHECK(weighted.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(weighted.std_error >= 0.0);
}

TEST_CASE("CSV rows quote fields containing commas")
{
    EstimateReport r;
    r.quantity = "stratum_small_sc";
    r.params = "stratum=1,1;eps=0.1";
    r.estimate = 0.25;
    r.samples = 10;
    const std::string row = csv_row(r);
    CHECK(row.find("\"stratum=1,1;eps=0.1\"") != std::string::npos);
    CHECK(csv_header() == "quantity,params,estimate,stderr,N,seed,acceptance,workers\n");
}
