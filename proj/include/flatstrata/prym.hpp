#pragma once

#include <array>
#include <vector>

#include "flatstrata/cylinders.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

// Integer data (a, d, e) of a generator T of O_D with e² + 4ad = D, and the
// closed-form range of admissible b.
struct PrymH11Family {
    int D = 0, a = 0, d = 0, e = 0;
    double lambda = 0.0; // (e + √D)/2
    double b_min = 0.0;  // −d(2 + a/λ)
    double b_max = 0.0;  // 2a + λ
};

struct PrymH11Params {
    int D = 0, a = 0, b = 0, d = 0, e = 0;
    double lambda = 0.0;
};

struct PrymChartPoint {
    double theta = 0.0;
    double r = 1.0;
    Complex u, v;
};

// Per cylinder of the three-cylinder model: width coefficient λ̂_j and the
// crossing period z_j = ξ_j u + ζ_j v + f_j r.
struct ChartCylinder {
    double lambda_hat, xi, zeta, f;
};

// Throws BadDiscriminant unless D ≥ 5 and D ≡ 0, 1 (mod 4).
std::vector<PrymH11Family> prym_h11_enumerate(int D);
// Every integer b in [b_min, b_max] for every family.
std::vector<PrymH11Params> prym_h11_charts(int D);

// Cylinders C1 (bottom a3, top a1), C2 (bottom a2, top a4), C3 (bottom a1 a4,
// top a3 a2) with |a1| = |a3| = λ r s and |a2| = |a4| = a r s, where s is the
// width scale (1, or 1/(2(λ + a)) to normalise Σλ_i = 1).
std::array<ChartCylinder, 3> chart_cylinders(const PrymH11Params& p, double width_scale = 1.0);
double normalised_width_scale(const PrymH11Params& p);

bool in_chart(const PrymH11Params& p, const PrymChartPoint& x, double width_scale = 1.0);
// Whether some point satisfies the chart conditions. The closed-form b-range
// is a superset: for some b the twist of C2 can never land in [0, |a2|).
bool chart_nonempty(const PrymH11Params& p);

// Throws DomainViolation outside the chart.
CylinderSurface prym_chart_build(const PrymH11Params& p, const PrymChartPoint& x, double width_scale = 1.0);

struct ChartArea {
    double area, c1, c2;
};
ChartArea chart_area(const PrymH11Params& p, const PrymChartPoint& x, double width_scale = 1.0);

// u → u + it, v → v − it; throws DomainViolation when leaving the chart.
PrymChartPoint kernel_foliation_move(const PrymH11Params& p, const PrymChartPoint& x, double t,
                                     double width_scale = 1.0);

// ω on the symplectic basis (α₁, β₁, α₂, β₂) in closed form.
std::array<Complex, 4> absolute_periods(const PrymH11Params& p, const PrymChartPoint& x, double width_scale = 1.0);
// The same periods read off a surface built by prym_chart_build.
std::array<Complex, 4> surface_periods(const CylinderSurface& cs);

// Matrix of T on (α₁, β₁, α₂, β₂) (c = 0).
std::array<std::array<double, 4>, 4> real_multiplication(const PrymH11Params& p);
// ‖ω·T − λω‖ / ‖ω‖.
double eigen_residual(const PrymH11Params& p, const std::array<Complex, 4>& omega);

} // namespace flatstrata
