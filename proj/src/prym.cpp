#include "flatstrata/prym.hpp"

#include <algorithm>
#include <cmath>

#include "flatstrata/errors.hpp"

namespace flatstrata {

std::vector<PrymH11Family> prym_h11_enumerate(int D)
{
    if (D < 5 || (D % 4 != 0 && D % 4 != 1))
        fail("BadDiscriminant", "discriminant " + std::to_string(D) + " must be >= 5 and 0 or 1 mod 4");
    std::vector<PrymH11Family> out;
    const double sq = std::sqrt(static_cast<double>(D));
    for (int e = -static_cast<int>(sq) - 1; e <= static_cast<int>(sq) + 1; ++e) {
        int rest = D - e * e;
        if (rest <= 0 || rest % 4 != 0)
            continue;
        int ad = rest / 4;
        for (int a = 1; a <= ad; ++a) {
            if (ad % a != 0)
                continue;
            PrymH11Family f;
            f.D = D;
            f.a = a;
            f.d = ad / a;
            f.e = e;
            f.lambda = (e + sq) / 2;
            f.b_min = -f.d * (2 + f.a / f.lambda);
            f.b_max = 2 * f.a + f.lambda;
            out.push_back(f);
        }
    }
    return out;
}

std::vector<PrymH11Params> prym_h11_charts(int D)
{
    std::vector<PrymH11Params> out;
    for (const PrymH11Family& f : prym_h11_enumerate(D))
        for (int b = static_cast<int>(std::ceil(f.b_min)); b <= static_cast<int>(std::floor(f.b_max)); ++b)
            out.push_back({f.D, f.a, b, f.d, f.e, f.lambda});
    return out;
}

std::array<ChartCylinder, 3> chart_cylinders(const PrymH11Params& p, double s)
{
    const double q = p.d / p.lambda;
    return {{{p.lambda * s, 1.0, 0.0, 0.0}, {p.a * s, q, q - 1.0, p.b * s}, {(p.lambda + p.a) * s, 0.0, 1.0, 0.0}}};
}

double normalised_width_scale(const PrymH11Params& p) { return 1.0 / (2.0 * (p.lambda + p.a)); }

namespace {

std::array<Complex, 3> crossings(const PrymH11Params& p, const PrymChartPoint& x, double s)
{
    std::array<Complex, 3> z;
    auto cyl = chart_cylinders(p, s);
    for (int j = 0; j < 3; ++j)
        z[j] = cyl[j].xi * x.u + cyl[j].zeta * x.v + cyl[j].f * x.r;
    // the first and last crossings are the chart coordinates themselves
    z[0] = x.u;
    z[2] = x.v;
    return z;
}

} // namespace

bool in_chart(const PrymH11Params& p, const PrymChartPoint& x, double s)
{
    if (!(x.r > 0.0))
        return false;
    auto cyl = chart_cylinders(p, s);
    auto z = crossings(p, x, s);
    for (int j = 0; j < 3; ++j) {
        if (!(z[j].imag() > 0.0))
            return false;
        if (!(z[j].real() >= 0.0 && z[j].real() < cyl[j].lambda_hat * x.r))
            return false;
    }
    return true;
}

bool chart_nonempty(const PrymH11Params& p)
{
    // Re z2 = q Re u + (q − 1) Re v + b with Re u ∈ [0, λ), Re v ∈ [0, λ + a);
    // the imaginary conditions can always be met by taking Im v small.
    const double q = p.d / p.lambda, w = (q - 1.0) * (p.lambda + p.a);
    const double lo = p.b + std::min(0.0, w), hi = p.b + q * p.lambda + std::max(0.0, w);
    return lo < p.a && hi > 0.0;
}

CylinderSurface prym_chart_build(const PrymH11Params& p, const PrymChartPoint& x, double s)
{
    if (!in_chart(p, x, s))
        fail("DomainViolation", "point outside the cylinder chart");
    const double l1 = p.lambda * x.r * s, l2 = p.a * x.r * s;
    auto z = crossings(p, x, s);
    std::vector<CylinderSpec> cyl = {
        {{2}, {0}, z[0].imag(), z[0].real()},
        {{1}, {3}, z[1].imag(), z[1].real()},
        {{0, 3}, {2, 1}, z[2].imag(), z[2].real()},
    };
    CylinderSurface cs = cylinder_surface({l1, l2, l1, l2}, cyl);
    if (x.theta != 0.0)
        cs.surface = rotate(cs.surface, x.theta);
    return cs;
}

ChartArea chart_area(const PrymH11Params& p, const PrymChartPoint& x, double s)
{
    auto cyl = chart_cylinders(p, s);
    ChartArea out{0.0, 0.0, 0.0};
    for (const ChartCylinder& c : cyl) {
        out.c1 += c.lambda_hat * c.xi;
        out.c2 += c.lambda_hat * c.zeta;
    }
    out.area = out.c1 * x.r * x.u.imag() + out.c2 * x.r * x.v.imag();
    return out;
}

PrymChartPoint kernel_foliation_move(const PrymH11Params& p, const PrymChartPoint& x, double t, double s)
{
    PrymChartPoint y = x;
    y.u += Complex(0.0, t);
    y.v -= Complex(0.0, t);
    if (!in_chart(p, y, s))
        fail("DomainViolation", "kernel foliation move leaves the chart");
    return y;
}

std::array<Complex, 4> absolute_periods(const PrymH11Params& p, const PrymChartPoint& x, double s)
{
    const Complex rot = std::polar(1.0, x.theta);
    const Complex w = x.u + x.v;
    const double q = p.d / p.lambda;
    return {rot * (p.lambda * x.r * s), rot * w, rot * (p.a * x.r * s), rot * (q * w + p.b * x.r * s)};
}

std::array<Complex, 4> surface_periods(const CylinderSurface& cs)
{
    const auto& z = cs.surface.edge_vectors();
    const Complex z1 = z[cs.crossing_edge[0]], z2 = z[cs.crossing_edge[1]], z3 = z[cs.crossing_edge[2]];
    return {z[0], z1 + z3, z[1], z2 + z3};
}

std::array<std::array<double, 4>, 4> real_multiplication(const PrymH11Params& p)
{
    const double a = p.a, b = p.b, d = p.d, e = p.e;
    return {{{e, 0, a, b}, {0, e, 0, d}, {d, -b, 0, 0}, {0, a, 0, 0}}};
}

double eigen_residual(const PrymH11Params& p, const std::array<Complex, 4>& omega)
{
    auto T = real_multiplication(p);
    double res = 0.0, norm = 0.0;
    for (int col = 0; col < 4; ++col) {
        Complex acc;
        for (int row = 0; row < 4; ++row)
            acc += omega[row] * T[row][col];
        res += std::norm(acc - p.lambda * omega[col]);
        norm += std::norm(omega[col]);
    }
    return std::sqrt(res / norm);
}

} // namespace flatstrata
