#include "flatstrata/models.hpp"

#include <algorithm>
#include <cmath>

#include "flatstrata/errors.hpp"

namespace flatstrata {

TranslationSurface torus(Complex w1, Complex w2, bool mark_first)
{
    if (!(cross(w1, w2) > 0.0))
        fail("DegenerateTriangle", "torus generators must be positively oriented");
    TriangleGluing g;
    g.triangles = {{1, 2, -3}, {3, -1, -2}};
    std::vector<int> marked;
    if (mark_first)
        marked.push_back(1);
    return build_surface(g, {w1, w2, w1 + w2}, marked);
}

TranslationSurface square_torus() { return torus({1, 0}, {0, 1}); }

TranslationSurface sheared_torus(double s) { return torus({1, 0}, {s, 1}, true); }

TranslationSurface octagon(const std::array<Complex, 4>& a)
{
    // side k of the polygon: a_k for k < 4 and −a_{k−4} after
    std::array<Complex, 8> side;
    for (int k = 0; k < 4; ++k) {
        side[k] = a[k];
        side[k + 4] = -a[k];
    }
    std::array<Complex, 8> p;
    p[0] = 0.0;
    for (int k = 1; k < 8; ++k)
        p[k] = p[k - 1] + side[k - 1];
    // diagonal d_j = P_j − P_0 is edge 5 + (j − 2) for j = 2..6; d_1 = a_0, d_7 = a_3
    auto diag = [](int j) { return j == 1 ? 1 : (j == 7 ? 4 : 5 + (j - 2)); };
    auto side_ref = [](int k) { return k < 4 ? k + 1 : -(k - 4 + 1); };
    TriangleGluing g;
    std::vector<Complex> z(9);
    for (int k = 0; k < 4; ++k)
        z[k] = a[k];
    for (int j = 2; j <= 6; ++j)
        z[diag(j) - 1] = p[j];
    for (int j = 1; j <= 6; ++j)
        g.triangles.push_back({diag(j), side_ref(j), -diag(j + 1)});
    return build_surface(g, z);
}

TranslationSurface regular_octagon()
{
    std::array<Complex, 4> a;
    for (int k = 0; k < 4; ++k)
        a[k] = std::polar(1.0, k * kPi / 4);
    return octagon(a);
}

TranslationSurface random_octagon(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<double, 4> ang;
    for (double& t : ang)
        t = kPi * u(rng);
    std::sort(ang.begin(), ang.end());
    std::array<Complex, 4> a;
    for (int k = 0; k < 4; ++k)
        a[k] = std::polar(0.5 + u(rng), ang[k]);
    return rotate(octagon(a), kTwoPi * u(rng));
}

} // namespace flatstrata
