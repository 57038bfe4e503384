#include "flatstrata/measure.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "flatstrata/errors.hpp"
#include "flatstrata/geodesics.hpp"
#include "flatstrata/models.hpp"

namespace flatstrata {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

double elapsed(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// "eps=0.1" for one scale, "eps1=0.1;eps2=0.3" for several.
std::string eps_params(const std::vector<double>& v)
{
    if (v.size() == 1)
        return fmt::format("eps={}", v[0]);
    std::string out;
    for (size_t i = 0; i < v.size(); ++i)
        out += fmt::format("{}eps{}={}", i ? ";" : "", i + 1, v[i]);
    return out;
}

EstimateReport make_report(std::string quantity, std::string params, const SampleSums& sums, int slot,
                           std::uint64_t seed, int workers, double wall)
{
    EstimateReport r;
    r.quantity = std::move(quantity);
    r.params = std::move(params);
    const double n = static_cast<double>(sums.samples);
    if (n > 0) {
        r.estimate = sums.sum[slot] / n;
        double var = n > 1 ? (sums.sum_sq[slot] - n * r.estimate * r.estimate) / (n - 1) : 0.0;
        r.std_error = std::sqrt(std::max(var, 0.0) / n);
    }
    r.samples = sums.samples;
    r.draws = sums.draws;
    r.acceptance = sums.draws > 0 ? n / static_cast<double>(sums.draws) : 0.0;
    r.seed = seed;
    r.workers = workers;
    r.wall_time = wall;
    return r;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t key)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

} // namespace

json EstimateReport::to_json() const
{
    return {{"quantity", quantity}, {"params", params},       {"estimate", estimate},
            {"stderr", std_error},  {"N", samples},           {"draws", draws},
            {"acceptance", acceptance}, {"seed", seed},       {"workers", workers},
            {"wall_time", wall_time}};
}

std::string csv_header() { return "quantity,params,estimate,stderr,N,seed,acceptance,workers\n"; }

std::string csv_row(const EstimateReport& r)
{
    return fmt::format("{},{},{:.17g},{:.17g},{},{},{:.17g},{}\n", csv_field(r.quantity), csv_field(r.params),
                       r.estimate, r.std_error, r.samples, r.seed, r.acceptance, r.workers);
}

double energy_value(const TranslationSurface& s, const std::vector<double>& eps)
{
    const auto& marked = s.marked();
    if (marked.size() != eps.size())
        fail("DimensionMismatch", fmt::format("{} marked connections but {} scales", marked.size(), eps.size()));
    const int dim = 2 * s.genus() + s.num_vertices() - 1;
    if (static_cast<int>(eps.size()) >= dim)
        fail("DimensionMismatch", fmt::format("m = {} must be below the stratum dimension {}", eps.size(), dim));
    double expo = area(s);
    for (size_t j = 0; j < eps.size(); ++j) {
        const double len = std::abs(s.edge_vectors()[marked[j] - 1]);
        expo += len * len / (eps[j] * eps[j]);
    }
    return std::exp(-expo);
}

double radial_split(int N, double c) { return std::tgamma(static_cast<double>(N)) / std::pow(c, N); }

int default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

SampleSums run_sampling(long long N, std::uint64_t seed, int workers, int num_stats,
                        const std::function<Sampler()>& make_sampler)
{
    const long long chunks = (N + kChunkSize - 1) / kChunkSize;
    std::vector<SampleSums> partial(chunks);
    workers = std::max(1, static_cast<int>(std::min<long long>(workers, std::max(1LL, chunks))));
    auto work = [&](int w) {
        Sampler sample = make_sampler();
        std::vector<double> acc(num_stats);
        for (long long k = w; k < chunks; k += workers) {
            SampleSums& p = partial[k];
            p.sum.assign(num_stats, 0.0);
            p.sum_sq.assign(num_stats, 0.0);
            std::mt19937_64 rng = stream(seed, static_cast<std::uint64_t>(k));
            const long long n = std::min(kChunkSize, N - k * kChunkSize);
            for (long long i = 0; i < n; ++i) {
                std::fill(acc.begin(), acc.end(), 0.0);
                p.draws += sample(rng, acc);
                for (int q = 0; q < num_stats; ++q) {
                    p.sum[q] += acc[q];
                    p.sum_sq[q] += acc[q] * acc[q];
                }
            }
            p.samples = n;
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    SampleSums total;
    total.sum.assign(num_stats, 0.0);
    total.sum_sq.assign(num_stats, 0.0);
    for (const SampleSums& p : partial) { // fixed chunk order
        for (int q = 0; q < num_stats; ++q) {
            total.sum[q] += p.sum[q];
            total.sum_sq[q] += p.sum_sq[q];
        }
        total.samples += p.samples;
        total.draws += p.draws;
    }
    return total;
}

// ---------------------------------------------------------------- torus

double shortest_lattice_vector(Complex w1, Complex w2)
{
    for (int iter = 0; iter < 1000; ++iter) {
        if (std::norm(w1) > std::norm(w2))
            std::swap(w1, w2);
        const double mu = std::round((w2 * std::conj(w1)).real() / std::norm(w1));
        if (mu == 0.0)
            break;
        w2 -= mu * w1;
    }
    return std::min(std::abs(w1), std::abs(w2));
}

double torus_small_sc_exact(double eps) { return 3.0 / kPi * eps * eps; }

std::vector<EstimateReport> estimate_torus_small_sc(const std::vector<double>& eps, long long N, std::uint64_t seed,
                                                    int workers)
{
    auto t0 = std::chrono::steady_clock::now();
    const int k = static_cast<int>(eps.size());
    const double y0 = std::sqrt(3.0) / 2.0;
    auto make = [&]() -> Sampler {
        return [&](std::mt19937_64& rng, std::vector<double>& acc) {
            long long draws = 0;
            double x, y;
            do {
                ++draws;
                x = uniform01(rng) - 0.5;
                y = y0 / (1.0 - uniform01(rng)); // density ∝ 1/y² on [√3/2, ∞)
            } while (x * x + y * y < 1.0);
            const double sy = std::sqrt(y);
            const double len = shortest_lattice_vector({1.0 / sy, 0.0}, {x / sy, y / sy});
            for (int i = 0; i < k; ++i)
                acc[i] = len < eps[i] ? 1.0 : 0.0;
            return draws;
        };
    };
    SampleSums sums = run_sampling(N, seed, workers, k, make);
    const double wall = elapsed(t0);
    std::vector<EstimateReport> out;
    for (int i = 0; i < k; ++i)
        out.push_back(make_report("torus_small_sc", fmt::format("eps={}", eps[i]), sums, i, seed, workers, wall));
    return out;
}

// ---------------------------------------------------------------- strata

StratumChart stratum_chart(const TranslationSurface& reference, const std::string& name, double box)
{
    StratumChart c;
    c.name = name;
    c.gluing = reference.gluing();
    LinearSystem sys = linear_system(c.gluing);
    c.I = primary_family(sys, 0);
    c.map = coordinate_map(sys, c.I);
    c.box = box;
    return c;
}

StratumChart named_stratum_chart(const std::string& stratum, double box)
{
    if (stratum == "0")
        return stratum_chart(square_torus(), "H(0)", box);
    if (stratum == "2")
        return stratum_chart(regular_octagon(), "H(2)", box);
    if (stratum == "1,1") {
        PrymH11Params p{5, 1, 0, 1, 1, (1.0 + std::sqrt(5.0)) / 2.0};
        return stratum_chart(prym_chart_build(p, {0.0, 1.0, {0.2, 0.7}, {0.1, 0.5}}).surface, "H(1,1)", box);
    }
    fail("ParseError", "unknown stratum chart '" + stratum + "' (expected 0, 2 or 1,1)");
}

namespace {

bool draw_chart_surface(const StratumChart& chart, std::mt19937_64& rng, TranslationSurface& out)
{
    std::uniform_real_distribution<double> U(-chart.box, chart.box);
    std::vector<Complex> zI(chart.I.size());
    for (Complex& z : zI)
        z = {U(rng), U(rng)};
    std::vector<Complex> z = chart.map.evaluate(zI);
    for (int t = 0; t < static_cast<int>(chart.gluing.triangles.size()); ++t)
        if (!(triangle_signed_area(chart.gluing, t, z) > 0.0))
            return false;
    try {
        out = build_surface(chart.gluing, z);
    } catch (const Error&) {
        return false;
    }
    return true;
}

// Ordered families γ_1..γ_m from `sc` with |γ_j| < bound_j, pairwise disjoint
// interiors and independent.
bool has_small_family(const TranslationSurface& s, const std::vector<SaddleConnection>& sc,
                      const std::vector<double>& bound, std::vector<int>& chosen)
{
    const size_t j = chosen.size();
    if (j == bound.size()) {
        if (j == 1)
            return true;
        std::vector<SaddleConnection> fam;
        for (int c : chosen)
            fam.push_back(sc[c]);
        return is_independent_family(s, fam);
    }
    for (int c = 0; c < static_cast<int>(sc.size()); ++c) {
        if (!(sc[c].length() < bound[j]))
            continue;
        bool ok = std::find(chosen.begin(), chosen.end(), c) == chosen.end();
        for (size_t q = 0; ok && q < chosen.size(); ++q)
            ok = !interiors_intersect(s, sc[chosen[q]], sc[c]);
        if (!ok)
            continue;
        chosen.push_back(c);
        bool found = has_small_family(s, sc, bound, chosen);
        chosen.pop_back();
        if (found)
            return true;
    }
    return false;
}

} // namespace

std::vector<EstimateReport> estimate_stratum_small_sc(const StratumChart& chart, int m,
                                                      const std::vector<std::vector<double>>& eps, long long N,
                                                      std::uint64_t seed, int workers)
{
    auto t0 = std::chrono::steady_clock::now();
    double eps_max = 0.0;
    for (const auto& e : eps) {
        if (static_cast<int>(e.size()) != m)
            fail("DimensionMismatch", fmt::format("each eps vector needs {} entries", m));
        for (double x : e)
            eps_max = std::max(eps_max, x);
    }
    {
        std::mt19937_64 rng = stream(seed, ~0ULL);
        TranslationSurface s;
        bool found = false;
        for (int i = 0; i < 100000 && !found; ++i)
            found = draw_chart_surface(chart, rng, s);
        if (!found)
            fail("EmptyChart", "no valid surface in 100000 warmup draws of chart " + chart.name);
        const int dim = 2 * s.genus() + s.num_vertices() - 1;
        if (m < 1 || m >= dim)
            fail("DimensionMismatch", fmt::format("m = {} must satisfy 1 <= m < {}", m, dim));
    }
    const int k = static_cast<int>(eps.size());
    auto make = [&]() -> Sampler {
        return [&](std::mt19937_64& rng, std::vector<double>& acc) {
            long long draws = 0;
            TranslationSurface s;
            do
                ++draws;
            while (!draw_chart_surface(chart, rng, s));
            const double root = std::sqrt(area(s));
            std::vector<SaddleConnection> sc = enumerate_saddle_connections(s, eps_max * root);
            for (int i = 0; i < k; ++i) {
                std::vector<double> bound;
                for (double e : eps[i])
                    bound.push_back(e * root);
                std::vector<int> chosen;
                acc[i] = has_small_family(s, sc, bound, chosen) ? 1.0 : 0.0;
            }
            return draws;
        };
    };
    SampleSums sums = run_sampling(N, seed, workers, k, make);
    const double wall = elapsed(t0);
    std::vector<EstimateReport> out;
    for (int i = 0; i < k; ++i)
        out.push_back(make_report("stratum_small_sc",
                                  fmt::format("chart={};m={};{};box={}", chart.name, m, eps_params(eps[i]), chart.box),
                                  sums, i, seed, workers, wall));
    return out;
}

// ---------------------------------------------------------------- energy

EnergyChart energy_chart(const SpecialTriangulation& st, const std::string& name)
{
    EnergyChart c;
    c.name = name;
    c.family = st.family;
    LinearSystem sys = linear_system(c.family.gluing);
    c.I = primary_family(sys, c.family.m);
    c.aux = auxiliary_family(c.family, c.I);
    c.map = coordinate_map(sys, c.I);
    return c;
}

bool energy_draw(const EnergyChart& chart, const std::vector<double>& eps, std::mt19937_64& rng, EnergyDraw& out)
{
    const int m = chart.family.m;
    const int d = static_cast<int>(chart.I.size());
    const TriangleGluing& gl = chart.family.gluing;
    std::vector<Complex> zI(d, Complex(0.0, 0.0));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < m; ++j) {
        const double sd = eps[j] / std::sqrt(2.0); // density e^{−|z|²/ε²}/(πε²)
        zI[j] = {sd * normal(rng), sd * normal(rng)};
    }
    out.eta.clear();
    out.log_weight = 0.0;
    out.in_domain = false;
    std::exponential_distribution<double> expo(1.0);
    for (int k = m; k < d; ++k) {
        const int q = k - m;
        const int tri = chart.aux.triangles[q];
        const double a = chart.map.evaluate(zI)[chart.aux.J[q] - 1].real();
        const double x = a * uniform01(rng);
        const double eta = expo(rng);
        if (!(a > 0.0))
            return false;
        zI[k] = {x, 0.0};
        const double area0 = triangle_signed_area(gl, tri, chart.map.evaluate(zI));
        zI[k] = {x, 1.0};
        const double slope = triangle_signed_area(gl, tri, chart.map.evaluate(zI)) - area0;
        if (!(std::abs(slope) > 1e-300))
            return false;
        zI[k] = {x, (eta - area0) / slope};
        out.eta.push_back(eta);
        out.log_weight += std::log(a / std::abs(slope)) + eta;
    }
    out.z = chart.map.evaluate(zI);
    double A = 0.0;
    for (int t = 0; t < static_cast<int>(gl.triangles.size()); ++t)
        A += triangle_signed_area(gl, t, out.z);
    out.log_weight -= A;
    out.in_domain = domain_certificate(chart.family, out.z).passes();
    return true;
}

std::vector<EnergyReport> estimate_energy_integral(const EnergyChart& chart, const std::vector<std::vector<double>>& eps,
                                                   long long N, std::uint64_t seed, int workers)
{
    std::vector<EnergyReport> out;
    const int m = chart.family.m;
    for (size_t g = 0; g < eps.size(); ++g) {
        auto t0 = std::chrono::steady_clock::now();
        const std::vector<double>& e = eps[g];
        if (static_cast<int>(e.size()) != m)
            fail("DimensionMismatch", fmt::format("each eps vector needs {} entries", m));
        double prod = 1.0;
        for (double x : e)
            prod *= x * x;
        const double prefactor = std::pow(kPi, m) * prod;
        auto make = [&]() -> Sampler {
            return [&, draw = EnergyDraw{}](std::mt19937_64& rng, std::vector<double>& acc) mutable {
                if (energy_draw(chart, e, rng, draw) && draw.in_domain)
                    acc[0] = prefactor * std::exp(draw.log_weight);
                return 1LL;
            };
        };
        // every grid point gets its own stream so reports do not depend on the grid
        SampleSums sums = run_sampling(N, seed + g, workers, 1, make);
        EnergyReport r;
        r.report = make_report("energy_integral", fmt::format("chart={};{}", chart.name, eps_params(e)), sums, 0,
                               seed + g, workers, elapsed(t0));
        r.ratio = r.report.estimate / prod;
        r.ratio_error = r.report.std_error / prod;
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------- Prym

namespace {

bool in_polygon(const PrymH11Params& p, double xu, double xv, double r)
{
    const double q = p.d / p.lambda;
    const double x2 = q * xu + (q - 1.0) * xv + p.b * r;
    return x2 >= 0.0 && x2 < p.a * r;
}

} // namespace

PrymSampler prym_sampler(int D)
{
    PrymSampler best;
    best.polygon_acceptance = -1.0;
    for (const PrymH11Params& p : prym_h11_charts(D)) {
        const int G = 200;
        int hit = 0;
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j)
                hit += in_polygon(p, (i + 0.5) / G * p.lambda, (j + 0.5) / G * (p.lambda + p.a), 1.0);
        const double frac = static_cast<double>(hit) / (G * G);
        if (frac > best.polygon_acceptance) {
            best.params = p;
            best.polygon_acceptance = frac;
        }
    }
    const PrymH11Params& p = best.params;
    best.c = chart_area(p, {0.0, 1.0, {0.0, 1.0}, {0.0, 0.0}}).c1;
    best.t_max = std::min(1.0, p.d / p.lambda);
    return best;
}

long long prym_draw(const PrymSampler& ps, double limit, double width_cap, std::mt19937_64& rng, PrymDraw& out)
{
    // Unit-area slice of the cone measure dθ r dr dx dy on the part of the
    // chart whose narrowest cylinder is at most κ₀√A wide. With A = c r s = 1
    // the density of r is ∝ r on (0, κ₀/min(λ, a)], heights are uniform on the
    // segment y_u + y_v = s inside the cone, and x is uniform in the polygon.
    // A width cap below κ₀ samples the same law conditioned on a narrower
    // cylinder, an event of probability (cap/κ₀)².
    const PrymH11Params& p = ps.params;
    const double narrow = std::min(p.lambda, static_cast<double>(p.a));
    const double r = std::min(width_cap, kPrymKappa0) / narrow * std::sqrt(1.0 - uniform01(rng));
    const double s = 1.0 / (ps.c * r);
    long long draws = 0;
    double xu, xv;
    do {
        ++draws;
        xu = uniform01(rng) * p.lambda * r;
        xv = uniform01(rng) * (p.lambda + p.a) * r;
    } while (!in_polygon(p, xu, xv, r));
    const double t = uniform01(rng) * ps.t_max;
    out.point = {0.0, r, {xu, s * (1.0 - t)}, {xv, s * t}};
    CylinderSurface cs = prym_chart_build(p, out.point);
    out.area = area(cs.surface);
    const double root = std::sqrt(out.area);
    std::vector<SaddleConnection> sc = enumerate_saddle_connections(cs.surface, limit * root);
    out.shortest = out.shortest_oblique = kInf;
    for (const SaddleConnection& c : sc) {
        out.shortest = std::min(out.shortest, c.length() / root);
        if (std::abs(c.holonomy.imag()) > 1e-9 * c.length())
            out.shortest_oblique = std::min(out.shortest_oblique, c.length() / root);
    }
    out.narrow_width = narrow * r / root;
    return draws;
}

PrymReports estimate_prym_volumes(int D, const std::vector<double>& eps,
                                  const std::vector<std::pair<double, double>>& eps_kappa, long long N,
                                  std::uint64_t seed, int workers)
{
    const PrymSampler ps = prym_sampler(D);
    const PrymH11Params& p = ps.params;
    const std::string chart = fmt::format("D={};a={};b={};d={};e={}", p.D, p.a, p.b, p.d, p.e);
    PrymReports out;
    if (!eps.empty()) {
        auto t0 = std::chrono::steady_clock::now();
        const double limit = *std::max_element(eps.begin(), eps.end());
        const int k = static_cast<int>(eps.size());
        auto make = [&]() -> Sampler {
            return [&, draw = PrymDraw{}](std::mt19937_64& rng, std::vector<double>& acc) mutable {
                long long n = prym_draw(ps, limit, kPrymKappa0, rng, draw);
                for (int i = 0; i < k; ++i)
                    acc[i] = draw.shortest < eps[i] ? 1.0 : 0.0;
                return n;
            };
        };
        SampleSums sums = run_sampling(N, seed, workers, k, make);
        const double wall = elapsed(t0);
        for (int i = 0; i < k; ++i)
            out.any.push_back(make_report("prym_small_sc", fmt::format("{};eps={}", chart, eps[i]), sums, i, seed,
                                          workers, wall));
    }
    if (!eps_kappa.empty()) {
        // sampled conditionally on a cylinder narrower than the largest κ
        auto t0 = std::chrono::steady_clock::now();
        double limit = 0.0, cap = 0.0;
        for (const auto& ek : eps_kappa) {
            limit = std::max(limit, ek.first);
            cap = std::max(cap, ek.second);
        }
        cap = std::min(cap, kPrymKappa0);
        const double factor = (cap / kPrymKappa0) * (cap / kPrymKappa0);
        const int k = static_cast<int>(eps_kappa.size());
        auto make = [&]() -> Sampler {
            return [&, draw = PrymDraw{}](std::mt19937_64& rng, std::vector<double>& acc) mutable {
                long long n = prym_draw(ps, limit, cap, rng, draw);
                for (int i = 0; i < k; ++i)
                    acc[i] = draw.narrow_width < eps_kappa[i].second && draw.shortest_oblique < eps_kappa[i].first
                                 ? 1.0
                                 : 0.0;
                return n;
            };
        };
        SampleSums sums = run_sampling(N, seed + 1, workers, k, make);
        const double wall = elapsed(t0);
        for (int i = 0; i < k; ++i) {
            EstimateReport r = make_report(
                "prym_thin_cylinder",
                fmt::format("{};eps={};kappa={};width_cap={}", chart, eps_kappa[i].first, eps_kappa[i].second, cap),
                sums, i, seed + 1, workers, wall);
            r.estimate *= factor;
            r.std_error *= factor;
            out.thin.push_back(r);
        }
    }
    return out;
}

// ---------------------------------------------------------------- slopes

SlopeFit scaling_exponent(const std::vector<double>& params, const std::vector<double>& estimates,
                          const std::vector<double>& errors)
{
    const size_t n = params.size();
    if (n < 3 || estimates.size() != n)
        fail("InsufficientGrid", "a slope needs at least three grid points");
    for (size_t i = 0; i < n; ++i)
        if (!(estimates[i] > 0.0) || !(params[i] > 0.0))
            fail("NonPositiveEstimate", fmt::format("grid point {} has a non-positive value", i), static_cast<int>(i));
    bool weighted = errors.size() == n;
    for (size_t i = 0; weighted && i < n; ++i)
        weighted = errors[i] > 0.0;
    std::vector<double> x(n), y(n), w(n, 1.0);
    for (size_t i = 0; i < n; ++i) {
        x[i] = std::log(params[i]);
        y[i] = std::log(estimates[i]);
        if (weighted) {
            const double sl = errors[i] / estimates[i];
            w[i] = 1.0 / (sl * sl);
        }
    }
    double sw = 0, sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        fail("InsufficientGrid", "grid parameters must not all coincide");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (weighted) {
        f.std_error = std::sqrt(1.0 / sxx);
    } else {
        double rss = 0;
        for (size_t i = 0; i < n; ++i) {
            const double res = y[i] - f.intercept - f.slope * x[i];
            rss += res * res;
        }
        f.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

} // namespace flatstrata
