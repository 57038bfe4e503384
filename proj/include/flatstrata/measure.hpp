#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "flatstrata/charts.hpp"
#include "flatstrata/io.hpp"
#include "flatstrata/prym.hpp"
#include "flatstrata/special.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

struct EstimateReport {
    std::string quantity;
    std::string params;
    double estimate = 0.0;
    double std_error = 0.0;
    long long samples = 0;  // accepted samples the estimate averages over
    long long draws = 0;    // proposals drawn, including rejected ones
    double acceptance = 1.0;
    std::uint64_t seed = 0;
    int workers = 1;
    double wall_time = 0.0;

    json to_json() const;
};

// CSV with header quantity,params,estimate,stderr,N,seed,acceptance,workers.
std::string csv_header();
std::string csv_row(const EstimateReport& r);

// exp(−Σ|γ_j|²/ε_j² − A) with γ_j the marked edges of s. Throws
// DimensionMismatch when |ε| differs from the number of marked edges or is
// not below the complex dimension 2g + n − 1.
double energy_value(const TranslationSurface& s, const std::vector<double>& eps);

// ∫₀^∞ 2t^{2N−1} e^{−ct²} dt = Γ(N)/c^N.
double radial_split(int N, double c);

// Deterministic parallel sampling. Draw index space is cut into chunks of
// kChunkSize; chunk k uses an mt19937_64 seeded from (seed, k), so the
// sample stream does not depend on the worker count. Each call of `sample`
// produces one accepted sample and adds its values into `acc` (one slot per
// statistic); the number of proposals it consumed is returned.
constexpr long long kChunkSize = 4096;
struct SampleSums {
    std::vector<double> sum, sum_sq;
    long long samples = 0, draws = 0;
};
using Sampler = std::function<long long(std::mt19937_64&, std::vector<double>&)>;
// `make_sampler` is called once per worker so samplers may hold scratch state.
SampleSums run_sampling(long long N, std::uint64_t seed, int workers, int num_stats,
                        const std::function<Sampler()>& make_sampler);
int default_workers();

// Fraction of unit-area flat tori, drawn from the modular fundamental
// domain with density dx dy / y², whose shortest saddle connection is < ε;
// one report per ε.
std::vector<EstimateReport> estimate_torus_small_sc(const std::vector<double>& eps, long long N, std::uint64_t seed,
                                                    int workers = 1);
// Exact value (3/π) ε² (ε ≤ 0.7).
double torus_small_sc_exact(double eps);
// Shortest nonzero vector of the lattice Z w1 + Z w2 (Gauss reduction).
double shortest_lattice_vector(Complex w1, Complex w2);

// Period chart of a fixed triangulation: coordinates z_I on the primary
// family, sampled with real and imaginary parts uniform in [−box, box].
struct StratumChart {
    std::string name;
    TriangleGluing gluing;
    std::vector<int> I;
    CoordinateMap map;
    double box = 2.0;
};
StratumChart stratum_chart(const TranslationSurface& reference, const std::string& name, double box = 2.0);
// "0" (torus), "2" (octagon) or "1,1" (cylinder chart of the golden eigenform).
StratumChart named_stratum_chart(const std::string& stratum, double box = 2.0);

// P(∃ ordered independent family γ_1..γ_m with pairwise disjoint interiors and
// |γ_j| < ε_j √A), conditional on valid draws; one report per ε vector.
// Throws EmptyChart when no valid surface appears in 10⁵ warmup draws.
std::vector<EstimateReport> estimate_stratum_small_sc(const StratumChart& chart, int m,
                                                      const std::vector<std::vector<double>>& eps, long long N,
                                                      std::uint64_t seed, int workers = 1);

// Importance-sampled ∫_D F_ε dμ over the certified domain of a special
// triangulation chart; `ratio` of each report is estimate / Πε_j².
struct EnergyChart {
    std::string name;
    AdmissibleGraphFamily family;
    std::vector<int> I;
    AuxiliaryFamily aux;
    CoordinateMap map;
};
EnergyChart energy_chart(const SpecialTriangulation& st, const std::string& name);
struct EnergyReport {
    EstimateReport report;
    double ratio = 0.0;
    double ratio_error = 0.0;
};
std::vector<EnergyReport> estimate_energy_integral(const EnergyChart& chart, const std::vector<std::vector<double>>& eps,
                                                   long long N, std::uint64_t seed, int workers = 1);
// One proposal of the energy sampler; exposed for tests. Returns false when
// the proposal leaves the support (weight 0). `weight` excludes F-independent
// factors π^m Πε_j².
struct EnergyDraw {
    std::vector<Complex> z; // all edge vectors
    std::vector<double> eta;
    double log_weight = 0.0; // log of Π a_k/|∂η_k/∂y_k| · e^{Ση − A}
    bool in_domain = false;
};
bool energy_draw(const EnergyChart& chart, const std::vector<double>& eps, std::mt19937_64& rng, EnergyDraw& out);

// Sampler inside one H(1,1) cylinder chart of discriminant D, restricted to
// surfaces whose narrowest horizontal cylinder is at most κ₀√A wide (the
// unrestricted chart has infinite unit-area volume).
constexpr double kPrymKappa0 = 1.0;
struct PrymSampler {
    PrymH11Params params;
    double polygon_acceptance = 0.0;
    double c = 0.0; // c₁ = c₂
    double t_max = 1.0;
};
// Chart of discriminant D whose x-polygon fills the largest share of its box.
PrymSampler prym_sampler(int D);
struct PrymDraw {
    PrymChartPoint point;
    double area = 0.0;
    double shortest = 0.0;       // shortest saddle connection / √A (inf if > limit)
    double shortest_oblique = 0.0; // shortest non-horizontal one / √A
    double narrow_width = 0.0;   // min(λ, a) r / √A
};
// Unit-area draw conditioned on min(λ, a) r / √A < width_cap (≤ κ₀);
// saddle connections are searched up to limit·√A. Returns the number of
// proposals consumed.
long long prym_draw(const PrymSampler& ps, double limit, double width_cap, std::mt19937_64& rng, PrymDraw& out);

// (i) saddle connection < ε√A for each ε; (ii) cylinder narrower than κ√A and
// a non-horizontal saddle connection < ε√A for each (ε, κ). (ii) is sampled
// conditionally on a cylinder narrower than the largest κ and rescaled by the
// exact probability of that condition.
struct PrymReports {
    std::vector<EstimateReport> any;
    std::vector<EstimateReport> thin;
};
PrymReports estimate_prym_volumes(int D, const std::vector<double>& eps,
                                  const std::vector<std::pair<double, double>>& eps_kappa, long long N,
                                  std::uint64_t seed, int workers = 1);

// Least-squares slope of log(estimate) against log(parameter), weighted by
// the delta-method variances (unweighted when no errors are given). Throws
// InsufficientGrid (< 3 points) or NonPositiveEstimate.
struct SlopeFit {
    double slope = 0.0;
    double std_error = 0.0;
    double intercept = 0.0;
};
SlopeFit scaling_exponent(const std::vector<double>& params, const std::vector<double>& estimates,
                          const std::vector<double>& errors = {});

} // namespace flatstrata
