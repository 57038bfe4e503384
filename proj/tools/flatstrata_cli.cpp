#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "flatstrata/charts.hpp"
#include "flatstrata/cylinders.hpp"
#include "flatstrata/errors.hpp"
#include "flatstrata/geodesics.hpp"
#include "flatstrata/io.hpp"
#include "flatstrata/measure.hpp"
#include "flatstrata/models.hpp"
#include "flatstrata/prym.hpp"
#include "flatstrata/special.hpp"

using namespace flatstrata;

namespace {

struct Output {
    bool json_mode = false;
    std::string path;

    void emit(const std::string& text) const
    {
        if (path.empty())
            std::cout << text;
        else
            write_text_file(path, text);
    }
    void emit(const json& j) const { emit(j.dump(2) + "\n"); }
};

void add_output(CLI::App* cmd, Output& out)
{
    cmd->add_flag("--json", out.json_mode, "machine-readable JSON output");
    cmd->add_option("-o,--out", out.path, "write output to a file instead of stdout");
}

Complex parse_complex(const std::string& s)
{
    double re = 0.0, im = 0.0;
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> re >> comma >> im) || comma != ',')
        fail("ParseError", "expected a complex number as re,im but got '" + s + "'");
    return {re, im};
}

std::vector<double> parse_list(const std::string& s, char sep)
{
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail("ParseError", "cannot parse number '" + item + "'");
        }
    }
    return out;
}

json complex_json(Complex z) { return {z.real(), z.imag()}; }

json connection_json(const SaddleConnection& c)
{
    return {{"holonomy", complex_json(c.holonomy)},
            {"length", c.length()},
            {"start_vertex", c.start_vertex},
            {"end_vertex", c.end_vertex},
            {"edge", c.edge >= 0 ? json(c.edge + 1) : json(nullptr)},
            {"triangles_crossed", c.crossings.size()}};
}

json signature_json(const StratumSignature& sig)
{
    return {{"orders", sig.orders}, {"genus", sig.genus}, {"label", "H" + sig.str()}};
}

std::string reports_csv(const std::vector<EstimateReport>& reports)
{
    std::string out = csv_header();
    for (const EstimateReport& r : reports)
        out += csv_row(r);
    return out;
}

// Parameter value `key` inside a report params string "a=1;b=2".
double param_value(const std::string& params, const std::string& key)
{
    std::stringstream in(params);
    std::string item;
    while (std::getline(in, item, ';')) {
        auto eq = item.find('=');
        if (eq != std::string::npos && item.substr(0, eq) == key)
            return parse_list(item.substr(eq + 1), ',').at(0);
    }
    // a single scale is written as eps, several as eps1, eps2, ...
    if (key == "eps1")
        return param_value(params, "eps");
    fail("ParseError", "parameter '" + key + "' missing from '" + params + "'");
}

json slope_json(const SlopeFit& f, const std::string& param)
{
    return {{"parameter", param}, {"slope", f.slope}, {"stderr", f.std_error}, {"intercept", f.intercept}};
}

void emit_reports(const Output& out, const std::vector<EstimateReport>& reports, const SlopeFit* fit,
                  const std::string& param)
{
    if (out.json_mode) {
        json j = {{"format", "flatstrata-estimate/1"}, {"reports", json::array()}};
        for (const EstimateReport& r : reports)
            j["reports"].push_back(r.to_json());
        if (fit)
            j["slope"] = slope_json(*fit, param);
        out.emit(j);
        return;
    }
    std::string text = reports_csv(reports);
    if (fit)
        text += fmt::format("# slope in {}: {:.6f} +- {:.6f}\n", param, fit->slope, fit->std_error);
    out.emit(text);
}

SlopeFit fit_reports(const std::vector<EstimateReport>& reports, const std::vector<double>& grid)
{
    std::vector<double> est, err;
    for (const EstimateReport& r : reports) {
        est.push_back(r.estimate);
        err.push_back(r.std_error);
    }
    return scaling_exponent(grid, est, err);
}

void emit_reports(const Output& out, const std::vector<EstimateReport>& reports, bool slope, const std::string& param,
                  const std::vector<double>& grid)
{
    if (slope) {
        SlopeFit f = fit_reports(reports, grid);
        emit_reports(out, reports, &f, param);
    } else {
        emit_reports(out, reports, nullptr, param);
    }
}

int report_error(const Error& e)
{
    json j = {{"error", e.kind()}, {"message", e.what()}};
    if (e.index() >= 0)
        j["index"] = e.index();
    std::cerr << j.dump() << "\n";
    return e.kind() == "ParseError" || e.kind() == "IOError" ? 1 : 2;
}

std::vector<int> marked_or_default(const std::vector<int>& flag, const TranslationSurface& s)
{
    return flag.empty() ? s.marked() : flag;
}

json prym_chart_json(const PrymH11Params& p, const PrymChartPoint& x, const CylinderSurface& cs, double sw)
{
    ChartArea ca = chart_area(p, x, sw);
    return {{"D", p.D},          {"a", p.a},
            {"b", p.b},          {"d", p.d},
            {"e", p.e},          {"lambda", p.lambda},
            {"u", complex_json(x.u)}, {"v", complex_json(x.v)},
            {"r", x.r},          {"theta", x.theta},
            {"area", ca.area},   {"c1", ca.c1},
            {"c2", ca.c2},       {"eigen_residual", eigen_residual(p, surface_periods(cs))}};
}

// A deterministic interior point of the chart: the centroid of the grid
// points whose real parts satisfy the chart conditions (the real-part domain
// is convex), with Im u = Im v = r·s/2 shifted to keep Im z₂ > 0.
std::optional<PrymChartPoint> central_chart_point(const PrymH11Params& p, double r, double theta, double sw)
{
    const int n = 200;
    const double q = p.d / p.lambda, t = std::min(1.0, q) / 2;
    const double h = r * sw;
    Complex sum = 0.0, sum_v = 0.0;
    int hits = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            PrymChartPoint x{0.0, r, {p.lambda * h * (i + 0.5) / n, h * (1 - t)}, {(p.lambda + p.a) * h * (j + 0.5) / n, h * t}};
            if (in_chart(p, x, sw)) {
                sum += x.u;
                sum_v += x.v;
                ++hits;
            }
        }
    if (hits == 0)
        return std::nullopt;
    PrymChartPoint x{theta, r, sum / double(hits), sum_v / double(hits)};
    if (!in_chart(p, x, sw))
        return std::nullopt;
    return x;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Flat surfaces, special triangulations and small-saddle-connection measures"};
    app.require_subcommand(1);
    Output out;

    // validate
    std::string file;
    auto* validate = app.add_subcommand("validate", "check a surface document");
    validate->add_option("file", file, "surface JSON")->required();
    add_output(validate, out);

    // stratum
    auto* stratum = app.add_subcommand("stratum", "stratum of a surface");
    stratum->add_option("file", file, "surface JSON")->required();
    add_output(stratum, out);

    // saddles
    double length = 1.0;
    auto* saddles = app.add_subcommand("saddles", "enumerate saddle connections up to a length");
    saddles->add_option("file", file, "surface JSON")->required();
    bool csv_flag = false;
    saddles->add_option("-L,--max-length,--length", length, "length bound")->required()->check(CLI::PositiveNumber);
    saddles->add_flag("--csv", csv_flag, "CSV output (the default)");
    add_output(saddles, out);

    // special-tri
    std::vector<int> marked;
    bool certificate = false, graph = false, families = false;
    auto* special = app.add_subcommand("special-tri", "special triangulation for marked edges");
    special->add_option("file", file, "surface JSON")->required();
    special->add_option("--marked", marked, "1-based marked edges (default: the document's)")->delimiter(',');
    special->add_flag("--certificate", certificate, "print the domain certificate");
    special->add_flag("--graph-dot", graph, "print the dual graph in DOT syntax");
    special->add_flag("--families", families, "print primary and auxiliary index families");
    add_output(special, out);

    // cylinders
    std::vector<double> direction = {1.0, 0.0};
    auto* cylinders = app.add_subcommand("cylinders", "cylinder decomposition in a direction");
    cylinders->add_option("file", file, "surface JSON")->required();
    cylinders->add_option("--direction", direction, "direction as RE IM (or re,im)")->expected(2)->delimiter(',');
    add_output(cylinders, out);

    // prym
    int D = 5;
    auto* prym = app.add_subcommand("prym", "H(1,1) Prym eigenform charts");
    prym->require_subcommand(1);
    auto* prym_enum = prym->add_subcommand("enumerate", "list the cylinder charts of discriminant D");
    prym_enum->add_option("--D", D, "discriminant")->required();
    add_output(prym_enum, out);
    auto* prym_gen = prym->add_subcommand(
        "gen", "build the surface at a chart point; without --a/--b/--d/--e and with --out DIR, write one surface "
               "per non-empty chart of discriminant D into DIR");
    int pa = 1, pb = 0, pd = 1, pe = 1;
    std::string pu = "0.2,0.7", pv = "0.1,0.5";
    double pr = 1.0, ptheta = 0.0;
    bool normalise = false;
    prym_gen->add_option("--D", D, "discriminant")->required();
    prym_gen->add_option("--a", pa, "generator entry a");
    prym_gen->add_option("--b", pb, "generator entry b");
    prym_gen->add_option("--d", pd, "generator entry d");
    prym_gen->add_option("--e", pe, "generator entry e");
    prym_gen->add_option("--u", pu, "chart coordinate u as re,im");
    prym_gen->add_option("--v", pv, "chart coordinate v as re,im");
    prym_gen->add_option("--r", pr, "width scale r")->check(CLI::PositiveNumber);
    prym_gen->add_option("--theta", ptheta, "rotation angle");
    prym_gen->add_flag("--normalise", normalise, "scale widths so that the λ_i sum to 1");
    add_output(prym_gen, out);

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimators");
    estimate->require_subcommand(1);
    std::vector<std::string> eps_text;
    std::string kappa_text;
    long long samples = 100000;
    std::uint64_t seed = 1;
    int workers = default_workers();
    bool slope = false;
    std::string stratum_name = "2", chart_file, builtin = "torus";
    int m = 1;
    double box = 2.0;
    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--eps", eps_text, "scales (comma separated; ':' joins the entries of one ε vector)")
            ->required();
        cmd->add_option("-N,--samples", samples, "accepted samples per grid")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_flag("--slope", slope, "append the log-log slope over the grid");
        add_output(cmd, out);
    };
    auto* est_torus = estimate->add_subcommand("torus", "shortest saddle connection on random unit tori");
    common(est_torus);
    auto* est_stratum = estimate->add_subcommand("stratum", "small independent families in a stratum chart");
    common(est_stratum);
    est_stratum->add_option("--stratum", stratum_name, "chart: 0, 2 or 1,1");
    est_stratum->add_option("--m", m, "family size")->check(CLI::PositiveNumber);
    est_stratum->add_option("--box", box, "half-width of the sampling box")->check(CLI::PositiveNumber);
    auto* est_energy = estimate->add_subcommand("energy", "energy integral over a special-triangulation chart");
    common(est_energy);
    est_energy->add_option("--chart", chart_file, "surface JSON whose special triangulation defines the chart");
    est_energy->add_option("--builtin", builtin, "built-in chart when no file is given: torus or octagon");
    est_energy->add_option("--marked", marked, "1-based marked edges of the chart surface")->delimiter(',');
    auto* est_prym = estimate->add_subcommand("prym", "small saddle connections and thin cylinders in a Prym chart");
    common(est_prym);
    est_prym->add_option("--D", D, "discriminant")->required();
    est_prym->add_option("--kappa", kappa_text, "cylinder-width thresholds (comma separated)");

    // slope
    std::string csv_file, param = "eps", quantity;
    std::vector<std::string> filters;
    auto* slope_cmd = app.add_subcommand("slope", "log-log slope of a CSV grid of estimates");
    slope_cmd->add_option("file", csv_file, "CSV written by estimate")->required();
    slope_cmd->add_option("--param", param, "parameter to regress against");
    slope_cmd->add_option("--quantity", quantity, "only rows with this quantity");
    slope_cmd->add_option("--where", filters, "only rows whose params contain key=value");
    add_output(slope_cmd, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) {
            json doc = read_json_file(file);
            SurfaceDocument raw = parse_surface_document(doc);
            TranslationSurface s = build_surface(raw.gluing, raw.edge_vectors, raw.marked);
            json cones = json::array();
            for (int v = 0; v < s.num_vertices(); ++v)
                cones.push_back(s.cone_angle(v) / kTwoPi);
            json j = {{"valid", true},
                      {"checks", {"gluing", "closure", "orientation", "cone angles", "Euler characteristic"}},
                      {"triangles", s.num_triangles()},
                      {"edges", s.num_edges()},
                      {"vertices", s.num_vertices()},
                      {"genus", s.genus()},
                      {"stratum", signature_json(stratum_signature(s))},
                      {"area", area(s)},
                      {"cone_angles_over_2pi", cones},
                      {"marked", s.marked()}};
            if (out.json_mode)
                out.emit(j);
            else
                out.emit(fmt::format("valid: {} triangles, {} edges, {} vertices, genus {}, stratum H{}, area {:.12g}\n",
                                     s.num_triangles(), s.num_edges(), s.num_vertices(), s.genus(),
                                     stratum_signature(s).str(), area(s)));
        } else if (stratum->parsed()) {
            TranslationSurface s = surface_from_json(read_json_file(file));
            StratumSignature sig = stratum_signature(s);
            if (out.json_mode)
                out.emit(signature_json(sig));
            else
                out.emit("H" + sig.str() + fmt::format(" genus {}\n", sig.genus));
        } else if (saddles->parsed()) {
            TranslationSurface s = surface_from_json(read_json_file(file));
            auto list = enumerate_saddle_connections(s, length);
            if (out.json_mode) {
                json j = {{"format", "flatstrata-saddles/1"}, {"length", length}, {"connections", json::array()}};
                for (const auto& c : list)
                    j["connections"].push_back(connection_json(c));
                out.emit(j);
            } else {
                std::string text = "re,im,length,start_vertex,end_vertex,edge\n";
                for (const auto& c : list)
                    text += fmt::format("{:.17g},{:.17g},{:.17g},{},{},{}\n", c.holonomy.real(), c.holonomy.imag(),
                                        c.length(), c.start_vertex, c.end_vertex, c.edge >= 0 ? c.edge + 1 : 0);
                out.emit(text);
            }
        } else if (special->parsed()) {
            TranslationSurface s = surface_from_json(read_json_file(file));
            SpecialTriangulation st = special_triangulation(s, marked_or_default(marked, s));
            json j = {{"surface", surface_to_json(st.surface)}};
            json trees = json::array();
            for (size_t t = 0; t < st.family.tree_of.size(); ++t)
                trees.push_back({{"triangle", t}, {"tree", st.family.tree_of[t]}, {"parent", st.family.parent[t]}});
            j["trees"] = trees;
            if (certificate) {
                DomainCertificate cert = domain_certificate(st);
                json entries = json::array();
                for (const auto& e : cert.entries)
                    entries.push_back({{"kind", e.kind},
                                       {"triangle", e.triangle},
                                       {"base", e.base},
                                       {"form", e.form},
                                       {"margin", e.margin},
                                       {"passes", e.passes()}});
                j["certificate"] = {{"passes", cert.passes()},
                                    {"min_strict_margin", cert.min_strict_margin()},
                                    {"entries", entries}};
            }
            if (families) {
                LinearSystem sys = linear_system(st.family.gluing);
                std::vector<int> I = primary_family(sys, st.family.m);
                AuxiliaryFamily aux = auxiliary_family(st.family, I);
                j["families"] = {{"solution_dim", solution_dim(sys)},
                                 {"primary", I},
                                 {"auxiliary", aux.J},
                                 {"auxiliary_triangles", aux.triangles}};
            }
            if (graph && !out.json_mode) {
                out.emit(graph_dot(st));
            } else {
                if (graph)
                    j["graph_dot"] = graph_dot(st);
                out.emit(j);
            }
        } else if (cylinders->parsed()) {
            TranslationSurface s = surface_from_json(read_json_file(file));
            CylinderDecomposition dec = cylinder_decomposition(s, {direction[0], direction[1]});
            json cyl = json::array();
            for (const Cylinder& c : dec.cylinders)
                cyl.push_back({{"width", c.width},
                               {"height", c.height},
                               {"modulus", c.height / c.width},
                               {"twist", c.twist},
                               {"bottom", c.bottom},
                               {"top", c.top}});
            json j = {{"direction", complex_json(dec.direction)},
                      {"connections", dec.connections.size()},
                      {"cylinders", cyl},
                      {"stable", is_stable(dec)},
                      {"total_area", dec.total_area()},
                      {"signature", dec.signature()}};
            if (out.json_mode) {
                out.emit(j);
            } else {
                std::string text = "width,height,twist\n";
                for (const Cylinder& c : dec.cylinders)
                    text += fmt::format("{:.17g},{:.17g},{:.17g}\n", c.width, c.height, c.twist);
                out.emit(text);
            }
        } else if (prym_enum->parsed()) {
            auto fams = prym_h11_enumerate(D);
            json j = json::array();
            for (const auto& f : fams)
                j.push_back({{"D", f.D},
                             {"a", f.a},
                             {"d", f.d},
                             {"e", f.e},
                             {"lambda", f.lambda},
                             {"b_min", f.b_min},
                             {"b_max", f.b_max}});
            if (out.json_mode) {
                out.emit(j);
            } else {
                std::string text = "D,a,d,e,lambda,b_min,b_max\n";
                for (const auto& f : fams)
                    text += fmt::format("{},{},{},{},{:.17g},{:.17g},{:.17g}\n", f.D, f.a, f.d, f.e, f.lambda, f.b_min,
                                        f.b_max);
                out.emit(text);
            }
        } else if (prym_gen->parsed() && prym_gen->count("--a") + prym_gen->count("--b") + prym_gen->count("--d") +
                                                    prym_gen->count("--e") ==
                                                0) {
            if (out.path.empty())
                fail("ParseError", "batch generation needs --out DIR (or give --a --b --d --e)");
            std::filesystem::create_directories(out.path);
            json index = json::array();
            for (const PrymH11Params& p : prym_h11_charts(D)) {
                if (!chart_nonempty(p))
                    continue;
                const double sw = normalise ? normalised_width_scale(p) : 1.0;
                std::optional<PrymChartPoint> x = central_chart_point(p, pr, ptheta, sw);
                if (!x)
                    continue;
                CylinderSurface cs = prym_chart_build(p, *x, sw);
                json j = surface_to_json(cs.surface);
                j["chart"] = prym_chart_json(p, *x, cs, sw);
                const std::string name = fmt::format("prym_D{}_a{}_b{}_d{}_e{}.json", D, p.a, p.b, p.d, p.e);
                write_text_file((std::filesystem::path(out.path) / name).string(), j.dump(2) + "\n");
                index.push_back(name);
            }
            std::cout << (out.json_mode ? json{{"written", index}}.dump(2) + "\n"
                                        : fmt::format("wrote {} surfaces to {}\n", index.size(), out.path));
        } else if (prym_gen->parsed()) {
            if (pa <= 0 || pd <= 0 || pe * pe + 4 * pa * pd != D)
                fail("DomainViolation", fmt::format("(a, d, e) = ({}, {}, {}) does not satisfy e² + 4ad = D = {}",
                                                    pa, pd, pe, D));
            prym_h11_enumerate(D); // validates D
            PrymH11Params p{D, pa, pb, pd, pe, (pe + std::sqrt(static_cast<double>(D))) / 2.0};
            const double sw = normalise ? normalised_width_scale(p) : 1.0;
            PrymChartPoint x{ptheta, pr, parse_complex(pu), parse_complex(pv)};
            CylinderSurface cs = prym_chart_build(p, x, sw);
            json j = surface_to_json(cs.surface);
            j["chart"] = prym_chart_json(p, x, cs, sw);
            out.emit(j);
        } else if (est_torus->parsed() || est_stratum->parsed() || est_energy->parsed() || est_prym->parsed()) {
            std::vector<std::vector<double>> grid;
            for (const std::string& item : eps_text) {
                std::stringstream in(item);
                std::string vec;
                while (std::getline(in, vec, ','))
                    grid.push_back(parse_list(vec, ':'));
            }
            for (const auto& g : grid)
                for (double e : g)
                    if (!(e >= 0.0))
                        fail("DomainViolation", "scales must be non-negative");
            // slope against the first entry that varies across the grid
            size_t axis = 0;
            for (size_t q = 0; q < grid.front().size(); ++q)
                if (grid.size() > 1 && grid[0][q] != grid[1][q]) {
                    axis = q;
                    break;
                }
            std::vector<double> xs;
            for (const auto& g : grid)
                xs.push_back(g[std::min(axis, g.size() - 1)]);
            if (est_torus->parsed()) {
                std::vector<double> eps;
                for (const auto& g : grid)
                    eps.push_back(g.at(0));
                emit_reports(out, estimate_torus_small_sc(eps, samples, seed, workers), slope, "eps", xs);
            } else if (est_stratum->parsed()) {
                StratumChart chart = named_stratum_chart(stratum_name, box);
                emit_reports(out, estimate_stratum_small_sc(chart, m, grid, samples, seed, workers), slope,
                             fmt::format("eps{}", axis + 1), xs);
            } else if (est_energy->parsed()) {
                TranslationSurface s;
                if (!chart_file.empty())
                    s = surface_from_json(read_json_file(chart_file));
                else if (builtin == "torus")
                    s = sheared_torus();
                else if (builtin == "octagon") // the regular octagon is not generic; shear it
                    s = transform(with_marked(regular_octagon(), {1}), 1.0, 0.1234, 0.0, 1.0);
                else
                    fail("ParseError", "unknown built-in chart '" + builtin + "'");
                SpecialTriangulation st = special_triangulation(s, marked_or_default(marked, s));
                EnergyChart chart = energy_chart(st, chart_file.empty() ? builtin : chart_file);
                auto reports = estimate_energy_integral(chart, grid, samples, seed, workers);
                std::vector<EstimateReport> plain;
                for (const auto& r : reports)
                    plain.push_back(r.report);
                if (out.json_mode) {
                    json j = {{"format", "flatstrata-estimate/1"}, {"reports", json::array()}};
                    for (const auto& r : reports) {
                        json rj = r.report.to_json();
                        rj["ratio"] = r.ratio;
                        rj["ratio_stderr"] = r.ratio_error;
                        j["reports"].push_back(rj);
                    }
                    if (slope)
                        j["slope"] = slope_json(fit_reports(plain, xs), fmt::format("eps{}", axis + 1));
                    out.emit(j);
                } else {
                    emit_reports(out, plain, slope, fmt::format("eps{}", axis + 1), xs);
                }
            } else {
                std::vector<double> eps;
                for (const auto& g : grid)
                    eps.push_back(g.at(0));
                std::vector<std::pair<double, double>> pairs;
                if (!kappa_text.empty())
                    for (double k : parse_list(kappa_text, ','))
                        for (double e : eps)
                            pairs.push_back({e, k});
                PrymReports r = estimate_prym_volumes(D, eps, pairs, samples, seed, workers);
                std::vector<EstimateReport> all = r.any;
                all.insert(all.end(), r.thin.begin(), r.thin.end());
                if (slope) {
                    SlopeFit f = fit_reports(r.any, eps);
                    emit_reports(out, all, &f, "eps");
                } else {
                    emit_reports(out, all, nullptr, "eps");
                }
            }
        } else if (slope_cmd->parsed()) {
            std::ifstream in(csv_file);
            if (!in)
                fail("IOError", "cannot open " + csv_file);
            std::string line;
            std::getline(in, line);
            std::vector<double> xs, est, err;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#')
                    continue;
                // quantity,params,estimate,stderr,... with params possibly quoted
                std::vector<std::string> cells;
                std::string cell;
                bool quoted = false;
                for (size_t i = 0; i < line.size(); ++i) {
                    char c = line[i];
                    if (quoted) {
                        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                            cell += '"';
                            ++i;
                        } else if (c == '"') {
                            quoted = false;
                        } else {
                            cell += c;
                        }
                    } else if (c == '"') {
                        quoted = true;
                    } else if (c == ',') {
                        cells.push_back(cell);
                        cell.clear();
                    } else {
                        cell += c;
                    }
                }
                cells.push_back(cell);
                if (cells.size() < 4)
                    fail("ParseError", "malformed CSV row: " + line);
                if (!quantity.empty() && cells[0] != quantity)
                    continue;
                bool keep = true;
                for (const std::string& f : filters)
                    keep = keep && (";" + cells[1] + ";").find(";" + f + ";") != std::string::npos;
                if (!keep)
                    continue;
                xs.push_back(param_value(cells[1], param));
                est.push_back(parse_list(cells[2], ',').at(0));
                err.push_back(parse_list(cells[3], ',').at(0));
            }
            SlopeFit f = scaling_exponent(xs, est, err);
            if (out.json_mode)
                out.emit(slope_json(f, param));
            else
                out.emit(fmt::format("parameter,slope,stderr,points\n{},{:.17g},{:.17g},{}\n", param, f.slope,
                                     f.std_error, xs.size()));
        }
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
