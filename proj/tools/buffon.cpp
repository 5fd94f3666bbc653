#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "buffon/acceptance.hpp"
#include "buffon/cyclo.hpp"
#include "buffon/errors.hpp"
#include "buffon/io.hpp"
#include "buffon/kernels.hpp"
#include "buffon/project.hpp"
#include "buffon/random4.hpp"
#include "buffon/sets.hpp"
#include "buffon/ssv_slv.hpp"
#include "buffon/trig.hpp"

using namespace buffon;
using io::Json;

namespace {

struct Knobs {
    std::string spec = "fourcorner";
    int n = 2;
    int m = 1;
    std::string t = "1/2";
    int angles = project::kDefaultAngles;
    std::int64_t grid = 0;
    std::int64_t budget = 0;
    std::string eta = "9/10";
    int Q = 6;
    double delta = random4::kDefaultDelta;
    double c1 = 1;
    std::string psi_mode = "power";
    double psi = 0;
    double c2 = 1;
    double c3 = 0;
    double K = 0;
    double eps0 = 0.1;
    std::uint64_t seed = 42;
    int trials = 500;
    std::string kernel = "box";
    std::string factor = "product";
    std::string A;
    int L = 0;
    int reference = 0;
    int samples = 0;
    std::int64_t lines = 0;
    bool exact = false;
    bool sweep = false;
    bool dump_addresses = false;
    std::string suite = "acceptance";
    std::vector<std::string> only;
    std::string out;
    std::string format;
    int threads = 0;
    bool serial = false;
};

kernels::Exec exec_of(const Knobs& k) { return k.serial ? kernels::Exec::serial : kernels::Exec::parallel; }

sets::ProductSpec product_spec(const Knobs& k)
{
    const auto s = io::resolve_spec(k.spec);
    const auto* p = std::get_if<sets::ProductSpec>(&s);
    require(p != nullptr, "this command needs a product spec (L, A, B)");
    return *p;
}

Json base_config(const std::string& command, const Knobs& k)
{
    Json c;
    c["command"] = command;
    c["threads"] = kernels::max_threads();
    c["exec"] = k.serial ? "serial" : "parallel";
    c["format"] = k.format;
    return c;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            require(file_.good(), "cannot open output '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void json(const Json& j) { stream() << j.dump(2) << "\n"; }

private:
    std::ofstream file_;
};

int run_sets(const Knobs& k)
{
    const auto spec = io::resolve_spec(k.spec);
    const auto it = sets::iterate(spec, k.n, k.budget > 0 ? k.budget : sets::kDefaultCellBudget);
    Output out(k.out);
    if (k.format == "csv") {
        io::CsvWriter csv(out.stream());
        csv.row({"index", "x", "y", "scale"});
        for (std::size_t i = 0; i < it.size(); ++i) {
            if (it.is_product()) {
                const auto [x, y] = it.exact_origin(i);
                csv.row({std::to_string(i), to_string(x), to_string(y), to_string(it.scale())});
            } else {
                csv.row({std::to_string(i), io::format_double(it.origins()[i].real()),
                         io::format_double(it.origins()[i].imag()), io::format_double(it.scale_double())});
            }
        }
        return 0;
    }
    auto cfg = base_config("sets", k);
    cfg["spec"] = io::spec_to_json(spec);
    cfg["n"] = k.n;
    cfg["budget"] = k.budget > 0 ? k.budget : sets::kDefaultCellBudget;
    Json j;
    j["config"] = cfg;
    j["cells"] = it.size();
    j["scale"] = it.scale_double();
    j["maps"] = sets::num_maps(spec);
    j["first_level_cells_disjoint"] = sets::first_level_cells_disjoint(spec);
    Json origins = Json::array();
    for (std::size_t i = 0; i < it.size(); ++i) {
        if (it.is_product()) {
            const auto [x, y] = it.exact_origin(i);
            origins.push_back({to_string(x), to_string(y)});
        } else {
            origins.push_back({it.origins()[i].real(), it.origins()[i].imag()});
        }
    }
    j["origins"] = origins;
    out.json(j);
    return 0;
}

int run_favard(const Knobs& k)
{
    const auto spec = io::resolve_spec(k.spec);
    const auto budget = k.budget > 0 ? k.budget : sets::kDefaultCellBudget;
    Output out(k.out);
    auto cfg = base_config("favard", k);
    cfg["spec"] = io::spec_to_json(spec);
    cfg["n"] = k.n;
    cfg["angles"] = k.angles;
    cfg["budget"] = budget;
    cfg["sweep"] = k.sweep;

    if (k.sweep) {
        std::vector<project::FavardReport> reports;
        for (int n = 0; n <= k.n; ++n)
            reports.push_back(project::favard(spec, n, k.angles, exec_of(k), budget));
        if (k.format == "csv") {
            io::CsvWriter csv(out.stream());
            csv.row({"n", "favard_estimate", "richardson"});
            for (const auto& r : reports)
                csv.row({std::to_string(r.n), io::format_double(r.favard_estimate), io::format_double(r.richardson)});
            return 0;
        }
        Json rows = Json::array();
        for (const auto& r : reports)
            rows.push_back({{"n", r.n}, {"favard_estimate", r.favard_estimate}, {"richardson", r.richardson}});
        out.json({{"config", cfg}, {"quadrature", "midpoint over [0, pi)"}, {"sweep", rows}});
        return 0;
    }

    const auto r = project::favard(spec, k.n, k.angles, exec_of(k), budget);
    if (k.format == "csv") {
        io::CsvWriter csv(out.stream());
        csv.row({"theta", "measure"});
        for (const auto& a : r.angle_values)
            csv.row({io::format_double(a.theta), io::format_double(a.measure)});
        std::cerr << "n=" << r.n << " angles=" << r.angle_count << " favard=" << io::format_double(r.favard_estimate)
                  << " richardson=" << io::format_double(r.richardson) << "\n";
        return 0;
    }
    Json angles = Json::array();
    for (const auto& a : r.angle_values)
        angles.push_back({{"theta", a.theta}, {"measure", a.measure}});
    out.json({{"config", cfg},
              {"quadrature", "midpoint over [0, pi)"},
              {"n", r.n},
              {"angle_count", r.angle_count},
              {"favard_estimate", r.favard_estimate},
              {"richardson", r.richardson},
              {"half_grid_estimate", r.half_grid_estimate},
              {"slope_integral", r.slope_integral},
              {"angle_values", angles}});
    return 0;
}

int run_norms(const Knobs& k)
{
    const auto spec = product_spec(k);
    const auto kernel = project::parse_kernel(k.kernel);
    const bool exact = k.exact || k.t.find('/') != std::string::npos;
    const Rational tq = parse_rational(k.t);
    const auto it = sets::iterate(spec, k.n, k.budget > 0 ? k.budget : sets::kDefaultCellBudget);
    Output out(k.out);
    auto cfg = base_config("norms", k);
    cfg["spec"] = io::spec_to_json(spec);
    cfg["n"] = k.n;
    cfg["t"] = k.t;
    cfg["kernel"] = project::to_string(kernel);
    cfg["exact"] = exact;

    if (exact) {
        const auto f = project::counting_function(spec, k.n, tq, kernel);
        const auto support = project::project_iteration(it, tq);
        if (k.format == "csv") {
            io::CsvWriter csv(out.stream());
            csv.row({"x0", "x1", "left", "right"});
            for (std::size_t i = 0; i < f.segments(); ++i)
                csv.row({to_string(f.breakpoints[i]), to_string(f.breakpoints[i + 1]), to_string(f.left_values[i]),
                         to_string(f.right_values[i])});
            return 0;
        }
        const Rational l1 = project::lp_norm(f, 1), l2 = project::lp_norm(f, 2);
        const bool holds = project::holder_check(f, support.to_rational());
        out.json({{"config", cfg},
                  {"arithmetic", "exact rational"},
                  {"l1_norm", to_string(l1)},
                  {"l2_norm_squared", to_string(l2)},
                  {"projection_measure", to_string(support.measure())},
                  {"holder_holds", holds},
                  {"segments", f.segments()}});
        if (!holds)
            throw CertificationFailure("Holder inequality violated");
        return 0;
    }
    const double t = to_double(tq);
    const auto f = project::counting_function(spec, k.n, t, kernel);
    const auto support = project::project_iteration(it, t);
    if (k.format == "csv") {
        io::CsvWriter csv(out.stream());
        csv.row({"x0", "x1", "left", "right"});
        for (std::size_t i = 0; i < f.segments(); ++i)
            csv.row({io::format_double(f.breakpoints[i]), io::format_double(f.breakpoints[i + 1]),
                     io::format_double(f.left_values[i]), io::format_double(f.right_values[i])});
        return 0;
    }
    const auto h = project::holder_check(f, support);
    out.json({{"config", cfg},
              {"arithmetic", "double, closed-form piecewise integrals"},
              {"l1_norm", h.l1_norm},
              {"l2_norm_squared", h.l2_norm},
              {"projection_measure", h.support_measure},
              {"holder_holds", h.holds},
              {"segments", f.segments()}});
    if (!h.holds)
        throw CertificationFailure("Holder inequality violated");
    return 0;
}

Json quadrature_json(const trig::Quadrature& q)
{
    return {{"value", q.value}, {"fine", q.fine}, {"coarse", q.coarse}, {"grid", q.grid},
            {"lower", q.lower}, {"upper", q.upper}, {"rule", "midpoint with Richardson step"}};
}

int run_fourier(const Knobs& k)
{
    const auto spec = product_spec(k);
    const double t = to_double(parse_rational(k.t));
    Output out(k.out);
    if (k.format == "csv") {
        require(k.samples > 0, "--samples must be positive for the CSV dump");
        trig::ProductEvaluator p1{spec, t, k.m + 1, k.n}, p2{spec, t, 1, k.m};
        io::CsvWriter csv(out.stream());
        csv.row({"xi", "P1_abs2", "P2_abs2"});
        for (int i = 0; i < k.samples; ++i) {
            const double xi = (i + 0.5) / k.samples;
            csv.row({io::format_double(xi), io::format_double(p1.abs2(xi)), io::format_double(p2.abs2(xi))});
        }
        return 0;
    }
    trig::AnalysisParams params;
    params.n = k.n;
    params.m = k.m;
    params.N = 2 * k.n;
    params.eps0 = k.eps0;
    params.c1 = k.c1;
    params.psi_mode = trig::parse_psi_mode(k.psi_mode);
    const bool noncyclotomic = !cyclo::factorize(spec.A, spec.L).A3_roots.empty() ||
                               !cyclo::factorize(spec.B, spec.L).A3_roots.empty();
    params.K = k.K > 0 ? k.K : trig::default_K(params.N, params.eps0, noncyclotomic);
    params.validate();

    const auto salem = trig::salem_integral(spec, t, k.m, k.n, k.grid, exec_of(k));
    const auto poisson = trig::poisson_integral(spec, t, k.m, k.n, params.K, k.grid, exec_of(k));
    const auto main = trig::main_estimate(spec, t, params, 1, 1, k.grid, exec_of(k));

    auto cfg = base_config("fourier", k);
    cfg["spec"] = io::spec_to_json(spec);
    cfg["t"] = k.t;
    cfg["m"] = k.m;
    cfg["n"] = k.n;
    cfg["N"] = params.N;
    cfg["K"] = params.K;
    cfg["eps0"] = k.eps0;
    cfg["c1"] = k.c1;
    cfg["psi_mode"] = trig::to_string(params.psi_mode);
    cfg["grid"] = k.grid;
    out.json({{"config", cfg},
              {"psi", trig::psi(spec.L, k.m, k.c1, params.psi_mode)},
              {"salem", {{"integral", quadrature_json(salem.integral)}, {"lower_bound", salem.lower_bound},
                         {"holds", salem.holds}}},
              {"poisson", {{"integral", quadrature_json(poisson.integral)}, {"reference", poisson.reference},
                           {"ratio", poisson.ratio}}},
              {"main_estimate", {{"integral", quadrature_json(main.integral)}, {"reference", main.reference}}}});
    return 0;
}

int run_factor(const Knobs& k)
{
    require(!k.A.empty(), "--A is required");
    require(k.L >= 2, "--L must be >= 2");
    const auto A = io::parse_int_list(k.A);
    const auto f = cyclo::factorize(A, k.reference > 0 ? k.reference : k.L);
    const auto c = cyclo::compatible_check(A);
    const auto q = cyclo::conjecture_check(A);

    auto cfg = base_config("factor", k);
    cfg["A"] = A;
    cfg["L"] = k.L;
    cfg["gcd_reference"] = f.gcd_reference;
    Json mult = Json::object();
    for (const auto& [s, e] : f.multiplicities)
        mult[std::to_string(s)] = e;
    Json j{{"config", cfg},
           {"S1", f.S1},
           {"S2", f.S2},
           {"A3_roots", f.A3_roots},
           {"A3", f.A3.to_string()},
           {"A4", f.A4.to_string()},
           {"A4_degree", f.A4.degree()},
           {"A4_certified", f.A4_certified},
           {"multiplicities", mult},
           {"root_tolerance", 1e-12}};
    j["compatible"] = {{"status", cyclo::to_string(c.status)}, {"S", c.S}, {"N", c.N}, {"P", c.P}, {"Q", c.Q}};
    j["conjecture"] = {{"status", cyclo::to_string(q.status)}, {"S", q.S}, {"N", q.N}, {"Q", q.Q}, {"T", q.T}};
    Output out(k.out);
    out.json(j);
    if (!f.A4_certified)
        throw CertificationFailure("A4 could not be certified root-free on the unit circle");
    return 0;
}

int run_ssv(const Knobs& k)
{
    const auto spec = product_spec(k);
    const double t = to_double(parse_rational(k.t));
    const auto mode = trig::parse_psi_mode(k.psi_mode);
    const double psi = k.psi > 0 ? k.psi : trig::psi(spec.L, k.m, k.c1, mode);
    const auto factor = ssv::parse_factor(k.factor);
    const auto budget = k.budget > 0 ? k.budget : ssv::kDefaultCellBudget;
    const auto cover = ssv::ssv_cover(spec, t, k.m, psi, factor, budget, ssv::kResolution, exec_of(k));
    const int B_size = static_cast<int>(factor == ssv::Factor::A ? spec.A.size() : spec.B.size());
    const double c3 = k.c3 > 0 ? k.c3 : ssv::default_c3(spec.L, B_size, k.c2);

    Output out(k.out);
    if (k.format == "csv") {
        io::CsvWriter csv(out.stream());
        csv.row({"left", "right"});
        for (const auto& p : cover.intervals.pieces())
            csv.row({io::format_double(p.left), io::format_double(p.right)});
    } else {
        auto cfg = base_config("ssv", k);
        cfg["spec"] = io::spec_to_json(spec);
        cfg["t"] = k.t;
        cfg["m"] = k.m;
        cfg["psi"] = psi;
        cfg["c1"] = k.c1;
        cfg["psi_mode"] = trig::to_string(mode);
        cfg["factor"] = ssv::to_string(factor);
        cfg["c2"] = k.c2;
        cfg["c3"] = c3;
        cfg["budget"] = budget;
        Json j{{"config", cfg},
               {"certified", cover.certified},
               {"cells", cover.cells},
               {"resolution", cover.resolution},
               {"measure", cover.intervals.measure()},
               {"intervals", io::intervals_to_json(cover.intervals)}};
        if (cover.certified) {
            const auto r = ssv::ssv_property_check(cover, spec.L, k.c2, c3);
            j["property"] = {{"interval_count", r.interval_count}, {"max_length", r.max_length},
                             {"c2_fit", r.c2_fit},                 {"c3_fit", r.c3_fit},
                             {"passes", r.passes}};
        }
        out.json(j);
    }
    if (!cover.certified)
        throw CertificationFailure("cell budget exhausted; the cover is an uncertified superset");
    return 0;
}

int run_slv(const Knobs& k)
{
    const auto spec = product_spec(k);
    const Rational t = parse_rational(k.t), eta = parse_rational(k.eta);
    const auto g = ssv::build_gamma(spec.L, t, k.m, eta, k.Q, k.budget > 0 ? k.budget : ssv::kDefaultGammaBudget);
    const auto r = ssv::verify_slv(g, spec.A, spec.B, spec.L, exec_of(k));
    Output out(k.out);
    if (k.format == "csv") {
        io::CsvWriter csv(out.stream());
        csv.row({"left", "right"});
        for (const auto& p : g.numerators.pieces())
            csv.row({to_string(make_rational(p.left, g.denominator)), to_string(make_rational(p.right, g.denominator))});
    } else {
        auto cfg = base_config("slv", k);
        cfg["spec"] = io::spec_to_json(spec);
        cfg["t"] = to_string(t);
        cfg["m"] = k.m;
        cfg["eta"] = to_string(eta);
        cfg["Q"] = k.Q;
        Json translations = Json::array();
        for (int j = 0; j < k.m; ++j)
            translations.push_back({to_string(g.translation(j, false)), to_string(g.translation(j, true))});
        std::vector<Interval<Rational>> pieces;
        for (const auto& p : g.numerators.pieces())
            pieces.push_back({make_rational(p.left, g.denominator), make_rational(p.right, g.denominator)});
        Json report{{"add1", r.add1},
                    {"add1_by_components", r.add1_by_components},
                    {"min_product", r.min_product},
                    {"min_product_upper", r.min_product_upper},
                    {"c_eta", r.c_eta},
                    {"C1", r.C1},
                    {"C1_realized", r.C1_realized},
                    {"add2", r.add2},
                    {"epsilon", r.epsilon},
                    {"C2", r.C2},
                    {"measure_bound", r.measure_bound},
                    {"add3", r.add3},
                    {"passes", r.passes()}};
        if (r.add1_witness)
            report["add1_witness"] = *r.add1_witness;
        out.json({{"config", cfg},
                  {"measure", to_string(g.measure())},
                  {"measure_double", g.measure_double()},
                  {"translations", translations},
                  {"intervals", io::intervals_to_json(IntervalUnion<Rational>::from_sorted(std::move(pieces)))},
                  {"report", report}});
    }
    if (!r.passes())
        throw CertificationFailure("SLV conditions not verified");
    return 0;
}

int run_random(const Knobs& k)
{
    Output out(k.out);
    if (k.dump_addresses) {
        const auto s = random4::sample_g(k.n, k.seed);
        if (k.format == "json") {
            auto cfg = base_config("random", k);
            cfg["n"] = k.n;
            cfg["seed"] = k.seed;
            out.json({{"config", cfg}, {"addresses", s.addresses}});
        } else {
            io::CsvWriter csv(out.stream());
            csv.row({"address"});
            for (const auto& a : s.addresses)
                csv.row({a});
        }
        return 0;
    }
    const auto r = random4::mc_expectation(k.n, k.trials, k.seed, k.angles, exec_of(k));
    auto cfg = base_config("random", k);
    cfg["n"] = k.n;
    cfg["trials"] = k.trials;
    cfg["seed"] = k.seed;
    cfg["angles"] = k.angles;
    cfg["delta"] = k.delta;
    cfg["generator"] = "philox4x32-10";
    if (k.format == "csv") {
        io::CsvWriter csv(out.stream());
        csv.row({"trial", "favard"});
        for (std::size_t i = 0; i < r.values.size(); ++i)
            csv.row({std::to_string(i), io::format_double(r.values[i])});
        return 0;
    }
    Json j{{"config", cfg},
           {"n", r.n},
           {"trials", r.trials},
           {"angle_count", r.angle_count},
           {"seed", r.seed},
           {"mean_favard", r.mean_favard},
           {"stderr_favard", r.stderr_favard},
           {"nonessential_bound", random4::nonessential_bound(k.n, k.delta).str()}};
    if (k.lines > 0) {
        const double t = to_double(parse_rational(k.t));
        const auto s = random4::sample_g(k.n, k.seed);
        const auto e = random4::essential_stats(s, k.delta);
        const auto h = random4::line_hit_stats(s, t, k.lines, k.delta, k.seed);
        cfg["t"] = k.t;
        cfg["lines"] = k.lines;
        j["config"] = cfg;
        j["essential"] = {{"essential", e.essential}, {"nonessential", e.nonessential}};
        j["line_hits"] = {{"lines", h.lines},
                          {"mean_hits", h.mean_hits ? Json(*h.mean_hits) : Json(nullptr)},
                          {"stderr_hits", h.stderr_hits},
                          {"exceptional_slope", h.exceptional}};
    }
    out.json(j);
    return 0;
}

int run_report(const Knobs& k)
{
    require(k.suite == "acceptance", "unknown suite '" + k.suite + "'");
    acceptance::Options opt;
    opt.exec = exec_of(k);
    opt.only = k.only;
    Output out(k.out);
    const bool text = k.format.empty() || k.format == "text";
    const auto results = acceptance::run_suite(opt, [&](const acceptance::Result& r) {
        if (text)
            out.stream() << acceptance::format_line(r) << std::endl;
    });
    if (k.format == "json") {
        Json rows = Json::array();
        for (const auto& r : results)
            rows.push_back({{"id", r.id},
                            {"title", r.title},
                            {"passed", r.passed},
                            {"known_unattainable", r.known_unattainable},
                            {"detail", r.detail}});
        auto cfg = base_config("report", k);
        cfg["suite"] = k.suite;
        cfg["only"] = k.only;
        out.json({{"config", cfg}, {"results", rows}, {"suite_passed", acceptance::suite_passed(results)}});
    } else if (k.format == "csv") {
        io::CsvWriter csv(out.stream());
        csv.row({"id", "status", "title", "detail"});
        for (const auto& r : results)
            csv.row({r.id, r.passed ? "PASS" : r.known_unattainable ? "FAIL (known unattainable)" : "FAIL", r.title,
                     r.detail});
    }
    if (!acceptance::suite_passed(results))
        throw CertificationFailure("acceptance suite failed");
    return 0;
}

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return s;
}

// Expands --config FILE (key=value lines, '#' comments) into flags after the
// subcommand; flags given on the command line win.
std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& commands)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty())
        return args;
    std::ifstream in(path);
    require(in.good(), "cannot read config '" + path + "'");
    const std::vector<std::string> flags{"serial", "exact", "sweep", "dump-addresses"};
    std::string command;
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "command") {
            command = value;
            continue;
        }
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
        });
        if (given)
            continue;
        if (std::find(flags.begin(), flags.end(), key) != flags.end()) {
            require(value == "true" || value == "false", "flag '" + key + "' takes true or false");
            if (value == "true")
                extra.push_back("--" + key);
        } else {
            extra.push_back("--" + key + "=" + value);
        }
    }
    auto sub = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
        return std::find(commands.begin(), commands.end(), a) != commands.end();
    });
    if (sub == args.end()) {
        require(!command.empty(), "no command on the command line or in the config");
        args.insert(args.begin(), command);
        sub = args.begin();
    }
    args.insert(sub + 1, extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Projections, Favard length and Fourier estimates for planar Cantor sets"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", "key=value configuration file (keys are long option names)");
    Knobs k;
    app.add_option("--threads", k.threads, "worker thread cap (0 = OpenMP default)");
    app.add_flag("--serial", k.serial, "use the serial reference kernels");

    auto common = [&](CLI::App* sub, const std::string& default_format, std::vector<std::string> formats) {
        sub->add_option("--out,-o", k.out, "output path (default stdout)");
        k.format = "";
        sub->add_option("--format", k.format, "output format")->check(CLI::IsMember(formats));
        sub->callback([&k, default_format] {
            if (k.format.empty())
                k.format = default_format;
        });
    };
    auto spec_opt = [&](CLI::App* sub) {
        sub->add_option("--spec", k.spec, "built-in name, inline JSON or JSON file")->capture_default_str();
    };

    auto* sets_cmd = app.add_subcommand("sets", "enumerate the cells of E_n");
    spec_opt(sets_cmd);
    sets_cmd->add_option("--n", k.n)->check(CLI::NonNegativeNumber)->capture_default_str();
    sets_cmd->add_option("--budget", k.budget, "cell budget");
    common(sets_cmd, "json", {"json", "csv"});

    auto* favard_cmd = app.add_subcommand("favard", "projection measures and Favard length");
    spec_opt(favard_cmd);
    favard_cmd->add_option("--n", k.n)->check(CLI::NonNegativeNumber)->capture_default_str();
    favard_cmd->add_option("--angles", k.angles)->check(CLI::PositiveNumber)->capture_default_str();
    favard_cmd->add_option("--budget", k.budget, "cell budget");
    favard_cmd->add_flag("--sweep", k.sweep, "report Fav(E_j) for j = 0..n");
    common(favard_cmd, "csv", {"csv", "json"});

    auto* norms_cmd = app.add_subcommand("norms", "counting function norms and the Holder check");
    spec_opt(norms_cmd);
    norms_cmd->add_option("--n", k.n)->check(CLI::NonNegativeNumber)->capture_default_str();
    norms_cmd->add_option("--t", k.t, "slope; p/q selects exact arithmetic")->capture_default_str();
    norms_cmd->add_option("--kernel", k.kernel)->check(CLI::IsMember({"box", "trapezoid"}))->capture_default_str();
    norms_cmd->add_flag("--exact", k.exact, "exact rational arithmetic");
    norms_cmd->add_option("--budget", k.budget, "cell budget");
    common(norms_cmd, "json", {"json", "csv"});

    auto* fourier_cmd = app.add_subcommand("fourier", "Salem, Poisson and main-estimate integrals");
    spec_opt(fourier_cmd);
    fourier_cmd->add_option("--t", k.t)->capture_default_str();
    fourier_cmd->add_option("--m", k.m)->check(CLI::NonNegativeNumber)->capture_default_str();
    fourier_cmd->add_option("--n", k.n)->check(CLI::PositiveNumber)->capture_default_str();
    fourier_cmd->add_option("--K", k.K, "Poisson constant (default from N and eps0)");
    fourier_cmd->add_option("--eps0", k.eps0)->capture_default_str();
    fourier_cmd->add_option("--c1", k.c1)->capture_default_str();
    fourier_cmd->add_option("--psi-mode", k.psi_mode)->check(CLI::IsMember({"power", "power-log"}))->capture_default_str();
    fourier_cmd->add_option("--grid", k.grid, "quadrature nodes (0 = default)");
    fourier_cmd->add_option("--samples", k.samples, "points for the CSV dump of |P1|^2, |P2|^2");
    common(fourier_cmd, "json", {"json", "csv"});

    auto* factor_cmd = app.add_subcommand("factor", "cyclotomic factorization of A(x)");
    factor_cmd->add_option("--A", k.A, "digits, comma separated")->required();
    factor_cmd->add_option("--L", k.L)->required();
    factor_cmd->add_option("--reference", k.reference, "gcd reference for S2 (default L)");
    common(factor_cmd, "json", {"json"});

    auto* ssv_cmd = app.add_subcommand("ssv", "certified cover of the set of small values");
    spec_opt(ssv_cmd);
    ssv_cmd->add_option("--t", k.t)->capture_default_str();
    ssv_cmd->add_option("--m", k.m)->check(CLI::PositiveNumber)->capture_default_str();
    ssv_cmd->add_option("--psi", k.psi, "threshold (default L^{-c1 m})");
    ssv_cmd->add_option("--c1", k.c1)->capture_default_str();
    ssv_cmd->add_option("--psi-mode", k.psi_mode)->check(CLI::IsMember({"power", "power-log"}))->capture_default_str();
    ssv_cmd->add_option("--factor", k.factor)->check(CLI::IsMember({"product", "A", "B"}))->capture_default_str();
    ssv_cmd->add_option("--c2", k.c2)->capture_default_str();
    ssv_cmd->add_option("--c3", k.c3, "length exponent (default 1 + (c2 + 1) log L / log |B|)");
    ssv_cmd->add_option("--budget", k.budget, "cell budget");
    common(ssv_cmd, "json", {"json", "csv"});

    auto* slv_cmd = app.add_subcommand("slv", "build and verify an SLV set");
    k.spec = "slv25";
    spec_opt(slv_cmd);
    slv_cmd->add_option("--t", k.t)->capture_default_str();
    slv_cmd->add_option("--m", k.m)->check(CLI::PositiveNumber)->capture_default_str();
    slv_cmd->add_option("--eta", k.eta)->capture_default_str();
    slv_cmd->add_option("--Q", k.Q)->capture_default_str();
    slv_cmd->add_option("--budget", k.budget, "translation search budget");
    common(slv_cmd, "json", {"json", "csv"});

    auto* random_cmd = app.add_subcommand("random", "Monte Carlo over random four-corner sets");
    random_cmd->add_option("--n", k.n)->check(CLI::NonNegativeNumber)->capture_default_str();
    random_cmd->add_option("--trials", k.trials)->capture_default_str();
    random_cmd->add_option("--seed", k.seed)->capture_default_str();
    random_cmd->add_option("--angles", k.angles)->check(CLI::PositiveNumber);
    random_cmd->add_option("--delta", k.delta)->capture_default_str();
    random_cmd->add_option("--lines", k.lines, "sample lines for the hit statistics");
    random_cmd->add_option("--t", k.t, "line slope for the hit statistics");
    random_cmd->add_flag("--dump-addresses", k.dump_addresses, "emit the digit strings of one sample");
    common(random_cmd, "json", {"json", "csv"});

    auto* report_cmd = app.add_subcommand("report", "run a test suite");
    report_cmd->add_option("--suite", k.suite)->check(CLI::IsMember({"acceptance"}))->capture_default_str();
    report_cmd->add_option("--only", k.only, "criterion ids");
    common(report_cmd, "text", {"text", "json", "csv"});

    // per-command defaults that differ from the shared ones
    slv_cmd->preparse_callback([&k](std::size_t) { k.spec = "slv25"; });
    for (auto* sub : {sets_cmd, favard_cmd, norms_cmd, fourier_cmd, ssv_cmd})
        sub->preparse_callback([&k](std::size_t) { k.spec = "fourcorner"; });
    random_cmd->preparse_callback([&k](std::size_t) {
        k.n = 5;
        k.angles = random4::kDefaultAngles;
        k.t = "0.7071067811865476";
    });

    try {
        std::vector<std::string> commands;
        for (const auto* sub : app.get_subcommands({}))
            commands.push_back(sub->get_name());
        auto args = expand_config(argc, argv, commands);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (k.threads > 0)
            kernels::set_max_threads(k.threads);
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "sets")
            return run_sets(k);
        if (name == "favard")
            return run_favard(k);
        if (name == "norms")
            return run_norms(k);
        if (name == "fourier")
            return run_fourier(k);
        if (name == "factor")
            return run_factor(k);
        if (name == "ssv")
            return run_ssv(k);
        if (name == "slv")
            return run_slv(k);
        if (name == "random")
            return run_random(k);
        return run_report(k);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const CertificationFailure& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    }
}
