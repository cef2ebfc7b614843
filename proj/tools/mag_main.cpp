// mag: magnitude toolkit command line.
//
// Subcommands: magnitude, geometry, calibrate, falsify, symbol. Data goes to
// --out files (or stdout); human-readable summaries go to stderr. Every file
// output is accompanied by <out>.manifest.json. Exit codes: 0 ok, 2 input
// validation, 3 solver, 4 mesh, 5 missing calibration.

#include "mag/asymptotics.hpp"
#include "mag/errors.hpp"
#include "mag/functionals.hpp"
#include "mag/magnitude.hpp"
#include "mag/manifest.hpp"
#include "mag/mesh.hpp"
#include "mag/sampler.hpp"
#include "mag/sym/product.hpp"
#include "mag/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <Eigen/Core>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMesh = 4;
constexpr int kExitNoCalibration = 5;

std::vector<double> parse_grid(const std::string& text) {
    // "a:b:k" for k points from a to b, or a comma-separated list
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double a = 0, b = 0;
        int k = 0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(text);
        if (!(ss >> a >> c1 >> b >> c2 >> k) || c1 != ':' || c2 != ':' || k < 1)
            throw mag::InvalidInput("bad grid spec (want a:b:k): " + text);
        for (int i = 0; i < k; ++i)
            out.push_back(k == 1 ? a : a + (b - a) * i / (k - 1));
        return out;
    }
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) throw mag::InvalidInput("bad grid list: " + text);
        try {
            out.push_back(std::stod(cell));
        } catch (const std::logic_error&) {
            throw mag::InvalidInput("non-numeric grid entry: " + cell);
        }
    }
    if (out.empty()) throw mag::InvalidInput("empty grid: " + text);
    return out;
}

void apply_threads(int threads) {
    if (threads <= 0) return;
#ifdef _OPENMP
    omp_set_num_threads(threads);
#endif
    Eigen::setNbThreads(threads);
}

/// Write `body(stream)` to the given file, or stdout when path is empty; file
/// outputs get a manifest next to them.
template <typename Fn>
void emit(const std::string& path, const mag::RunManifest& manifest, Fn&& body) {
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw mag::InvalidInput("cannot open output file: " + path);
    body(f);
    manifest.write_for(path);
}

struct MagnitudeArgs {
    std::string points, matrix, domain_json, R_single, R_grid, out, strategy = "farthest_point";
    double tol = 1e-3;
    int N_max = 4096;
    std::uint64_t seed = 1;
    int threads = 0;
};

int run_magnitude(const MagnitudeArgs& args) {
    apply_threads(args.threads);
    const int n_inputs = !args.points.empty() + !args.matrix.empty() + !args.domain_json.empty();
    if (n_inputs != 1)
        throw mag::InvalidInput("choose exactly one of --points, --matrix, --domain");
    if (args.R_single.empty() == args.R_grid.empty())
        throw mag::InvalidInput("choose exactly one of --R and --R-grid");
    const std::vector<double> grid =
        parse_grid(args.R_single.empty() ? args.R_grid : args.R_single);

    mag::RunManifest manifest = mag::RunManifest::begin("magnitude", args.seed);
    manifest.parameters = {{"points", args.points},   {"matrix", args.matrix},
                           {"domain", args.domain_json}, {"R_grid", grid},
                           {"tol", args.tol},         {"N_max", args.N_max},
                           {"strategy", args.strategy}};

    mag::MagnitudeCurve curve;
    std::vector<mag::EstimateReport> reports;
    if (!args.domain_json.empty()) {
        const auto spec = mag::DomainSpec::from_json_string(args.domain_json);
        mag::EstimateOptions opts;
        opts.tol = args.tol;
        opts.N_max = args.N_max;
        opts.strategy = mag::strategy_from_name(args.strategy);
        opts.seed = args.seed;
        auto ec = mag::estimate_curve(spec, grid, opts);
        curve = std::move(ec.curve);
        reports = std::move(ec.reports);
    } else {
        const auto space = !args.points.empty()
                               ? mag::FiniteMetricSpace::from_points_csv(args.points)
                               : mag::FiniteMetricSpace::from_distance_csv(args.matrix);
        curve = mag::magnitude_curve(space, grid);
    }

    manifest.finish();
    emit(args.out, manifest, [&](std::ostream& os) { curve.write_csv(os); });

    for (const auto& s : curve.samples)
        std::cerr << "R=" << s.R << " magnitude=" << s.value << " (n=" << s.n_points << ")\n";
    for (const auto& rep : reports)
        if (!rep.converged)
            std::cerr << "warning: R=" << rep.R << " not converged (" << rep.note
                      << "), delta_last=" << rep.delta_last << "\n";
    if (!curve.failures.empty()) {
        for (const auto& f : curve.failures)
            std::cerr << "solver failure at R=" << f.R << ": " << f.message << "\n";
        if (curve.samples.empty()) throw mag::NotPositiveDefinite(curve.failures[0].message);
        return kExitSolver;
    }
    return kExitOk;
}

struct GeometryArgs {
    std::string domain_json, mode = "quadrature", out, mesh_out, mesh_in;
    int quad_order = 96;
    int refinement = 3;
};

int run_geometry(const GeometryArgs& args) {
    mag::RunManifest manifest = mag::RunManifest::begin("geometry", 0);
    manifest.parameters = {{"domain", args.domain_json},
                           {"mode", args.mode},
                           {"quad_order", args.quad_order},
                           {"refinement", args.refinement},
                           {"mesh_in", args.mesh_in}};

    mag::GeometricFunctionals f;
    if (!args.mesh_in.empty()) {
        std::ifstream mf(args.mesh_in);
        if (!mf) throw mag::InvalidInput("cannot open mesh file: " + args.mesh_in);
        f = mag::functionals_mesh(mag::SurfaceMesh::read_off(mf));
    } else if (args.domain_json.empty()) {
        throw mag::InvalidInput("pass --domain JSON or --mesh-in OFF");
    } else if (args.mode == "quadrature") {
        const auto spec = mag::DomainSpec::from_json_string(args.domain_json);
        f = mag::functionals_quadrature(spec, args.quad_order);
    } else if (args.mode == "mesh") {
        const auto spec = mag::DomainSpec::from_json_string(args.domain_json);
        const auto mesh = mag::mesh_domain(spec, args.refinement);
        if (!args.mesh_out.empty()) {
            std::ofstream mf(args.mesh_out);
            if (!mf) throw mag::InvalidInput("cannot open mesh output: " + args.mesh_out);
            mesh.write_off(mf);
        }
        f = mag::functionals_mesh(mesh);
    } else {
        throw mag::InvalidInput("mode must be quadrature or mesh");
    }

    manifest.finish();
    emit(args.out, manifest, [&](std::ostream& os) { os << f.to_json().dump(2) << "\n"; });
    std::cerr << "volume=" << f.volume << " area=" << f.area
              << " total_mean_curvature=" << f.mean_curvature_integral
              << " willmore=" << f.willmore << "\n";
    return kExitOk;
}

struct CalibrateArgs {
    std::string R_grid = "1.0:3.0:6", out;
    double tol = 0.005;
    int N_max = 8192;
    std::uint64_t seed = 1;
    int threads = 0;
};

int run_calibrate(const CalibrateArgs& args) {
    apply_threads(args.threads);
    mag::CalibrationOptions opts;
    opts.R_grid = parse_grid(args.R_grid);
    opts.tol = args.tol;
    opts.N_max = args.N_max;
    opts.seed = args.seed;

    mag::RunManifest manifest = mag::RunManifest::begin("calibrate", args.seed);
    manifest.parameters = {{"R_grid", opts.R_grid},
                           {"tol", opts.tol},
                           {"N_max", opts.N_max}};

    const auto cal = mag::calibrate_lambda3(opts);
    manifest.finish();
    emit(args.out, manifest, [&](std::ostream& os) { cal.write_json(os); });
    std::cerr << "lambda3=" << cal.lambda3 << " +/- " << cal.uncertainty << "\n";
    return kExitOk;
}

struct FalsifyArgs {
    std::string a_grid = "1,0.5,0.25,0.125", R_grid = "2:4:5", calibration_file, out;
    bool calibrate = false;
    int budget = 0;
    double cal_tol = 0.005;
    int cal_N_max = 8192;
    std::uint64_t seed = 1;
    int threads = 0;
};

int run_falsify(const FalsifyArgs& args) {
    apply_threads(args.threads);
    mag::CalibrationResult cal;
    if (args.calibrate) {
        mag::CalibrationOptions copts;
        copts.tol = args.cal_tol;
        copts.N_max = args.cal_N_max;
        copts.seed = args.seed;
        cal = mag::calibrate_lambda3(copts);
    } else if (!args.calibration_file.empty()) {
        std::ifstream f(args.calibration_file);
        if (!f) {
            std::cerr << "calibration file not found: " << args.calibration_file << "\n";
            return kExitNoCalibration;
        }
        cal = mag::CalibrationResult::read_json(f);
    } else {
        std::cerr << "no calibration: pass --calibration FILE or --calibrate\n";
        return kExitNoCalibration;
    }

    mag::FalsificationOptions opts;
    opts.a_grid = parse_grid(args.a_grid);
    opts.R_grid = parse_grid(args.R_grid);
    opts.budget = args.budget;
    opts.seed = args.seed;

    mag::RunManifest manifest = mag::RunManifest::begin("falsify", args.seed);
    manifest.parameters = {{"a_grid", opts.a_grid},
                           {"R_grid", opts.R_grid},
                           {"budget", opts.budget},
                           {"lambda3", cal.lambda3}};

    const auto table = mag::falsification_experiment(opts, cal);
    manifest.finish();
    emit(args.out, manifest, [&](std::ostream& os) { table.write_csv(os); });
    std::cerr << "verdict: " << table.verdict << " (c3/V0 spread max/min = "
              << table.ratio_spread << ")\n";
    return kExitOk;
}

struct SymbolArgs {
    std::string op, in, in2, out;
    int cutoff = 0;
    bool cutoff_set = false;
};

nlohmann::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw mag::InvalidInput("cannot open: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw mag::InvalidInput(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return j;
}

int run_symbol(const SymbolArgs& args) {
    using namespace mag::sym;
    const PolyhomSymbol a = PolyhomSymbol::from_json(load_json(args.in));
    mag::RunManifest manifest = mag::RunManifest::begin("symbol", 0);
    manifest.parameters = {{"op", args.op}, {"in", args.in}, {"in2", args.in2}};
    if (args.cutoff_set) manifest.parameters["cutoff"] = args.cutoff;

    nlohmann::json result;
    if (args.op == "homogeneity") {
        const auto rep = a.homogeneity_check();
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : rep.terms)
            terms.push_back({{"index", t.index},
                             {"declared", t.declared},
                             {"measured", t.measured},
                             {"pass", t.pass}});
        result = {{"all_pass", rep.all_pass}, {"terms", terms}};
    } else if (args.op == "parity") {
        const auto rep = a.parity_vanishing_check();
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : rep.terms)
            terms.push_back({{"index", t.index},
                             {"parity", t.parity == Parity::Odd ? "odd" : "even"},
                             {"vanishes_at_xi0", t.vanishes_at_xi0},
                             {"survives", t.survives}});
        result = {{"odd_terms_all_vanish", rep.odd_terms_all_vanish}, {"terms", terms}};
    } else if (args.op == "product") {
        if (args.in2.empty()) throw mag::InvalidInput("product needs --in2");
        if (!args.cutoff_set) throw mag::InvalidInput("product needs an explicit --cutoff");
        const PolyhomSymbol b = PolyhomSymbol::from_json(load_json(args.in2));
        result = symbol_product(a, b, args.cutoff).to_json();
    } else if (args.op == "parametrix") {
        if (!args.cutoff_set) throw mag::InvalidInput("parametrix needs an explicit --cutoff");
        result = parametrix(a, args.cutoff).to_json();
    } else {
        throw mag::InvalidInput("unknown symbol op: " + args.op);
    }

    manifest.finish();
    emit(args.out, manifest, [&](std::ostream& os) { os << result.dump(2) << "\n"; });
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"magnitude toolkit"};
    app.set_version_flag("--version", std::string(mag::kToolVersion));
    app.require_subcommand(1);

    MagnitudeArgs margs;
    auto* cmd_mag = app.add_subcommand(
        "magnitude", "magnitude of a finite space or a sampled compact domain");
    cmd_mag->add_option("--points", margs.points, "CSV point cloud (header x,y,z or x)");
    cmd_mag->add_option("--matrix", margs.matrix, "CSV distance matrix");
    cmd_mag->add_option("--domain", margs.domain_json, "domain spec JSON");
    cmd_mag->add_option("--R", margs.R_single, "single scale value");
    cmd_mag->add_option("--R-grid", margs.R_grid, "scale grid a:b:k or comma list");
    cmd_mag->add_option("--tol", margs.tol, "absolute convergence tolerance");
    cmd_mag->add_option("--N-max", margs.N_max, "sample budget per estimate");
    cmd_mag->add_option("--strategy", margs.strategy, "grid | farthest_point");
    cmd_mag->add_option("--seed", margs.seed, "sampling seed");
    cmd_mag->add_option("--out", margs.out, "output CSV path (default stdout)");
    cmd_mag->add_option("--threads", margs.threads, "cap internal parallelism");

    GeometryArgs gargs;
    auto* cmd_geo = app.add_subcommand("geometry", "boundary functionals of a 3D domain");
    cmd_geo->add_option("--domain", gargs.domain_json, "domain spec JSON");
    cmd_geo->add_option("--mode", gargs.mode, "quadrature | mesh");
    cmd_geo->add_option("--quad-order", gargs.quad_order, "quadrature nodes");
    cmd_geo->add_option("--refinement", gargs.refinement, "mesh refinement level");
    cmd_geo->add_option("--mesh-out", gargs.mesh_out, "write the generated mesh as OFF");
    cmd_geo->add_option("--mesh-in", gargs.mesh_in, "evaluate a user OFF mesh instead");
    cmd_geo->add_option("--out", gargs.out, "output JSON path (default stdout)");

    CalibrateArgs cargs;
    auto* cmd_cal = app.add_subcommand("calibrate", "calibrate the R^0 expansion constant");
    cmd_cal->add_option("--R-grid", cargs.R_grid, "scale grid a:b:k or comma list");
    cmd_cal->add_option("--tol", cargs.tol, "estimate convergence tolerance");
    cmd_cal->add_option("--N-max", cargs.N_max, "sample budget per estimate");
    cmd_cal->add_option("--seed", cargs.seed, "sampling seed");
    cmd_cal->add_option("--out", cargs.out, "calibration JSON path (default stdout)");
    cmd_cal->add_option("--threads", cargs.threads, "cap internal parallelism");

    FalsifyArgs fargs;
    auto* cmd_fal =
        app.add_subcommand("falsify", "ellipsoid family experiment: c3/V0 across aspect ratios");
    cmd_fal->add_option("--a-grid", fargs.a_grid, "aspect ratios, decreasing from 1");
    cmd_fal->add_option("--R-grid", fargs.R_grid, "scale grid for curve fits");
    cmd_fal->add_option("--budget", fargs.budget, "N_max per magnitude fit (0: geometry only)");
    cmd_fal->add_option("--calibration", fargs.calibration_file, "calibration JSON file");
    cmd_fal->add_flag("--calibrate", fargs.calibrate, "calibrate inline instead");
    cmd_fal->add_option("--cal-tol", fargs.cal_tol, "inline calibration tolerance");
    cmd_fal->add_option("--cal-N-max", fargs.cal_N_max, "inline calibration budget");
    cmd_fal->add_option("--seed", fargs.seed, "sampling seed");
    cmd_fal->add_option("--out", fargs.out, "output CSV path (default stdout)");
    cmd_fal->add_option("--threads", fargs.threads, "cap internal parallelism");

    SymbolArgs sargs;
    auto* cmd_sym = app.add_subcommand("symbol", "polyhomogeneous symbol operations");
    cmd_sym->add_option("--op", sargs.op, "homogeneity | parity | product | parametrix")
        ->required();
    cmd_sym->add_option("--in", sargs.in, "input symbol JSON")->required();
    cmd_sym->add_option("--in2", sargs.in2, "second symbol JSON (product)");
    cmd_sym->add_option("--cutoff", sargs.cutoff, "output truncation degree")
        ->each([&](const std::string&) { sargs.cutoff_set = true; });
    cmd_sym->add_option("--out", sargs.out, "output JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (cmd_mag->parsed()) return run_magnitude(margs);
        if (cmd_geo->parsed()) return run_geometry(gargs);
        if (cmd_cal->parsed()) return run_calibrate(cargs);
        if (cmd_fal->parsed()) return run_falsify(fargs);
        if (cmd_sym->parsed()) return run_symbol(sargs);
    } catch (const mag::NotPositiveDefinite& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const mag::CalibrationUnstable& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const mag::RankDeficient& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const mag::DegenerateMesh& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return kExitMesh;
    } catch (const mag::MissingLambda& e) {
        std::cerr << "missing calibration: " << e.what() << "\n";
        return kExitNoCalibration;
    } catch (const mag::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    return dispatch(argc, argv);
}
