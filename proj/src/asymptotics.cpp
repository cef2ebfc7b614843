#include "mag/asymptotics.hpp"

#include "mag/steiner.hpp"
#include "mag/version.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace mag {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

ExpansionPrediction predict_coefficients(const GeometricFunctionals& g, int n,
                                         std::optional<double> lambda_n) {
    if (n < 1 || n % 2 == 0) throw InvalidInput("expansion requires odd dimension n");
    ExpansionPrediction p;
    p.n = n;
    p.m = (n + 1) / 2;
    p.norm = factorial(n) * unit_ball_volume(n);
    p.lambda_n = lambda_n;
    p.c[0] = g.volume;
    p.c[1] = p.m * g.area;
    p.c[2] = 0.5 * p.m * p.m * (n - 1) * g.mean_curvature_integral;
    if (lambda_n) {
        p.c[3] = *lambda_n * g.willmore;
        p.has_c3 = true;
    }
    return p;
}

double predicted_magnitude(const ExpansionPrediction& p, double R, int order) {
    if (!(R > 0.0)) throw InvalidInput("scale R must be positive");
    if (order < 0 || order > 3) throw InvalidInput("order must be in 0..3");
    if (order == 3 && !p.has_c3)
        throw MissingLambda("c3 requested but lambda_n was never supplied");
    double sum = 0.0;
    for (int j = 0; j <= order; ++j) sum += p.c[j] * std::pow(R, p.n - j);
    return sum / p.norm;
}

FitResult fit_expansion(const MagnitudeCurve& curve, int n, const std::vector<int>& powers,
                        const std::map<int, double>& fixed) {
    if (n < 1 || n % 2 == 0) throw InvalidInput("expansion requires odd dimension n");
    if (powers.empty()) throw InvalidInput("no powers to fit");
    std::vector<int> free_powers;
    for (int p : powers) {
        if (!fixed.count(p)) free_powers.push_back(p);
    }
    for (const auto& [p, v] : fixed)
        if (std::find(powers.begin(), powers.end(), p) == powers.end())
            throw InvalidInput("fixed power " + std::to_string(p) + " not in the model");
    const int n_free = static_cast<int>(free_powers.size());
    const int rows = static_cast<int>(curve.samples.size());
    if (rows < 2 + n_free)
        throw InvalidInput("need at least 2 + #free samples for a stable fit");
    double r_lo = curve.samples.front().R, r_hi = r_lo;
    for (const auto& s : curve.samples) {
        r_lo = std::min(r_lo, s.R);
        r_hi = std::max(r_hi, s.R);
    }
    if (!(r_hi >= 2.0 * r_lo))
        throw InvalidInput("R values must spread over at least a factor 2");

    const double norm = factorial(n) * unit_ball_volume(n);
    Eigen::MatrixXd A(rows, std::max(n_free, 1));
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) {
        const double R = curve.samples[i].R;
        const double w = std::pow(R, -(n - 3)); // equalize pull on the R^{n-3} term
        double target = curve.samples[i].value * norm;
        for (const auto& [p, v] : fixed) target -= v * std::pow(R, p);
        y(i) = w * target;
        for (int j = 0; j < n_free; ++j) A(i, j) = w * std::pow(R, free_powers[j]);
    }

    FitResult out;
    for (const auto& [p, v] : fixed) out.fixed.insert(p);
    if (n_free == 0) {
        out.residual_norm = y.norm();
        return out;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-12);
    if (qr.rank() < n_free)
        throw RankDeficient("design matrix is numerically singular (rank " +
                            std::to_string(qr.rank()) + " of " + std::to_string(n_free) + ")");
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - A * beta;
    out.residual_norm = resid.norm();
    const int dof = std::max(1, rows - n_free);
    const double sigma2 = resid.squaredNorm() / dof;
    const Eigen::MatrixXd cov = sigma2 * (A.transpose() * A).inverse();
    for (int j = 0; j < n_free; ++j) {
        out.coefficients[free_powers[j]] = beta(j);
        out.std_errors[free_powers[j]] = std::sqrt(std::max(cov(j, j), 0.0));
    }
    return out;
}

FitResult fit_expansion(const MagnitudeCurve& curve, int n,
                        const std::map<int, double>& fixed) {
    return fit_expansion(curve, n, {n, n - 1, n - 2, n - 3}, fixed);
}

// ---------------- lambda_3 calibration ----------------

CalibrationResult calibrate_lambda3(const CalibrationOptions& opts) {
    if (opts.R_grid.size() < 6)
        throw InvalidInput("calibration needs at least 6 scale values");
    for (size_t i = 1; i < opts.R_grid.size(); ++i)
        if (!(opts.R_grid[i] > opts.R_grid[i - 1]))
            throw InvalidInput("calibration R grid must be strictly increasing");

    const DomainSpec ball = DomainSpec::ball(1.0);
    const GeometricFunctionals g = functionals_quadrature(ball);
    const ExpansionPrediction pred = predict_coefficients(g, 3);

    CalibrationResult cal;
    cal.R_grid = opts.R_grid;
    cal.tol = opts.tol;
    cal.N_max = opts.N_max;
    cal.seed = opts.seed;

    EstimateOptions eopts;
    eopts.tol = opts.tol;
    eopts.N_max = opts.N_max;
    eopts.strategy = SampleStrategy::FarthestPoint;
    eopts.seed = opts.seed;

    std::vector<double> residuals;
    for (double R : opts.R_grid) {
        const EstimateReport rep = estimate_magnitude(ball, R, eopts);
        cal.estimates.push_back(rep.final);
        cal.converged.push_back(rep.converged);
        residuals.push_back((rep.final - predicted_magnitude(pred, R, 2)) * pred.norm);
    }

    // Constant fit of the normalized residual (the R^0 term for n = 3).
    const int nr = static_cast<int>(residuals.size());
    double c3_hat = 0.0;
    for (double r : residuals) c3_hat += r;
    c3_hat /= nr;

    std::mt19937_64 rng(opts.seed ^ 0xB00757AFULL);
    std::uniform_int_distribution<int> pick(0, nr - 1);
    std::vector<double> boot;
    boot.reserve(opts.bootstrap);
    for (int b = 0; b < opts.bootstrap; ++b) {
        double s = 0.0;
        for (int i = 0; i < nr; ++i) s += residuals[pick(rng)];
        boot.push_back(s / nr);
    }
    double mean_b = 0.0;
    for (double v : boot) mean_b += v;
    mean_b /= boot.size();
    double var_b = 0.0;
    for (double v : boot) var_b += (v - mean_b) * (v - mean_b);
    var_b /= (boot.size() - 1);

    const double sphere_willmore = 4.0 * M_PI;
    cal.lambda3 = c3_hat / sphere_willmore;
    cal.uncertainty = std::sqrt(var_b) / sphere_willmore;

    if (cal.uncertainty > 0.5 * std::abs(cal.lambda3)) {
        std::ostringstream msg;
        msg << "fitted constant uncertainty " << cal.uncertainty
            << " exceeds 50% of the estimate " << cal.lambda3;
        throw CalibrationUnstable(msg.str());
    }
    if (std::abs(cal.lambda3) <= 3.0 * cal.uncertainty)
        throw CalibrationUnstable("lambda_3 estimate is not nonzero at 3 sigma");
    return cal;
}

nlohmann::json CalibrationResult::provenance() const {
    return {{"R_grid", R_grid}, {"estimates", estimates}, {"converged", converged},
            {"tol", tol},       {"N_max", N_max},         {"seed", seed},
            {"tool_version", kToolVersion}};
}

void CalibrationResult::write_json(std::ostream& os) const {
    const nlohmann::json j = {
        {"lambda3", lambda3}, {"uncertainty", uncertainty}, {"provenance", provenance()}};
    os << j.dump(2) << "\n";
}

CalibrationResult CalibrationResult::read_json(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
        CalibrationResult cal;
        cal.lambda3 = j.at("lambda3").get<double>();
        cal.uncertainty = j.at("uncertainty").get<double>();
        const auto& prov = j.at("provenance");
        cal.R_grid = prov.at("R_grid").get<std::vector<double>>();
        cal.estimates = prov.at("estimates").get<std::vector<double>>();
        cal.converged = prov.at("converged").get<std::vector<bool>>();
        cal.tol = prov.at("tol").get<double>();
        cal.N_max = prov.at("N_max").get<int>();
        cal.seed = prov.at("seed").get<std::uint64_t>();
        return cal;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad calibration JSON: ") + e.what());
    }
}

// ---------------- falsification experiment ----------------

FalsificationTable falsification_experiment(const FalsificationOptions& opts,
                                            const CalibrationResult& calibration) {
    if (opts.a_grid.empty()) throw InvalidInput("empty aspect-ratio grid");
    if (!(opts.a_grid.front() <= 1.0) || opts.a_grid.front() <= 0.0)
        throw InvalidInput("aspect ratios must lie in (0, 1]");
    for (size_t i = 1; i < opts.a_grid.size(); ++i)
        if (!(opts.a_grid[i] < opts.a_grid[i - 1]))
            throw InvalidInput("aspect-ratio grid must decrease from 1");

    constexpr int kMinFitBudget = 512;
    FalsificationTable table;
    for (double a : opts.a_grid) {
        FalsificationRow row;
        row.a = a;
        const DomainSpec dom = a == 1.0 ? DomainSpec::ball(1.0) : DomainSpec::ellipsoid(a);
        const GeometricFunctionals g = functionals_quadrature(dom);
        row.willmore = g.willmore;
        row.V0 = 1.0; // Euler characteristic of a convex body
        row.c3_pred = calibration.lambda3 * g.willmore;
        row.ratio_c3_V0 = row.c3_pred / row.V0;
        row.c3_fitted = std::numeric_limits<double>::quiet_NaN();
        row.c3_fitted_err = std::numeric_limits<double>::quiet_NaN();
        if (opts.budget >= kMinFitBudget) {
            try {
                EstimateOptions eopts;
                eopts.tol = 0.02;
                eopts.N_max = opts.budget;
                eopts.seed = opts.seed;
                const EstimateCurve ec = estimate_curve(dom, opts.R_grid, eopts);
                if (ec.curve.samples.size() >= 3) {
                    const ExpansionPrediction p = predict_coefficients(g, 3);
                    const std::map<int, double> fixed = {
                        {3, p.c[0]}, {2, p.c[1]}, {1, p.c[2]}};
                    const FitResult fit = fit_expansion(ec.curve, 3, {3, 2, 1, 0}, fixed);
                    row.c3_fitted = fit.coefficients.at(0);
                    row.c3_fitted_err = fit.std_errors.at(0);
                }
            } catch (const Error&) {
                // per-a estimation failures leave the fitted columns as NaN
            }
        }
        table.rows.push_back(row);
    }

    double rmin = table.rows.front().ratio_c3_V0, rmax = rmin;
    for (const auto& r : table.rows) {
        rmin = std::min(rmin, r.ratio_c3_V0);
        rmax = std::max(rmax, r.ratio_c3_V0);
    }
    table.ratio_spread = rmin != 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
    if (table.rows.size() < 2) table.verdict = "insufficient grid";
    else if (table.ratio_spread > 2.0) table.verdict = "non-constant";
    else table.verdict = "inconclusive";
    return table;
}

void FalsificationTable::write_csv(std::ostream& os) const {
    os << "a,willmore,V0,c3_pred,c3_fitted,c3_fitted_err,ratio_c3_V0\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.a,
                      r.willmore, r.V0, r.c3_pred, r.c3_fitted, r.c3_fitted_err,
                      r.ratio_c3_V0);
        os << buf;
    }
}

} // namespace mag
