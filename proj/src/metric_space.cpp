#include "mag/metric_space.hpp"

#include "mag/errors.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace mag {

namespace {

std::vector<std::string> default_labels(int n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return labels;
}

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) throw InvalidInput("empty CSV cell");
        try {
            size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw InvalidInput("trailing junk in CSV cell: " + cell);
        } catch (const std::logic_error&) {
            throw InvalidInput("non-numeric CSV cell: " + cell);
        }
    }
    return out;
}

} // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
    const auto n = dist_.rows();
    if (n == 0) throw InvalidInput("empty metric space");
    if (dist_.cols() != n) throw InvalidInput("distance matrix is not square");
    if (labels_.empty()) labels_ = default_labels(static_cast<int>(n));
    if (static_cast<Eigen::Index>(labels_.size()) != n)
        throw InvalidInput("label count does not match distance matrix size");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (dist_(i, i) != 0.0)
            throw InvalidInput("distance matrix has nonzero diagonal");
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dij = dist_(i, j);
            if (!std::isfinite(dij)) throw InvalidInput("non-finite distance");
            if (dij != dist_(j, i)) throw InvalidInput("distance matrix is not symmetric");
            if (dij <= 0.0)
                throw InvalidInput("duplicate or negatively separated points (d <= 0 off-diagonal)");
        }
    }
}

FiniteMetricSpace FiniteMetricSpace::from_points(const Eigen::MatrixXd& points) {
    const auto n = points.rows();
    if (n == 0) throw InvalidInput("no points");
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dij = (points.row(i) - points.row(j)).norm();
            d(i, j) = dij;
            d(j, i) = dij;
        }
    }
    return FiniteMetricSpace(default_labels(static_cast<int>(n)), std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::from_points_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open points file: " + path);
    std::string header;
    if (!std::getline(f, header)) throw InvalidInput("empty points file: " + path);
    int dim = 0;
    if (header == "x") dim = 1;
    else if (header == "x,y,z") dim = 3;
    else throw InvalidInput("points CSV header must be 'x' or 'x,y,z', got: " + header);

    std::vector<double> flat;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto row = parse_csv_row(line);
        if (static_cast<int>(row.size()) != dim)
            throw InvalidInput("points row width does not match header");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    const int n = static_cast<int>(flat.size()) / dim;
    if (n == 0) throw InvalidInput("points file has no rows: " + path);
    Eigen::MatrixXd pts(n, dim);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < dim; ++c) pts(i, c) = flat[i * dim + c];
    return from_points(pts);
}

FiniteMetricSpace FiniteMetricSpace::from_distance_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open distance file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_csv_row(line));
    }
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw InvalidInput("distance file has no rows: " + path);
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw InvalidInput("distance matrix is not square in: " + path);
        for (int j = 0; j < n; ++j) d(i, j) = rows[i][j];
    }
    return FiniteMetricSpace(default_labels(n), std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::rescaled(double s) const {
    if (!(s > 0.0)) throw InvalidInput("scale factor must be positive");
    return FiniteMetricSpace(labels_, dist_ * s);
}

FiniteMetricSpace FiniteMetricSpace::subset(const std::vector<int>& indices) const {
    const int k = static_cast<int>(indices.size());
    if (k == 0) throw InvalidInput("empty subset");
    std::vector<std::string> labels;
    labels.reserve(k);
    Eigen::MatrixXd d(k, k);
    for (int i = 0; i < k; ++i) {
        if (indices[i] < 0 || indices[i] >= size()) throw InvalidInput("subset index out of range");
        labels.push_back(labels_[indices[i]]);
        for (int j = 0; j < k; ++j) d(i, j) = dist_(indices[i], indices[j]);
    }
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::permuted(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != size()) throw InvalidInput("permutation size mismatch");
    return subset(perm);
}

bool FiniteMetricSpace::satisfies_triangle_inequality(double tol) const {
    const int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (dist_(i, j) > dist_(i, k) + dist_(k, j) + tol) return false;
    return true;
}

void MagnitudeCurve::write_csv(std::ostream& os) const {
    os << "R,value,n_points,condition_estimate\n";
    char buf[160];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.6g\n", s.R, s.value, s.n_points,
                      s.condition_estimate);
        os << buf;
    }
}

MagnitudeCurve MagnitudeCurve::read_csv(std::istream& is) {
    MagnitudeCurve curve;
    std::string line;
    if (!std::getline(is, line)) throw InvalidInput("empty curve CSV");
    if (line != "R,value,n_points,condition_estimate")
        throw InvalidInput("unexpected curve CSV header: " + line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto row = parse_csv_row(line);
        if (row.size() != 4) throw InvalidInput("curve CSV row must have 4 columns");
        curve.samples.push_back({row[0], row[1], static_cast<int>(row[2]), row[3]});
    }
    return curve;
}

} // namespace mag
