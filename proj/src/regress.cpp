#include "moonvol/regress.hpp"

#include "moonvol/error.hpp"

#include <cmath>
#include <stdexcept>

namespace moonvol {

std::string_view regressor_name(Regressor r) {
    switch (r) {
        case Regressor::v: return "v";
        case Regressor::m: return "m";
        case Regressor::vix: return "vix";
        case Regressor::yolo1: return "yolo1";
        case Regressor::yolo2: return "yolo2";
        case Regressor::moon1: return "moon1";
        case Regressor::moon2: return "moon2";
    }
    throw InternalError("unknown regressor");
}

const std::vector<ModelSpec>& model_suite() {
    using R = Regressor;
    static const std::vector<ModelSpec> suite = {
        {"M1", {R::v, R::m, R::vix}},
        {"M2", {R::v, R::m, R::vix, R::yolo1}},
        {"M3", {R::v, R::m, R::vix, R::yolo2}},
        {"M4", {R::v, R::m, R::vix, R::yolo1, R::yolo2}},
        {"M5", {R::v, R::m, R::vix, R::moon1}},
        {"M6", {R::v, R::m, R::vix, R::moon2}},
        {"M7", {R::v, R::m, R::vix, R::moon1, R::moon2}},
        {"M8", {R::v, R::m, R::vix, R::moon1, R::moon2, R::yolo1, R::yolo2}},
    };
    return suite;
}

const ModelSpec& model_spec(std::string_view name) {
    for (const auto& spec : model_suite())
        if (spec.name == name) return spec;
    throw Error("unknown model '" + std::string(name) + "'");
}

namespace {

double regressor_value(const DailySignalRow& row, Regressor r) {
    switch (r) {
        case Regressor::v: return row.v;
        case Regressor::m: return row.m;
        case Regressor::vix: return row.vix;
        case Regressor::yolo1: return row.yolo1;
        case Regressor::yolo2: return row.yolo2;
        case Regressor::moon1: return row.moon1;
        case Regressor::moon2: return row.moon2;
    }
    throw InternalError("unknown regressor");
}

}  // namespace

DesignMatrix build_design_matrix(std::span<const DailySignalRow> rows, const ModelSpec& spec) {
    const std::size_t p = spec.regressors.size();
    if (rows.size() < p + 2)
        throw InsufficientDataError("model " + spec.name + " needs at least " + std::to_string(p + 2) +
                                    " rows, got " + std::to_string(rows.size()));
    const auto n = static_cast<Eigen::Index>(rows.size() - 1);
    DesignMatrix d;
    d.targets.resize(n);
    d.predictors.resize(n, static_cast<Eigen::Index>(p + 1));
    d.columns.push_back("intercept");
    for (auto r : spec.regressors) d.columns.emplace_back(regressor_name(r));
    for (Eigen::Index t = 0; t < n; ++t) {
        const auto& now = rows[static_cast<std::size_t>(t) + 1];
        const auto& before = rows[static_cast<std::size_t>(t)];
        d.targets(t) = now.v;
        d.predictors(t, 0) = 1.0;
        for (std::size_t k = 0; k < p; ++k)
            d.predictors(t, static_cast<Eigen::Index>(k + 1)) = regressor_value(before, spec.regressors[k]);
    }
    return d;
}

double FitResult::coefficient(std::string_view column) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == column) return coefficients(static_cast<Eigen::Index>(i));
    throw std::out_of_range("no coefficient named " + std::string(column));
}

FitResult fit_ols(const Eigen::VectorXd& targets, const Eigen::MatrixXd& predictors,
                  std::vector<std::string> columns) {
    if (targets.size() != predictors.rows()) throw InternalError("design matrix and target sizes differ");
    const auto cols = predictors.cols();
    if (columns.empty())
        for (Eigen::Index k = 0; k < cols; ++k) columns.push_back(k == 0 ? "intercept" : "x" + std::to_string(k));
    if (static_cast<Eigen::Index>(columns.size()) != cols) throw InternalError("column names do not match design");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(predictors);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < cols) {
        std::string dependent;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < cols; ++k)
            dependent += (dependent.empty() ? "" : ", ") + columns[static_cast<std::size_t>(perm(k))];
        throw CollinearityError("collinear design: column(s) " + dependent + " linearly dependent on the others");
    }

    FitResult fit;
    fit.columns = std::move(columns);
    fit.coefficients = qr.solve(targets);
    fit.residuals = targets - predictors * fit.coefficients;
    fit.n_obs = static_cast<std::size_t>(targets.size());

    const double mean = targets.mean();
    const double sst = (targets.array() - mean).square().sum();
    if (!(sst > 0.0)) throw DataError("constant target: R^2 undefined");
    fit.r_squared = 1.0 - fit.residuals.squaredNorm() / sst;
    return fit;
}

FitResult fit_model(std::span<const DailySignalRow> rows, const ModelSpec& spec) {
    auto design = build_design_matrix(rows, spec);
    auto fit = fit_ols(design.targets, design.predictors, std::move(design.columns));
    fit.model = spec.name;
    return fit;
}

std::vector<FitResult> fit_suite(std::span<const DailySignalRow> rows) {
    std::vector<FitResult> out;
    for (const auto& spec : model_suite()) out.push_back(fit_model(rows, spec));
    return out;
}

std::vector<double> signal_column(std::span<const DailySignalRow> rows, std::string_view column) {
    static constexpr Regressor all[] = {Regressor::v,     Regressor::m,     Regressor::vix,  Regressor::yolo1,
                                        Regressor::yolo2, Regressor::moon1, Regressor::moon2};
    for (auto r : all) {
        if (regressor_name(r) != column) continue;
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(regressor_value(row, r));
        return out;
    }
    throw Error("unknown column '" + std::string(column) + "'");
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DataError("pearson needs two equal-length series of size >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DataError("degenerate column: constant series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double CorrelationMatrix::at(std::string_view a, std::string_view b) const {
    Eigen::Index ia = -1, ib = -1;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == a) ia = static_cast<Eigen::Index>(i);
        if (columns[i] == b) ib = static_cast<Eigen::Index>(i);
    }
    if (ia < 0 || ib < 0) throw std::out_of_range("unknown correlation column");
    return values(ia, ib);
}

CorrelationMatrix pearson_matrix(std::span<const DailySignalRow> rows, const std::vector<std::string>& columns) {
    std::vector<std::vector<double>> data;
    for (const auto& c : columns) {
        data.push_back(signal_column(rows, c));
        const auto& col = data.back();
        bool constant = true;
        for (double x : col) constant = constant && x == col.front();
        if (col.size() < 2 || constant) throw DataError("degenerate column '" + c + "': fewer than 2 distinct values");
    }
    CorrelationMatrix out;
    out.columns = columns;
    const auto k = static_cast<Eigen::Index>(columns.size());
    out.values = Eigen::MatrixXd::Identity(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j)
            out.values(i, j) = out.values(j, i) =
                pearson(data[static_cast<std::size_t>(i)], data[static_cast<std::size_t>(j)]);
    return out;
}

}  // namespace moonvol
