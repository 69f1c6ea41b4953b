#pragma once

#include "moonvol/signals.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moonvol {

/// Predictors, each entering the model at lag one.
enum class Regressor { v, m, vix, yolo1, yolo2, moon1, moon2 };

std::string_view regressor_name(Regressor r);

struct ModelSpec {
    std::string name;
    std::vector<Regressor> regressors;  ///< intercept is implicit
};

/// M1..M8 in order. M1 = {V, M, VIX}; M2-M4 add YOLO1/YOLO2; M5-M7 add MOON1/MOON2;
/// M8 adds all four.
const std::vector<ModelSpec>& model_suite();
const ModelSpec& model_spec(std::string_view name);

struct DesignMatrix {
    Eigen::VectorXd targets;     ///< V_t for t = 2..n
    Eigen::MatrixXd predictors;  ///< [1, regressors at t-1]
    std::vector<std::string> columns;
};

/// Lags every regressor by one row. Requires at least regressors + 2 rows.
DesignMatrix build_design_matrix(std::span<const DailySignalRow> rows, const ModelSpec& spec);

struct FitResult {
    std::string model;
    std::vector<std::string> columns;
    Eigen::VectorXd coefficients;
    double r_squared = 0.0;
    std::size_t n_obs = 0;
    Eigen::VectorXd residuals;

    /// Coefficient by column name; throws std::out_of_range for unknown names.
    double coefficient(std::string_view column) const;
};

/// Relative rank tolerance of the column-pivoted QR (against the largest column norm).
inline constexpr double kRankTolerance = 1e-10;

/// Least squares via column-pivoted Householder QR. The first column is expected to
/// be the intercept; R^2 is measured against the intercept-only model.
/// Throws CollinearityError naming the dependent columns when rank deficient.
FitResult fit_ols(const Eigen::VectorXd& targets, const Eigen::MatrixXd& predictors,
                  std::vector<std::string> columns = {});

FitResult fit_model(std::span<const DailySignalRow> rows, const ModelSpec& spec);

/// All eight models on the same rows, in suite order.
std::vector<FitResult> fit_suite(std::span<const DailySignalRow> rows);

/// Column accessor for the signal table: v, moon1, moon2, yolo1, yolo2, m, vix.
std::vector<double> signal_column(std::span<const DailySignalRow> rows, std::string_view column);

double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;

    double at(std::string_view a, std::string_view b) const;
};

/// Contemporaneous Pearson correlations. Throws DataError on a constant column.
CorrelationMatrix pearson_matrix(std::span<const DailySignalRow> rows, const std::vector<std::string>& columns);

}  // namespace moonvol
