#pragma once

#include "wallbench/dataset.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wallbench {

/// column order of WallField::values
inline constexpr std::array<std::string_view, 4> kOutputNames{"cp", "cfx", "cfy", "cfz"};

/// Weighted coefficient of determination for one variable over the test
/// flows. The reference mean is unweighted over all locations and flows;
/// `weighted_mean` switches to the flow-weighted alternative.
double r2_weighted(const std::vector<Eigen::VectorXd>& truth,
                   const std::vector<Eigen::VectorXd>& pred, const std::vector<double>& weights,
                   bool weighted_mean = false);

/// Relative MAE per flow: sum |y - yhat| / sum |y|. A flow whose truth is
/// identically zero is a hard error naming the flow.
std::vector<double> rmae_per_flow(const std::vector<Eigen::VectorXd>& truth,
                                  const std::vector<Eigen::VectorXd>& pred,
                                  const std::vector<std::string>& flow_names = {});

struct WorstFlowScore {
    double value = 0.0;
    std::size_t flow = 0; ///< index into the flow vectors
};

/// Maximum relative MAE over the weight-1 flows only.
WorstFlowScore wrmae(const std::vector<Eigen::VectorXd>& truth,
                     const std::vector<Eigen::VectorXd>& pred, const std::vector<double>& weights,
                     const std::vector<std::string>& flow_names = {});

struct ScoreReport {
    std::array<double, 4> r2{};
    double r2_mean = 0.0;
    std::array<double, 4> wrmae{};
    double wrmae_mean = 0.0;
    std::array<FlowCondition, 4> worst_flow{}; ///< argmax flow per variable
    std::vector<std::string> flow_ids;         ///< test flows in conditions order
    std::vector<double> flow_weights;
    Eigen::MatrixXd rmae_table; ///< |flow_ids| x 4
};

/// Scores a validated submission against the dataset's hidden test truth.
ScoreReport score_submission(const Dataset& ds, const std::map<std::string, WallField>& submission,
                             bool weighted_mean = false);

/// Aligned human-readable table.
std::string render_report_text(const ScoreReport& report);

/// Ordered machine-readable form; parseable by report_from_json.
std::string render_report_json(const ScoreReport& report);
ScoreReport report_from_json(const std::string& text);

} // namespace wallbench
