#pragma once

#include "wallbench/mlp.hpp"

#include <Eigen/Core>

namespace wallbench {

/// One network per field variable, conditions in and the whole field out.
/// Targets are standardized by a single scalar mean/spread so the loss scale
/// does not depend on the variable's physical units.
struct GlobalMlpVariableModel {
    MlpModel net;
    double y_mean = 0.0;
    double y_scale = 1.0;
};

GlobalMlpVariableModel global_mlp_train(const MlpSpec& spec, const Eigen::MatrixXd& params_train,
                                        const Eigen::MatrixXd& snaps_train,
                                        const Eigen::MatrixXd& params_val,
                                        const Eigen::MatrixXd& snaps_val);

Eigen::VectorXd global_mlp_predict(const GlobalMlpVariableModel& model,
                                   const Eigen::VectorXd& p_scaled);

} // namespace wallbench
