#include "wallbench/global_mlp.hpp"

#include "wallbench/error.hpp"

#include <cmath>

namespace wallbench {

GlobalMlpVariableModel global_mlp_train(const MlpSpec& spec, const Eigen::MatrixXd& params_train,
                                        const Eigen::MatrixXd& snaps_train,
                                        const Eigen::MatrixXd& params_val,
                                        const Eigen::MatrixXd& snaps_val) {
    if (snaps_train.rows() != params_train.rows() || snaps_val.rows() != params_val.rows()) {
        throw ValidationError("global_mlp_train: parameter rows must match snapshots");
    }
    if (snaps_train.cols() != snaps_val.cols()) {
        throw ValidationError("global_mlp_train: train and validation field sizes differ");
    }

    GlobalMlpVariableModel model;
    model.y_mean = snaps_train.mean();
    const double var = (snaps_train.array() - model.y_mean).square().mean();
    model.y_scale = var > 0.0 ? std::sqrt(var) : 1.0;

    const Eigen::MatrixXd y_tr = (snaps_train.array() - model.y_mean) / model.y_scale;
    const Eigen::MatrixXd y_val = (snaps_val.array() - model.y_mean) / model.y_scale;
    model.net = mlp_train(spec, params_train, y_tr, params_val, y_val);
    return model;
}

Eigen::VectorXd global_mlp_predict(const GlobalMlpVariableModel& model,
                                   const Eigen::VectorXd& p_scaled) {
    const Eigen::MatrixXd y = mlp_predict(model.net, p_scaled.transpose());
    return (y.row(0).transpose().array() * model.y_scale + model.y_mean).matrix();
}

} // namespace wallbench
