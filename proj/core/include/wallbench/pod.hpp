#pragma once

#include "wallbench/rbf.hpp"

#include <Eigen/Dense>

namespace wallbench {

/// smallest rank whose retained singular-value sum reaches threshold * total;
/// threshold 1.0 keeps every value
int pod_rank(const Eigen::VectorXd& sigma, double threshold);

/// truncated basis of mean-centered snapshots for one output variable; the
/// latent regressor maps scaled conditions to raw right-singular-vector rows
struct PodVariableModel {
    Eigen::VectorXd mean_field; ///< n_p
    Eigen::MatrixXd u_r;        ///< n_p x r
    Eigen::VectorXd sigma_r;    ///< descending; trailing zeros possible at threshold 1
    RbfModel latent;            ///< scaled conditions -> r latent coordinates
    int r = 0;
    double energy_threshold = 0.99;
};

PodVariableModel pod_fit(const Eigen::MatrixXd& scaled_params, const Eigen::MatrixXd& snapshots,
                         double threshold, RbfKernel kernel, double reg);

/// mean_field + u_r * diag(sigma_r) * z(p)
Eigen::VectorXd pod_predict(const PodVariableModel& model, const Eigen::VectorXd& p_scaled);

} // namespace wallbench
