#pragma once

#include "wallbench/mlp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace wallbench {

/// dual-branch perceptron: columns 0..5 (position + normal) feed the geometry
/// branch, columns 6..8 (mach, aoa, p_i) the condition branch; both branch
/// outputs are activated features concatenated into the trunk
struct LambdaDnnSpec {
    std::vector<int> geo_branch;
    std::vector<int> cond_branch;
    std::vector<int> trunk;
    Activation activation = Activation::leaky_relu;
    double leaky_slope = 0.01;
    double dropout = 0.0;
    double l2 = 0.0;
    LrSchedule lr_schedule{};
    double batch_fraction = 0.01;
    int epochs = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LambdaDnnModel {
    LambdaDnnSpec spec;
    DenseNet geo;
    DenseNet cond;
    DenseNet trunk;
    TrainLog log;
};

/// flat layout: geo parameters, then cond, then trunk, each in DenseNet order
Eigen::VectorXd lambda_dnn_params(const LambdaDnnModel& model);
void set_lambda_dnn_params(LambdaDnnModel& model, const Eigen::VectorXd& theta);
Eigen::Index lambda_dnn_param_count(const LambdaDnnModel& model);

double lambda_dnn_objective(const LambdaDnnModel& model, const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd& y, double l2);
Eigen::VectorXd lambda_dnn_gradient(const LambdaDnnModel& model, const Eigen::MatrixXd& x,
                                    const Eigen::MatrixXd& y, double l2);

LambdaDnnModel lambda_dnn_train(const LambdaDnnSpec& spec, const Eigen::MatrixXd& x,
                                const Eigen::MatrixXd& y, const Eigen::MatrixXd& x_val,
                                const Eigen::MatrixXd& y_val);
Eigen::MatrixXd lambda_dnn_predict(const LambdaDnnModel& model, const Eigen::MatrixXd& x);

} // namespace wallbench
