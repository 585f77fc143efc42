#pragma once

#include "wallbench/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wallbench {

enum class Activation { leaky_relu, relu, tanh };

std::string to_string(Activation a);
Activation activation_from_string(std::string_view s);

/// learning rate at epoch e is initial * decay^e
struct LrSchedule {
    double initial = 1e-3;
    double decay = 0.99;
};

struct MlpSpec {
    std::vector<int> hidden_sizes;
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

/// fully connected stack; hidden layers are activated, the last layer is
/// linear unless activate_last is set (branch networks emit features)
struct DenseNet {
    std::vector<Eigen::MatrixXd> weights; ///< layer l is (out_l, in_l)
    std::vector<Eigen::VectorXd> biases;
    Activation activation = Activation::leaky_relu;
    double leaky_slope = 0.01;
    bool activate_last = false;

    /// widths includes the input and output layer; He-uniform weights, zero biases
    static DenseNet make(const std::vector<Eigen::Index>& widths, Activation act,
                         double leaky_slope, bool activate_last, Rng& rng);

    Eigen::Index input_width() const;
    Eigen::Index output_width() const;
    Eigen::Index param_count() const;

    /// flat layout: per layer, weight rows in row-major order, then the bias
    Eigen::VectorXd params_flat() const;
    void set_params_flat(const Eigen::VectorXd& theta);
    /// 1.0 for weight entries, 0.0 for bias entries, in flat order
    Eigen::VectorXd weight_mask() const;

    /// rows are samples; pure, dropout off
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
};

struct TrainLog {
    std::vector<double> train_loss; ///< per-epoch mean of batch losses, data term only
    std::vector<double> val_loss;
    int best_epoch = -1;
};

struct MlpModel {
    MlpSpec spec;
    DenseNet net;
    TrainLog log;
};

/// mean over rows of the row-summed squared error plus 0.5*l2*sum of squared weights
double mlp_objective(const DenseNet& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                     double l2);
/// analytic gradient of mlp_objective in params_flat order
Eigen::VectorXd mlp_gradient(const DenseNet& net, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y, double l2);

/// seeded Adam descent; returns the parameters with the best validation loss
MlpModel mlp_train(const MlpSpec& spec, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   const Eigen::MatrixXd& x_val, const Eigen::MatrixXd& y_val);

Eigen::MatrixXd mlp_predict(const MlpModel& model, const Eigen::MatrixXd& x);

} // namespace wallbench
