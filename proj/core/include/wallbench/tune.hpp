#pragma once

#include "wallbench/mlp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace wallbench {

/// discrete sampling space for MLP hyperparameters; every list must be nonempty
struct MlpTuneSpace {
    std::vector<std::vector<int>> hidden_options = {{32, 32}, {64, 64}, {64, 32, 16}};
    std::vector<double> lr_options = {3e-3, 1e-3, 3e-4};
    std::vector<double> dropout_options = {0.0, 0.05, 0.1};
    std::vector<double> l2_options = {0.0, 1e-6, 1e-4};
    std::vector<int> epoch_options = {50};
    Activation activation = Activation::leaky_relu;
    double leaky_slope = 0.01;
    double lr_decay = 0.99;
    double batch_fraction = 0.05;

    void validate() const;
};

struct TuneTrial {
    MlpSpec spec;
    double val_r2 = 0.0;
    bool failed = false;
};

struct TuneResult {
    MlpSpec best_spec;
    double best_val_r2 = 0.0;
    std::vector<TuneTrial> trials;
};

/// draws `budget` specs with per-trial derived seeds (so trial t is the same
/// for any budget > t), trains each, and returns the best validation R^2
TuneResult random_search_tune(const MlpTuneSpace& space, int budget, std::uint64_t seed,
                              const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                              const Eigen::MatrixXd& x_val, const Eigen::MatrixXd& y_val);

} // namespace wallbench
