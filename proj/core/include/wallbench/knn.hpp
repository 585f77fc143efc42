#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace wallbench {

/// inverse-distance neighbor blend over one output variable's snapshots
struct KnnModel {
    Eigen::MatrixXd scaled_train_params; ///< n_tr x d, already scaled
    Eigen::MatrixXd train_snapshots;     ///< n_tr x n_p
    int k = 1;
    double zero_dist_tol = 1e-12; ///< below this the stored snapshot is returned bitwise

    void validate() const;
};

/// weights are 1/distance in scaled parameter space; an exact parameter match
/// short-circuits to the stored snapshot so training conditions reproduce bitwise
Eigen::VectorXd knn_predict(const KnnModel& model, const Eigen::VectorXd& p_scaled);

/// scores each k by mean relative MAE over `removals` held-out snapshots per
/// repeat; returns the argmin averaged over repeats, ties to the smaller k
int knn_select_k(const Eigen::MatrixXd& scaled_params, const Eigen::MatrixXd& snapshots,
                 int k_lo, int k_hi, int removals, int repeats, std::uint64_t seed);

} // namespace wallbench
