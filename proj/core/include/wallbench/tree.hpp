#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace wallbench {

struct TreeSpec {
    int max_depth = -1; ///< negative means unbounded
    int min_samples_leaf = 1;
    std::uint64_t seed = 0; ///< reserved; the split tie rule is deterministic

    void validate() const;
};

/// feature < 0 marks a leaf; rows with x(feature) <= threshold go left
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Eigen::VectorXd value;

    bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
    TreeSpec spec;
    std::vector<TreeNode> nodes; ///< node 0 is the root
    Eigen::Index n_features = 0;
    Eigen::Index n_outputs = 0;
};

/// greedy binary CART splits minimizing the summed squared error of child
/// means over all output columns; thresholds are midpoints of consecutive
/// distinct sorted values; equal-error ties pick the lowest feature index,
/// then the lowest threshold
TreeModel tree_fit(const TreeSpec& spec, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

Eigen::MatrixXd tree_predict(const TreeModel& model, const Eigen::MatrixXd& x);

int tree_depth(const TreeModel& model);

} // namespace wallbench
