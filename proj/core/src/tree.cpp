#include "wallbench/tree.hpp"

#include "wallbench/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace wallbench {

namespace {

struct WorkItem {
    int node;
    std::vector<Eigen::Index> rows;
    int depth;
};

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double children_sse = std::numeric_limits<double>::infinity();
};

/// SSE of a group against its mean from running sums: sum(y^2) - sum(y)^2 / n
double sse_from_sums(const Eigen::VectorXd& sum, const Eigen::VectorXd& sum_sq, double n) {
    double sse = 0.0;
    for (Eigen::Index c = 0; c < sum.size(); ++c) {
        sse += sum_sq(c) - sum(c) * sum(c) / n;
    }
    return sse;
}

bool rows_identical(const Eigen::MatrixXd& y, const std::vector<Eigen::Index>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (y.row(rows[i]) != y.row(rows[0])) return false;
    }
    return true;
}

SplitChoice best_split(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const std::vector<Eigen::Index>& rows, int min_samples_leaf) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index q = y.cols();
    SplitChoice best;

    std::vector<std::pair<double, Eigen::Index>> order(rows.size());
    Eigen::VectorXd left_sum(q), left_sq(q);
    for (int feature = 0; feature < x.cols(); ++feature) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            order[i] = {x(rows[i], feature), rows[i]};
        }
        std::sort(order.begin(), order.end());

        left_sum.setZero();
        left_sq.setZero();
        Eigen::VectorXd total_sum = Eigen::VectorXd::Zero(q);
        Eigen::VectorXd total_sq = Eigen::VectorXd::Zero(q);
        for (const auto& [v, r] : order) {
            (void)v;
            total_sum += y.row(r).transpose();
            total_sq += y.row(r).transpose().cwiseAbs2();
        }

        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            const Eigen::Index r = order[static_cast<std::size_t>(p)].second;
            left_sum += y.row(r).transpose();
            left_sq += y.row(r).transpose().cwiseAbs2();

            const double xl = order[static_cast<std::size_t>(p)].first;
            const double xr = order[static_cast<std::size_t>(p + 1)].first;
            if (!(xl < xr)) continue;
            const Eigen::Index n_left = p + 1;
            const Eigen::Index n_right = n - n_left;
            if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;

            const double sse = sse_from_sums(left_sum, left_sq, static_cast<double>(n_left)) +
                               sse_from_sums(total_sum - left_sum, total_sq - left_sq,
                                             static_cast<double>(n_right));
            if (sse < best.children_sse) {
                best.found = true;
                best.feature = feature;
                best.threshold = 0.5 * (xl + xr);
                best.children_sse = sse;
            }
        }
    }
    return best;
}

} // namespace

void TreeSpec::validate() const {
    if (min_samples_leaf < 1) throw ValidationError("TreeSpec: min_samples_leaf must be >= 1");
}

TreeModel tree_fit(const TreeSpec& spec, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    spec.validate();
    if (x.rows() == 0) throw ValidationError("tree_fit: empty input");
    if (x.rows() != y.rows()) throw ValidationError("tree_fit: input and target rows must match");
    if (!x.allFinite() || !y.allFinite()) throw ValidationError("tree_fit: non-finite data");

    TreeModel model;
    model.spec = spec;
    model.n_features = x.cols();
    model.n_outputs = y.cols();

    std::vector<Eigen::Index> all_rows(static_cast<std::size_t>(x.rows()));
    std::iota(all_rows.begin(), all_rows.end(), Eigen::Index{0});

    model.nodes.emplace_back();
    std::vector<WorkItem> stack;
    stack.push_back({0, std::move(all_rows), 0});

    while (!stack.empty()) {
        WorkItem item = std::move(stack.back());
        stack.pop_back();

        const Eigen::Index n = static_cast<Eigen::Index>(item.rows.size());
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(y.cols());
        for (Eigen::Index r : item.rows) mean += y.row(r).transpose();
        mean /= static_cast<double>(n);
        model.nodes[static_cast<std::size_t>(item.node)].value = mean;

        const bool depth_capped = spec.max_depth >= 0 && item.depth >= spec.max_depth;
        if (n < 2 * spec.min_samples_leaf || depth_capped || rows_identical(y, item.rows)) {
            continue;
        }

        Eigen::VectorXd sum = Eigen::VectorXd::Zero(y.cols());
        Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(y.cols());
        for (Eigen::Index r : item.rows) {
            sum += y.row(r).transpose();
            sum_sq += y.row(r).transpose().cwiseAbs2();
        }
        const double node_sse = sse_from_sums(sum, sum_sq, static_cast<double>(n));

        const SplitChoice split = best_split(x, y, item.rows, spec.min_samples_leaf);
        if (!split.found || !(split.children_sse < node_sse)) continue;

        std::vector<Eigen::Index> left_rows, right_rows;
        left_rows.reserve(item.rows.size());
        right_rows.reserve(item.rows.size());
        for (Eigen::Index r : item.rows) {
            (x(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
        }

        const int left_index = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        const int right_index = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();

        TreeNode& node = model.nodes[static_cast<std::size_t>(item.node)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_index;
        node.right = right_index;

        stack.push_back({right_index, std::move(right_rows), item.depth + 1});
        stack.push_back({left_index, std::move(left_rows), item.depth + 1});
    }
    return model;
}

Eigen::MatrixXd tree_predict(const TreeModel& model, const Eigen::MatrixXd& x) {
    if (model.nodes.empty()) throw ValidationError("tree_predict: model is empty");
    if (x.cols() != model.n_features) {
        throw ValidationError("tree_predict: input has " + std::to_string(x.cols()) +
                              " features, expected " + std::to_string(model.n_features));
    }
    Eigen::MatrixXd out(x.rows(), model.n_outputs);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        std::size_t node = 0;
        while (!model.nodes[node].is_leaf()) {
            const TreeNode& nd = model.nodes[node];
            node = static_cast<std::size_t>(x(i, nd.feature) <= nd.threshold ? nd.left : nd.right);
        }
        out.row(i) = model.nodes[node].value.transpose();
    }
    return out;
}

int tree_depth(const TreeModel& model) {
    if (model.nodes.empty()) return 0;
    int depth = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [node, d] = stack.back();
        stack.pop_back();
        depth = std::max(depth, d);
        const TreeNode& nd = model.nodes[static_cast<std::size_t>(node)];
        if (!nd.is_leaf()) {
            stack.push_back({nd.left, d + 1});
            stack.push_back({nd.right, d + 1});
        }
    }
    return depth;
}

} // namespace wallbench
