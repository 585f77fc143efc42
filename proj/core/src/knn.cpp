#include "wallbench/knn.hpp"

#include "wallbench/error.hpp"
#include "wallbench/rng.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace wallbench {

void KnnModel::validate() const {
    const Eigen::Index n_tr = scaled_train_params.rows();
    if (n_tr == 0) throw ValidationError("KnnModel: no training conditions");
    if (train_snapshots.rows() != n_tr) {
        throw ValidationError("KnnModel: snapshot rows must match training conditions");
    }
    if (k < 1 || k > n_tr) throw ValidationError("KnnModel: k must be in [1, n_tr]");
    if (!(zero_dist_tol >= 0.0)) throw ValidationError("KnnModel: zero_dist_tol must be >= 0");
}

Eigen::VectorXd knn_predict(const KnnModel& model, const Eigen::VectorXd& p_scaled) {
    model.validate();
    if (p_scaled.size() != model.scaled_train_params.cols()) {
        throw ValidationError("knn_predict: query dimension mismatch");
    }
    const Eigen::Index n_tr = model.scaled_train_params.rows();

    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n_tr));
    for (Eigen::Index f = 0; f < n_tr; ++f) {
        const double d = (model.scaled_train_params.row(f) - p_scaled.transpose()).norm();
        if (d < model.zero_dist_tol) return model.train_snapshots.row(f);
        dist[static_cast<std::size_t>(f)] = {d, f};
    }
    const std::size_t k = static_cast<std::size_t>(model.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.train_snapshots.cols());
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double w = 1.0 / dist[i].first;
        acc += w * model.train_snapshots.row(dist[i].second).transpose();
        total += w;
    }
    return acc / total;
}

namespace {

/// relative mean absolute error of one snapshot; an identically zero truth
/// degenerates to the absolute error sum
double snapshot_rmae(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
    const double denom = truth.cwiseAbs().sum();
    const double num = (truth - pred).cwiseAbs().sum();
    return denom > 0.0 ? num / denom : num;
}

} // namespace

int knn_select_k(const Eigen::MatrixXd& scaled_params, const Eigen::MatrixXd& snapshots,
                 int k_lo, int k_hi, int removals, int repeats, std::uint64_t seed) {
    const Eigen::Index n_tr = scaled_params.rows();
    if (snapshots.rows() != n_tr) {
        throw ValidationError("knn_select_k: snapshot rows must match parameters");
    }
    if (k_lo < 1 || k_hi < k_lo) throw ValidationError("knn_select_k: malformed k range");
    if (removals < 1 || repeats < 1) {
        throw ValidationError("knn_select_k: removals and repeats must be positive");
    }
    if (n_tr <= static_cast<Eigen::Index>(k_hi) + static_cast<Eigen::Index>(removals)) {
        throw ValidationError("knn_select_k: need more than k_hi + removals training snapshots");
    }

    Rng rng(seed);
    const int n_k = k_hi - k_lo + 1;
    std::vector<double> score(static_cast<std::size_t>(n_k), 0.0);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_tr));
    for (int rep = 0; rep < repeats; ++rep) {
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        rng.shuffle(order);

        const Eigen::Index kept = n_tr - removals;
        Eigen::MatrixXd fit_params(kept, scaled_params.cols());
        Eigen::MatrixXd fit_snaps(kept, snapshots.cols());
        for (Eigen::Index i = 0; i < kept; ++i) {
            fit_params.row(i) = scaled_params.row(order[static_cast<std::size_t>(removals + i)]);
            fit_snaps.row(i) = snapshots.row(order[static_cast<std::size_t>(removals + i)]);
        }

        for (int k = k_lo; k <= k_hi; ++k) {
            KnnModel model{fit_params, fit_snaps, k, 1e-12};
            double mean_rmae = 0.0;
            for (int h = 0; h < removals; ++h) {
                const Eigen::Index row = order[static_cast<std::size_t>(h)];
                const Eigen::VectorXd pred = knn_predict(model, scaled_params.row(row).transpose());
                mean_rmae += snapshot_rmae(snapshots.row(row).transpose(), pred);
            }
            score[static_cast<std::size_t>(k - k_lo)] += mean_rmae / removals;
        }
    }

    int best_k = k_lo;
    double best_score = score[0];
    for (int k = k_lo + 1; k <= k_hi; ++k) {
        const double s = score[static_cast<std::size_t>(k - k_lo)];
        if (s < best_score) {
            best_score = s;
            best_k = k;
        }
    }
    return best_k;
}

} // namespace wallbench
