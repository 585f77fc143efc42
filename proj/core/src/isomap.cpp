#include "wallbench/isomap.hpp"

#include "wallbench/error.hpp"
#include "wallbench/graph.hpp"
#include "wallbench/linalg.hpp"
#include "wallbench/text.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace wallbench {

namespace {

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& x) {
    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = sq.replicate(1, x.rows()) + sq.transpose().replicate(x.rows(), 1) -
                         2.0 * x * x.transpose();
    return d2.cwiseMax(0.0).cwiseSqrt();
}

/// spectrum of the double-centered squared-distance matrix
EigResult mds_spectrum(const Eigen::MatrixXd& d) {
    const Eigen::Index n = d.rows();
    if (n < 2 || d.cols() != n) {
        throw ValidationError("classical_mds: need a square distance matrix");
    }
    Eigen::MatrixXd b = d.cwiseProduct(d);
    const Eigen::VectorXd row_mean = b.rowwise().mean();
    const double grand_mean = b.mean();
    b.colwise() -= row_mean;
    b.rowwise() -= row_mean.transpose();
    b = -0.5 * (b.array() + grand_mean).matrix();
    // centering leaves fp-level asymmetry; fold it before the solver
    return sym_eig(0.5 * (b + b.transpose()));
}

Eigen::Index count_positive(const Eigen::VectorXd& values) {
    // eigenvalues within fp noise of zero would inject sqrt-scale coordinates
    const double floor = 1e-12 * std::max(values.size() > 0 ? values(0) : 0.0, 0.0);
    Eigen::Index n = 0;
    while (n < values.size() && values(n) > floor) ++n;
    return n;
}

Eigen::MatrixXd embed(const EigResult& eig, Eigen::Index r) {
    return eig.vectors.leftCols(r) * eig.values.head(r).cwiseSqrt().asDiagonal();
}

} // namespace

MdsResult classical_mds(const Eigen::MatrixXd& d, int r) {
    if (r < 1 || r > d.rows()) throw ValidationError("classical_mds: rank out of range");
    const EigResult eig = mds_spectrum(d);
    const Eigen::Index positive = count_positive(eig.values);
    if (positive < r) {
        std::string msg = "classical_mds: only " + std::to_string(positive) +
                          " positive eigenvalues for rank " + std::to_string(r) + " (spectrum:";
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(eig.values.size(), 6); ++i) {
            msg += " " + format_double(eig.values(i), 6);
        }
        throw DomainError(msg + ")");
    }

    MdsResult result;
    result.eigenvalues = eig.values;
    result.embedding = embed(eig, r);
    return result;
}

IsomapVariableModel isomap_fit(const Eigen::MatrixXd& scaled_params,
                               const Eigen::MatrixXd& snapshots, int r, int k_graph, int k_back,
                               RbfKernel kernel, double reg) {
    const Eigen::Index n_tr = snapshots.rows();
    if (n_tr < 2) throw ValidationError("isomap_fit: need at least two snapshots");
    if (scaled_params.rows() != n_tr) {
        throw ValidationError("isomap_fit: parameter rows must match snapshots");
    }
    if (k_back < 1 || k_back > n_tr) throw ValidationError("isomap_fit: k_back out of range");

    IsomapVariableModel model;
    model.k_graph = k_graph;
    model.k_back = k_back;
    model.r = r;
    model.train_snapshots = snapshots;
    model.geodesics = geodesic_distances(knn_graph(snapshots, k_graph));
    model.train_embedding = classical_mds(model.geodesics, r).embedding;
    model.forward_map = rbf_fit_auto(scaled_params, model.train_embedding, kernel, {}, reg);
    return model;
}

std::vector<std::pair<int, double>> isomap_dim_scan(const Eigen::MatrixXd& geodesics, int r_max) {
    if (r_max < 1) throw ValidationError("isomap_dim_scan: r_max must be positive");
    const EigResult eig = mds_spectrum(geodesics);
    const Eigen::Index top = std::min<Eigen::Index>(r_max, count_positive(eig.values));

    std::vector<std::pair<int, double>> scan;
    scan.reserve(static_cast<std::size_t>(top));
    for (Eigen::Index rr = 1; rr <= top; ++rr) {
        const Eigen::MatrixXd dz = pairwise_distances(embed(eig, rr));
        scan.emplace_back(static_cast<int>(rr), (geodesics - dz).norm());
    }
    return scan;
}

Eigen::VectorXd isomap_predict(const IsomapVariableModel& model, const Eigen::VectorXd& p_scaled) {
    if (model.r < 1 || model.train_embedding.rows() == 0) {
        throw ValidationError("isomap_predict: model is not fitted");
    }
    const Eigen::MatrixXd z = rbf_predict(model.forward_map, p_scaled.transpose());
    const Eigen::Index n_tr = model.train_embedding.rows();

    std::vector<std::pair<double, Eigen::Index>> order;
    order.reserve(static_cast<std::size_t>(n_tr));
    for (Eigen::Index f = 0; f < n_tr; ++f) {
        const double dist = (model.train_embedding.row(f) - z.row(0)).norm();
        if (dist < model.zero_dist_tol) return model.train_snapshots.row(f);
        order.emplace_back(dist, f);
    }

    const auto k = static_cast<std::ptrdiff_t>(std::min<Eigen::Index>(model.k_back, n_tr));
    std::partial_sort(order.begin(), order.begin() + k, order.end());

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.train_snapshots.cols());
    double total = 0.0;
    for (std::ptrdiff_t i = 0; i < k; ++i) {
        const double w = 1.0 / order[static_cast<std::size_t>(i)].first;
        acc += w * model.train_snapshots.row(order[static_cast<std::size_t>(i)].second).transpose();
        total += w;
    }
    return acc / total;
}

} // namespace wallbench
