#include "wallbench/pod.hpp"

#include "wallbench/error.hpp"
#include "wallbench/linalg.hpp"

namespace wallbench {

int pod_rank(const Eigen::VectorXd& sigma, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw ValidationError("pod_rank: threshold must lie in (0, 1]");
    }
    if (sigma.size() == 0) throw ValidationError("pod_rank: empty spectrum");
    if (threshold == 1.0) return static_cast<int>(sigma.size());

    const double total = sigma.sum();
    double retained = 0.0;
    for (Eigen::Index r = 0; r < sigma.size(); ++r) {
        retained += sigma(r);
        if (retained >= threshold * total) return static_cast<int>(r + 1);
    }
    return static_cast<int>(sigma.size());
}

PodVariableModel pod_fit(const Eigen::MatrixXd& scaled_params, const Eigen::MatrixXd& snapshots,
                         double threshold, RbfKernel kernel, double reg) {
    const Eigen::Index n_tr = snapshots.rows();
    if (n_tr < 2) throw ValidationError("pod_fit: need at least two snapshots");
    if (scaled_params.rows() != n_tr) {
        throw ValidationError("pod_fit: parameter rows must match snapshots");
    }

    PodVariableModel model;
    model.energy_threshold = threshold;
    model.mean_field = snapshots.colwise().mean();

    // columns of the decomposed matrix are centered snapshots
    const Eigen::MatrixXd centered =
        (snapshots.rowwise() - model.mean_field.transpose()).transpose();
    const SvdResult dec = svd(centered);

    model.r = pod_rank(dec.sigma, threshold);
    model.u_r = dec.u.leftCols(model.r);
    model.sigma_r = dec.sigma.head(model.r);

    // latent training targets: row f holds the f-th entries of the retained
    // right singular vectors, regressed raw and rescaled at prediction time
    const Eigen::MatrixXd latent_targets = dec.vt.topRows(model.r).transpose();
    model.latent = rbf_fit_auto(scaled_params, latent_targets, kernel, {}, reg);
    return model;
}

Eigen::VectorXd pod_predict(const PodVariableModel& model, const Eigen::VectorXd& p_scaled) {
    if (model.r < 1) throw ValidationError("pod_predict: model is not fitted");
    const Eigen::MatrixXd z = rbf_predict(model.latent, p_scaled.transpose());
    return model.mean_field + model.u_r * model.sigma_r.cwiseProduct(z.row(0).transpose());
}

} // namespace wallbench
