#include "wallbench/tune.hpp"

#include "wallbench/error.hpp"
#include "wallbench/rng.hpp"

#include <cmath>
#include <limits>

namespace wallbench {

namespace {

/// total R^2 over all entries with per-column means as the baseline
double validation_r2(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& pred) {
    const Eigen::RowVectorXd col_means = truth.colwise().mean();
    const double ss_res = (truth - pred).squaredNorm();
    const double ss_tot = (truth.rowwise() - col_means).squaredNorm();
    if (!(ss_tot > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 - ss_res / ss_tot;
}

} // namespace

void MlpTuneSpace::validate() const {
    if (hidden_options.empty() || lr_options.empty() || dropout_options.empty() ||
        l2_options.empty() || epoch_options.empty()) {
        throw ValidationError("MlpTuneSpace: every option list must be nonempty");
    }
}

TuneResult random_search_tune(const MlpTuneSpace& space, int budget, std::uint64_t seed,
                              const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                              const Eigen::MatrixXd& x_val, const Eigen::MatrixXd& y_val) {
    space.validate();
    if (budget < 1) throw ValidationError("random_search_tune: budget must be at least 1");

    TuneResult result;
    result.best_val_r2 = -std::numeric_limits<double>::infinity();
    bool any_success = false;

    for (int trial = 0; trial < budget; ++trial) {
        const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
        Rng rng(trial_seed);

        TuneTrial record;
        record.spec.hidden_sizes = space.hidden_options[rng.index(space.hidden_options.size())];
        record.spec.lr_schedule.initial = space.lr_options[rng.index(space.lr_options.size())];
        record.spec.dropout = space.dropout_options[rng.index(space.dropout_options.size())];
        record.spec.l2 = space.l2_options[rng.index(space.l2_options.size())];
        record.spec.epochs = space.epoch_options[rng.index(space.epoch_options.size())];
        record.spec.activation = space.activation;
        record.spec.leaky_slope = space.leaky_slope;
        record.spec.lr_schedule.decay = space.lr_decay;
        record.spec.batch_fraction = space.batch_fraction;
        record.spec.seed = trial_seed;

        try {
            const MlpModel model = mlp_train(record.spec, x, y, x_val, y_val);
            record.val_r2 = validation_r2(y_val, mlp_predict(model, x_val));
            record.failed = !std::isfinite(record.val_r2);
        } catch (const TrainingError&) {
            record.failed = true;
            record.val_r2 = std::numeric_limits<double>::quiet_NaN();
        }

        if (!record.failed && record.val_r2 > result.best_val_r2) {
            result.best_val_r2 = record.val_r2;
            result.best_spec = record.spec;
            any_success = true;
        }
        result.trials.push_back(std::move(record));
    }

    if (!any_success) {
        throw TrainingError("random_search_tune: every trial failed or scored NaN");
    }
    return result;
}

} // namespace wallbench
