#pragma once

#include "wallbench/config.hpp"
#include "wallbench/dataset.hpp"
#include "wallbench/global_mlp.hpp"
#include "wallbench/isomap.hpp"
#include "wallbench/knn.hpp"
#include "wallbench/lambda_dnn.hpp"
#include "wallbench/mlp.hpp"
#include "wallbench/model_io.hpp"
#include "wallbench/pod.hpp"
#include "wallbench/tree.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace wallbench {

enum class RegressorKind {
    mlp_pointwise,
    lambda_dnn,
    tree,
    mlp_global,
    knn,
    pod_rbf,
    isomap_rbf,
};

std::string to_string(RegressorKind kind);
/// Unknown names raise ConfigError listing the valid ones.
RegressorKind regressor_from_string(const std::string& name);

/// Everything the train command needs; populated from the config with
/// desk-scale defaults, flags already folded in.
struct TrainOptions {
    RegressorKind kind = RegressorKind::knn;
    std::uint64_t seed = 0;
    double inner_fraction = 0.75; ///< share of train flows used for fitting
    MlpSpec pointwise;
    LambdaDnnSpec lambda;
    TreeSpec tree;
    MlpSpec global_net;
    int knn_k = 5;
    double pod_threshold = 0.99;
    int isomap_r = 3;
    int isomap_k_graph = 10;
    int isomap_k_back = 7;
    RbfKernel rbf_kernel = RbfKernel::multiquadric;
    double rbf_reg = 1e-8;
};

/// Reads [train], [mlp], [lambda], [tree], [global_mlp], [knn], [pod],
/// [isomap], [rbf]; `kind` and `seed` come from [run].
TrainOptions train_options_from_config(const RunConfig& cfg);
/// The section.key names train_options_from_config understands.
std::vector<std::string> train_config_keys();

struct PointwiseNetModel {
    Scaler x_scaler;
    Scaler y_scaler;
    MlpModel net;
};

struct PointwiseLambdaModel {
    Scaler x_scaler;
    Scaler y_scaler;
    LambdaDnnModel net;
};

struct PointwiseTreeModel {
    TreeModel tree;
};

struct GlobalMlpModel {
    Scaler p_scaler;
    std::array<GlobalMlpVariableModel, 4> vars;
};

struct GlobalKnnModel {
    Scaler p_scaler;
    std::array<KnnModel, 4> vars;
};

struct GlobalPodModel {
    Scaler p_scaler;
    std::array<PodVariableModel, 4> vars;
};

struct GlobalIsomapModel {
    Scaler p_scaler;
    std::array<IsomapVariableModel, 4> vars;
};

using TrainedRegressor = std::variant<PointwiseNetModel, PointwiseLambdaModel, PointwiseTreeModel,
                                      GlobalMlpModel, GlobalKnnModel, GlobalPodModel,
                                      GlobalIsomapModel>;

RegressorKind kind_of(const TrainedRegressor& model);

/// Fits on the inner 75% of the train flows; the remaining quarter serves as
/// the validation set for the network regressors.
TrainedRegressor train_regressor(const Dataset& ds, const TrainOptions& opts);

/// One predicted WallField per test condition.
std::map<std::string, WallField> predict_submission(const Dataset& ds,
                                                    const TrainedRegressor& model);

ModelFile to_model_file(const TrainedRegressor& model);
TrainedRegressor from_model_file(const ModelFile& file);

} // namespace wallbench
