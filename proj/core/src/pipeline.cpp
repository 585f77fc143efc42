#include "wallbench/pipeline.hpp"

#include "wallbench/error.hpp"
#include "wallbench/presets.hpp"
#include "wallbench/rng.hpp"
#include "wallbench/text.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace wallbench {

namespace {

constexpr std::array<std::pair<RegressorKind, const char*>, 7> kRegressorNames{{
    {RegressorKind::mlp_pointwise, "mlp_pointwise"},
    {RegressorKind::lambda_dnn, "lambda_dnn"},
    {RegressorKind::tree, "tree"},
    {RegressorKind::mlp_global, "mlp_global"},
    {RegressorKind::knn, "knn"},
    {RegressorKind::pod_rbf, "pod_rbf"},
    {RegressorKind::isomap_rbf, "isomap_rbf"},
}};

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<int> split_ints(const std::string& text) {
    std::vector<int> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const std::string& part : split(text, ',')) {
        out.push_back(static_cast<int>(parse_int(trim(part))));
    }
    return out;
}

void put_meta(ModelFile& f, std::string key, std::string value) {
    f.meta.emplace_back(std::move(key), std::move(value));
}

void put_tensor(ModelFile& f, std::string name, Eigen::MatrixXd tensor) {
    f.tensors.emplace_back(std::move(name), std::move(tensor));
}

double meta_double(const ModelFile& f, const std::string& key) {
    return parse_double(meta_value(f, key));
}

int meta_int(const ModelFile& f, const std::string& key) {
    return static_cast<int>(parse_int(meta_value(f, key)));
}

std::uint64_t meta_u64(const ModelFile& f, const std::string& key) {
    return parse_u64(meta_value(f, key));
}

void put_scaler(ModelFile& f, const std::string& prefix, const Scaler& s) {
    put_tensor(f, prefix + "mean", s.means);
    put_tensor(f, prefix + "std", s.stds);
}

Scaler get_scaler(const ModelFile& f, const std::string& prefix) {
    Scaler s;
    s.means = tensor_value(f, prefix + "mean").col(0);
    s.stds = tensor_value(f, prefix + "std").col(0);
    return s;
}

void put_net(ModelFile& f, const std::string& prefix, const DenseNet& net) {
    put_meta(f, prefix + "depth", std::to_string(net.weights.size()));
    put_meta(f, prefix + "activation", to_string(net.activation));
    put_meta(f, prefix + "leaky_slope", format_full(net.leaky_slope));
    put_meta(f, prefix + "activate_last", net.activate_last ? "1" : "0");
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        put_tensor(f, prefix + "w" + std::to_string(l), net.weights[l]);
        put_tensor(f, prefix + "b" + std::to_string(l), net.biases[l]);
    }
}

DenseNet get_net(const ModelFile& f, const std::string& prefix) {
    DenseNet net;
    const int depth = meta_int(f, prefix + "depth");
    if (depth < 0) {
        throw ValidationError("model header: negative depth for " + prefix);
    }
    net.activation = activation_from_string(meta_value(f, prefix + "activation"));
    net.leaky_slope = meta_double(f, prefix + "leaky_slope");
    net.activate_last = meta_value(f, prefix + "activate_last") == "1";
    net.weights.reserve(static_cast<std::size_t>(depth));
    net.biases.reserve(static_cast<std::size_t>(depth));
    for (int l = 0; l < depth; ++l) {
        net.weights.push_back(tensor_value(f, prefix + "w" + std::to_string(l)));
        net.biases.push_back(tensor_value(f, prefix + "b" + std::to_string(l)).col(0));
    }
    return net;
}

/// Shared training fields of MlpSpec and LambdaDnnSpec.
template <typename Spec>
void put_training_meta(ModelFile& f, const std::string& prefix, const Spec& spec) {
    put_meta(f, prefix + "activation", to_string(spec.activation));
    put_meta(f, prefix + "leaky_slope", format_full(spec.leaky_slope));
    put_meta(f, prefix + "dropout", format_full(spec.dropout));
    put_meta(f, prefix + "l2", format_full(spec.l2));
    put_meta(f, prefix + "lr", format_full(spec.lr_schedule.initial));
    put_meta(f, prefix + "lr_decay", format_full(spec.lr_schedule.decay));
    put_meta(f, prefix + "batch_fraction", format_full(spec.batch_fraction));
    put_meta(f, prefix + "epochs", std::to_string(spec.epochs));
    put_meta(f, prefix + "seed", std::to_string(spec.seed));
}

template <typename Spec>
void get_training_meta(const ModelFile& f, const std::string& prefix, Spec& spec) {
    spec.activation = activation_from_string(meta_value(f, prefix + "activation"));
    spec.leaky_slope = meta_double(f, prefix + "leaky_slope");
    spec.dropout = meta_double(f, prefix + "dropout");
    spec.l2 = meta_double(f, prefix + "l2");
    spec.lr_schedule.initial = meta_double(f, prefix + "lr");
    spec.lr_schedule.decay = meta_double(f, prefix + "lr_decay");
    spec.batch_fraction = meta_double(f, prefix + "batch_fraction");
    spec.epochs = meta_int(f, prefix + "epochs");
    spec.seed = meta_u64(f, prefix + "seed");
}

void put_mlp_spec(ModelFile& f, const std::string& prefix, const MlpSpec& spec) {
    put_meta(f, prefix + "hidden", join_ints(spec.hidden_sizes));
    put_training_meta(f, prefix, spec);
}

MlpSpec get_mlp_spec(const ModelFile& f, const std::string& prefix) {
    MlpSpec spec;
    spec.hidden_sizes = split_ints(meta_value(f, prefix + "hidden"));
    get_training_meta(f, prefix, spec);
    return spec;
}

void put_lambda_spec(ModelFile& f, const std::string& prefix, const LambdaDnnSpec& spec) {
    put_meta(f, prefix + "geo_hidden", join_ints(spec.geo_branch));
    put_meta(f, prefix + "cond_hidden", join_ints(spec.cond_branch));
    put_meta(f, prefix + "trunk_hidden", join_ints(spec.trunk));
    put_training_meta(f, prefix, spec);
}

LambdaDnnSpec get_lambda_spec(const ModelFile& f, const std::string& prefix) {
    LambdaDnnSpec spec;
    spec.geo_branch = split_ints(meta_value(f, prefix + "geo_hidden"));
    spec.cond_branch = split_ints(meta_value(f, prefix + "cond_hidden"));
    spec.trunk = split_ints(meta_value(f, prefix + "trunk_hidden"));
    get_training_meta(f, prefix, spec);
    return spec;
}

void put_rbf(ModelFile& f, const std::string& prefix, const RbfModel& m) {
    put_meta(f, prefix + "kernel", to_string(m.kernel));
    put_meta(f, prefix + "shape", format_full(m.shape));
    put_meta(f, prefix + "reg", format_full(m.reg));
    put_tensor(f, prefix + "centers", m.centers);
    put_tensor(f, prefix + "weights", m.weights);
    put_tensor(f, prefix + "poly", m.poly_coeffs);
}

RbfModel get_rbf(const ModelFile& f, const std::string& prefix) {
    RbfModel m;
    m.kernel = rbf_kernel_from_string(meta_value(f, prefix + "kernel"));
    m.shape = meta_double(f, prefix + "shape");
    m.reg = meta_double(f, prefix + "reg");
    m.centers = tensor_value(f, prefix + "centers");
    m.weights = tensor_value(f, prefix + "weights");
    m.poly_coeffs = tensor_value(f, prefix + "poly");
    return m;
}

std::string var_prefix(int v) {
    return "v" + std::to_string(v) + "_";
}

void write_model(ModelFile& f, const PointwiseNetModel& m) {
    put_scaler(f, "x_", m.x_scaler);
    put_scaler(f, "y_", m.y_scaler);
    put_mlp_spec(f, "spec_", m.net.spec);
    put_net(f, "net_", m.net.net);
}

void write_model(ModelFile& f, const PointwiseLambdaModel& m) {
    put_scaler(f, "x_", m.x_scaler);
    put_scaler(f, "y_", m.y_scaler);
    put_lambda_spec(f, "spec_", m.net.spec);
    put_net(f, "geo_", m.net.geo);
    put_net(f, "cond_", m.net.cond);
    put_net(f, "trunk_", m.net.trunk);
}

void write_model(ModelFile& f, const PointwiseTreeModel& m) {
    put_meta(f, "spec_max_depth", std::to_string(m.tree.spec.max_depth));
    put_meta(f, "spec_min_samples_leaf", std::to_string(m.tree.spec.min_samples_leaf));
    put_meta(f, "spec_seed", std::to_string(m.tree.spec.seed));
    put_meta(f, "n_features", std::to_string(m.tree.n_features));
    put_meta(f, "n_outputs", std::to_string(m.tree.n_outputs));
    const Eigen::Index n = static_cast<Eigen::Index>(m.tree.nodes.size());
    Eigen::MatrixXd features(n, 1);
    Eigen::MatrixXd thresholds(n, 1);
    Eigen::MatrixXd left(n, 1);
    Eigen::MatrixXd right(n, 1);
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, m.tree.n_outputs);
    for (Eigen::Index i = 0; i < n; ++i) {
        const TreeNode& node = m.tree.nodes[static_cast<std::size_t>(i)];
        features(i, 0) = node.feature;
        thresholds(i, 0) = node.threshold;
        left(i, 0) = node.left;
        right(i, 0) = node.right;
        if (node.value.size() == m.tree.n_outputs) {
            values.row(i) = node.value.transpose();
        }
    }
    put_tensor(f, "features", std::move(features));
    put_tensor(f, "thresholds", std::move(thresholds));
    put_tensor(f, "left", std::move(left));
    put_tensor(f, "right", std::move(right));
    put_tensor(f, "values", std::move(values));
}

void write_model(ModelFile& f, const GlobalMlpModel& m) {
    put_scaler(f, "p_", m.p_scaler);
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        put_meta(f, prefix + "y_mean", format_full(m.vars[static_cast<std::size_t>(v)].y_mean));
        put_meta(f, prefix + "y_scale", format_full(m.vars[static_cast<std::size_t>(v)].y_scale));
        put_mlp_spec(f, prefix + "spec_", m.vars[static_cast<std::size_t>(v)].net.spec);
        put_net(f, prefix + "net_", m.vars[static_cast<std::size_t>(v)].net.net);
    }
}

void write_model(ModelFile& f, const GlobalKnnModel& m) {
    put_scaler(f, "p_", m.p_scaler);
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        const KnnModel& var = m.vars[static_cast<std::size_t>(v)];
        put_meta(f, prefix + "k", std::to_string(var.k));
        put_meta(f, prefix + "zero_dist_tol", format_full(var.zero_dist_tol));
        put_tensor(f, prefix + "params", var.scaled_train_params);
        put_tensor(f, prefix + "snaps", var.train_snapshots);
    }
}

void write_model(ModelFile& f, const GlobalPodModel& m) {
    put_scaler(f, "p_", m.p_scaler);
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        const PodVariableModel& var = m.vars[static_cast<std::size_t>(v)];
        put_meta(f, prefix + "r", std::to_string(var.r));
        put_meta(f, prefix + "threshold", format_full(var.energy_threshold));
        put_tensor(f, prefix + "mean", var.mean_field);
        put_tensor(f, prefix + "u", var.u_r);
        put_tensor(f, prefix + "sigma", var.sigma_r);
        put_rbf(f, prefix + "rbf_", var.latent);
    }
}

void write_model(ModelFile& f, const GlobalIsomapModel& m) {
    put_scaler(f, "p_", m.p_scaler);
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        const IsomapVariableModel& var = m.vars[static_cast<std::size_t>(v)];
        put_meta(f, prefix + "r", std::to_string(var.r));
        put_meta(f, prefix + "k_graph", std::to_string(var.k_graph));
        put_meta(f, prefix + "k_back", std::to_string(var.k_back));
        put_meta(f, prefix + "zero_dist_tol", format_full(var.zero_dist_tol));
        put_tensor(f, prefix + "embedding", var.train_embedding);
        put_tensor(f, prefix + "snaps", var.train_snapshots);
        put_tensor(f, prefix + "geodesics", var.geodesics);
        put_rbf(f, prefix + "rbf_", var.forward_map);
    }
}

PointwiseNetModel load_pointwise_net(const ModelFile& f) {
    PointwiseNetModel m;
    m.x_scaler = get_scaler(f, "x_");
    m.y_scaler = get_scaler(f, "y_");
    m.net.spec = get_mlp_spec(f, "spec_");
    m.net.net = get_net(f, "net_");
    return m;
}

PointwiseLambdaModel load_pointwise_lambda(const ModelFile& f) {
    PointwiseLambdaModel m;
    m.x_scaler = get_scaler(f, "x_");
    m.y_scaler = get_scaler(f, "y_");
    m.net.spec = get_lambda_spec(f, "spec_");
    m.net.geo = get_net(f, "geo_");
    m.net.cond = get_net(f, "cond_");
    m.net.trunk = get_net(f, "trunk_");
    return m;
}

PointwiseTreeModel load_pointwise_tree(const ModelFile& f) {
    PointwiseTreeModel m;
    m.tree.spec.max_depth = meta_int(f, "spec_max_depth");
    m.tree.spec.min_samples_leaf = meta_int(f, "spec_min_samples_leaf");
    m.tree.spec.seed = meta_u64(f, "spec_seed");
    m.tree.n_features = meta_int(f, "n_features");
    m.tree.n_outputs = meta_int(f, "n_outputs");
    const Eigen::MatrixXd& features = tensor_value(f, "features");
    const Eigen::MatrixXd& thresholds = tensor_value(f, "thresholds");
    const Eigen::MatrixXd& left = tensor_value(f, "left");
    const Eigen::MatrixXd& right = tensor_value(f, "right");
    const Eigen::MatrixXd& values = tensor_value(f, "values");
    const Eigen::Index n = features.rows();
    if (thresholds.rows() != n || left.rows() != n || right.rows() != n || values.rows() != n) {
        throw ValidationError("model header: tree node tensors disagree on node count");
    }
    m.tree.nodes.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        TreeNode& node = m.tree.nodes[static_cast<std::size_t>(i)];
        node.feature = static_cast<int>(features(i, 0));
        node.threshold = thresholds(i, 0);
        node.left = static_cast<int>(left(i, 0));
        node.right = static_cast<int>(right(i, 0));
        node.value = values.row(i).transpose();
    }
    return m;
}

GlobalMlpModel load_global_mlp(const ModelFile& f) {
    GlobalMlpModel m;
    m.p_scaler = get_scaler(f, "p_");
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        GlobalMlpVariableModel& var = m.vars[static_cast<std::size_t>(v)];
        var.y_mean = meta_double(f, prefix + "y_mean");
        var.y_scale = meta_double(f, prefix + "y_scale");
        var.net.spec = get_mlp_spec(f, prefix + "spec_");
        var.net.net = get_net(f, prefix + "net_");
    }
    return m;
}

GlobalKnnModel load_global_knn(const ModelFile& f) {
    GlobalKnnModel m;
    m.p_scaler = get_scaler(f, "p_");
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        KnnModel& var = m.vars[static_cast<std::size_t>(v)];
        var.k = meta_int(f, prefix + "k");
        var.zero_dist_tol = meta_double(f, prefix + "zero_dist_tol");
        var.scaled_train_params = tensor_value(f, prefix + "params");
        var.train_snapshots = tensor_value(f, prefix + "snaps");
        var.validate();
    }
    return m;
}

GlobalPodModel load_global_pod(const ModelFile& f) {
    GlobalPodModel m;
    m.p_scaler = get_scaler(f, "p_");
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        PodVariableModel& var = m.vars[static_cast<std::size_t>(v)];
        var.r = meta_int(f, prefix + "r");
        var.energy_threshold = meta_double(f, prefix + "threshold");
        var.mean_field = tensor_value(f, prefix + "mean").col(0);
        var.u_r = tensor_value(f, prefix + "u");
        var.sigma_r = tensor_value(f, prefix + "sigma").col(0);
        var.latent = get_rbf(f, prefix + "rbf_");
    }
    return m;
}

GlobalIsomapModel load_global_isomap(const ModelFile& f) {
    GlobalIsomapModel m;
    m.p_scaler = get_scaler(f, "p_");
    for (int v = 0; v < 4; ++v) {
        const std::string prefix = var_prefix(v);
        IsomapVariableModel& var = m.vars[static_cast<std::size_t>(v)];
        var.r = meta_int(f, prefix + "r");
        var.k_graph = meta_int(f, prefix + "k_graph");
        var.k_back = meta_int(f, prefix + "k_back");
        var.zero_dist_tol = meta_double(f, prefix + "zero_dist_tol");
        var.train_embedding = tensor_value(f, prefix + "embedding");
        var.train_snapshots = tensor_value(f, prefix + "snaps");
        var.geodesics = tensor_value(f, prefix + "geodesics");
        var.forward_map = get_rbf(f, prefix + "rbf_");
    }
    return m;
}

/// One snapshot matrix (flows x wall points) for output column v.
Eigen::MatrixXd variable_snapshots(const GlobalTensors& g, int v) {
    const Eigen::Index n_p = g.y_g.empty() ? 0 : g.y_g.front().rows();
    Eigen::MatrixXd snaps(static_cast<Eigen::Index>(g.y_g.size()), n_p);
    for (std::size_t i = 0; i < g.y_g.size(); ++i) {
        snaps.row(static_cast<Eigen::Index>(i)) = g.y_g[i].col(v).transpose();
    }
    return snaps;
}

/// Same column layout as assemble_pointwise, truth-free.
Eigen::MatrixXd pointwise_inputs(const SurfaceGeometry& geo, const FlowCondition& c) {
    const Eigen::Index n_p = geo.n_p();
    Eigen::MatrixXd x(n_p, 9);
    x.leftCols(3) = geo.coords;
    x.middleCols(3, 3) = geo.normals;
    x.col(6).setConstant(c.mach);
    x.col(7).setConstant(c.aoa_deg);
    x.col(8).setConstant(c.p_i);
    return x;
}

Eigen::VectorXd scaled_condition(const Scaler& s, const FlowCondition& c) {
    Eigen::MatrixXd p(1, 3);
    p << c.mach, c.aoa_deg, c.p_i;
    return s.apply(p).row(0).transpose();
}

template <typename PerVariable>
Eigen::MatrixXd assemble_field(const SurfaceGeometry& geo, PerVariable&& predict_one) {
    Eigen::MatrixXd out(geo.n_p(), 4);
    for (int v = 0; v < 4; ++v) {
        const Eigen::VectorXd column = predict_one(v);
        if (column.size() != out.rows()) {
            throw ValidationError(
                "predict_submission: predicted wall size does not match the dataset geometry");
        }
        out.col(v) = column;
    }
    return out;
}

Eigen::MatrixXd predict_field(const SurfaceGeometry& geo, const FlowCondition& c,
                              const PointwiseNetModel& m) {
    const Eigen::MatrixXd x = m.x_scaler.apply(pointwise_inputs(geo, c));
    return m.y_scaler.invert(mlp_predict(m.net, x));
}

Eigen::MatrixXd predict_field(const SurfaceGeometry& geo, const FlowCondition& c,
                              const PointwiseLambdaModel& m) {
    const Eigen::MatrixXd x = m.x_scaler.apply(pointwise_inputs(geo, c));
    return m.y_scaler.invert(lambda_dnn_predict(m.net, x));
}

Eigen::MatrixXd predict_field(const SurfaceGeometry& geo, const FlowCondition& c,
                              const PointwiseTreeModel& m) {
    return tree_predict(m.tree, pointwise_inputs(geo, c));
}

Eigen::MatrixXd predict_field(const SurfaceGeometry& geo, const FlowCondition& c,
                              const GlobalMlpModel& m) {
    const Eigen::VectorXd p = scaled_condition(m.p_scaler, c);
    return assemble_field(geo, [&](int v) {
        return global_mlp_predict(m.vars[static_cast<std::size_t>(v)], p);
    });
}

Eigen::MatrixXd predict_field(const SurfaceGeometry& geo, const FlowCondition& c,
                              const GlobalKnnModel& m) {
    const Eigen::VectorXd p = scaled_condition(m.p_scaler, c);
    return assemble_field(
        geo, [&](int v) { return knn_predict(m.vars[static_cast<std::size_t>(v)], p); });
}

Eigen::MatrixXd predict_field(const SurfaceGeometry& geo, const FlowCondition& c,
                              const GlobalPodModel& m) {
    const Eigen::VectorXd p = scaled_condition(m.p_scaler, c);
    return assemble_field(
        geo, [&](int v) { return pod_predict(m.vars[static_cast<std::size_t>(v)], p); });
}

Eigen::MatrixXd predict_field(const SurfaceGeometry& geo, const FlowCondition& c,
                              const GlobalIsomapModel& m) {
    const Eigen::VectorXd p = scaled_condition(m.p_scaler, c);
    return assemble_field(
        geo, [&](int v) { return isomap_predict(m.vars[static_cast<std::size_t>(v)], p); });
}

/// Training fields shared by the [mlp], [lambda], [global_mlp] sections.
template <typename Spec>
void read_training_fields(const RunConfig& cfg, const std::string& section, Spec& spec) {
    const std::string act = cfg.get_string(section, "activation", to_string(spec.activation));
    try {
        spec.activation = activation_from_string(act);
    } catch (const Error& e) {
        throw ConfigError(section + ".activation: " + e.what());
    }
    spec.leaky_slope = cfg.get_double(section, "leaky_slope", spec.leaky_slope);
    spec.dropout = cfg.get_double(section, "dropout", spec.dropout);
    spec.l2 = cfg.get_double(section, "l2", spec.l2);
    spec.lr_schedule.initial = cfg.get_double(section, "lr", spec.lr_schedule.initial);
    spec.lr_schedule.decay = cfg.get_double(section, "lr_decay", spec.lr_schedule.decay);
    spec.batch_fraction = cfg.get_double(section, "batch_fraction", spec.batch_fraction);
    spec.epochs = static_cast<int>(cfg.get_int(section, "epochs", spec.epochs));
}

} // namespace

std::string to_string(RegressorKind kind) {
    for (const auto& [k, name] : kRegressorNames) {
        if (k == kind) {
            return name;
        }
    }
    throw ValidationError("to_string: unknown regressor kind");
}

RegressorKind regressor_from_string(const std::string& name) {
    std::string valid;
    for (const auto& [kind, known] : kRegressorNames) {
        if (name == known) {
            return kind;
        }
        if (!valid.empty()) {
            valid += ", ";
        }
        valid += known;
    }
    throw ConfigError("unknown regressor '" + name + "' (valid: " + valid + ")");
}

TrainOptions train_options_from_config(const RunConfig& cfg) {
    TrainOptions opts;
    opts.pointwise.hidden_sizes = default_pointwise_hidden();
    opts.pointwise.epochs = 20;
    opts.lambda.geo_branch = default_lambda_geo_hidden();
    opts.lambda.cond_branch = default_lambda_cond_hidden();
    opts.lambda.trunk = default_lambda_trunk_hidden();
    opts.lambda.epochs = 20;
    opts.global_net.hidden_sizes = default_global_hidden();
    opts.global_net.epochs = 400;
    opts.global_net.batch_fraction = 0.05;
    opts.global_net.lr_schedule = {3e-3, 0.995};

    opts.kind = regressor_from_string(cfg.get_string("run", "regressor", to_string(opts.kind)));
    opts.seed = cfg.get_u64("run", "seed", opts.seed);
    opts.inner_fraction = cfg.get_double("train", "inner_fraction", opts.inner_fraction);

    opts.pointwise.hidden_sizes = cfg.get_int_list("mlp", "hidden", opts.pointwise.hidden_sizes);
    read_training_fields(cfg, "mlp", opts.pointwise);

    opts.lambda.geo_branch = cfg.get_int_list("lambda", "geo_hidden", opts.lambda.geo_branch);
    opts.lambda.cond_branch = cfg.get_int_list("lambda", "cond_hidden", opts.lambda.cond_branch);
    opts.lambda.trunk = cfg.get_int_list("lambda", "trunk_hidden", opts.lambda.trunk);
    read_training_fields(cfg, "lambda", opts.lambda);

    opts.tree.max_depth = static_cast<int>(cfg.get_int("tree", "max_depth", opts.tree.max_depth));
    opts.tree.min_samples_leaf =
        static_cast<int>(cfg.get_int("tree", "min_samples_leaf", opts.tree.min_samples_leaf));

    opts.global_net.hidden_sizes =
        cfg.get_int_list("global_mlp", "hidden", opts.global_net.hidden_sizes);
    read_training_fields(cfg, "global_mlp", opts.global_net);

    opts.knn_k = static_cast<int>(cfg.get_int("knn", "k", opts.knn_k));
    opts.pod_threshold = cfg.get_double("pod", "threshold", opts.pod_threshold);
    opts.isomap_r = static_cast<int>(cfg.get_int("isomap", "r", opts.isomap_r));
    opts.isomap_k_graph = static_cast<int>(cfg.get_int("isomap", "k_graph", opts.isomap_k_graph));
    opts.isomap_k_back = static_cast<int>(cfg.get_int("isomap", "k_back", opts.isomap_k_back));

    const std::string kernel = cfg.get_string("rbf", "kernel", to_string(opts.rbf_kernel));
    try {
        opts.rbf_kernel = rbf_kernel_from_string(kernel);
    } catch (const Error& e) {
        throw ConfigError(std::string("rbf.kernel: ") + e.what());
    }
    opts.rbf_reg = cfg.get_double("rbf", "reg", opts.rbf_reg);
    return opts;
}

std::vector<std::string> train_config_keys() {
    std::vector<std::string> keys = {
        "run.regressor", "run.seed",           "train.inner_fraction",
        "tree.max_depth", "tree.min_samples_leaf", "knn.k",
        "pod.threshold",  "isomap.r",          "isomap.k_graph",
        "isomap.k_back",  "rbf.kernel",        "rbf.reg",
        "mlp.hidden",     "global_mlp.hidden", "lambda.geo_hidden",
        "lambda.cond_hidden", "lambda.trunk_hidden",
    };
    for (const char* section : {"mlp", "lambda", "global_mlp"}) {
        for (const char* key : {"activation", "leaky_slope", "dropout", "l2", "lr", "lr_decay",
                                "batch_fraction", "epochs"}) {
            keys.push_back(std::string(section) + "." + key);
        }
    }
    return keys;
}

RegressorKind kind_of(const TrainedRegressor& model) {
    struct Visitor {
        RegressorKind operator()(const PointwiseNetModel&) const {
            return RegressorKind::mlp_pointwise;
        }
        RegressorKind operator()(const PointwiseLambdaModel&) const {
            return RegressorKind::lambda_dnn;
        }
        RegressorKind operator()(const PointwiseTreeModel&) const { return RegressorKind::tree; }
        RegressorKind operator()(const GlobalMlpModel&) const { return RegressorKind::mlp_global; }
        RegressorKind operator()(const GlobalKnnModel&) const { return RegressorKind::knn; }
        RegressorKind operator()(const GlobalPodModel&) const { return RegressorKind::pod_rbf; }
        RegressorKind operator()(const GlobalIsomapModel&) const {
            return RegressorKind::isomap_rbf;
        }
    };
    return std::visit(Visitor{}, model);
}

TrainedRegressor train_regressor(const Dataset& ds, const TrainOptions& opts) {
    const std::vector<std::string> train_ids = ds.train_ids();
    if (train_ids.size() < 2) {
        throw ValidationError("train_regressor: need at least two train flows");
    }
    for (const std::string& id : train_ids) {
        if (!ds.has_field(id)) {
            throw ValidationError("train_regressor: train flow " + id + " has no field data");
        }
    }

    auto [fit_ids, val_ids] = inner_split(train_ids, opts.inner_fraction, derive_seed(opts.seed, 1));
    if (fit_ids.empty()) {
        throw ValidationError("train_regressor: inner split left no fit flows");
    }
    if (val_ids.empty()) {
        val_ids = fit_ids; ///< tiny sets validate on the fit flows
    }

    switch (opts.kind) {
    case RegressorKind::mlp_pointwise: {
        const PointwiseTensors fit = assemble_pointwise(ds, fit_ids);
        const PointwiseTensors val = assemble_pointwise(ds, val_ids);
        PointwiseNetModel m;
        m.x_scaler = fit_scaler(fit.x);
        m.y_scaler = fit_scaler(fit.y);
        MlpSpec spec = opts.pointwise;
        spec.seed = derive_seed(opts.seed, 10);
        m.net = mlp_train(spec, m.x_scaler.apply(fit.x), m.y_scaler.apply(fit.y),
                          m.x_scaler.apply(val.x), m.y_scaler.apply(val.y));
        return m;
    }
    case RegressorKind::lambda_dnn: {
        const PointwiseTensors fit = assemble_pointwise(ds, fit_ids);
        const PointwiseTensors val = assemble_pointwise(ds, val_ids);
        PointwiseLambdaModel m;
        m.x_scaler = fit_scaler(fit.x);
        m.y_scaler = fit_scaler(fit.y);
        LambdaDnnSpec spec = opts.lambda;
        spec.seed = derive_seed(opts.seed, 20);
        m.net = lambda_dnn_train(spec, m.x_scaler.apply(fit.x), m.y_scaler.apply(fit.y),
                                 m.x_scaler.apply(val.x), m.y_scaler.apply(val.y));
        return m;
    }
    case RegressorKind::tree: {
        const PointwiseTensors fit = assemble_pointwise(ds, fit_ids);
        PointwiseTreeModel m;
        m.tree = tree_fit(opts.tree, fit.x, fit.y);
        return m;
    }
    case RegressorKind::mlp_global: {
        const GlobalTensors fit = assemble_global(ds, fit_ids);
        const GlobalTensors val = assemble_global(ds, val_ids);
        GlobalMlpModel m;
        m.p_scaler = fit_scaler(fit.x_g);
        const Eigen::MatrixXd xs_fit = m.p_scaler.apply(fit.x_g);
        const Eigen::MatrixXd xs_val = m.p_scaler.apply(val.x_g);
        for (int v = 0; v < 4; ++v) {
            MlpSpec spec = opts.global_net;
            spec.seed = derive_seed(opts.seed, 40 + static_cast<std::uint64_t>(v));
            m.vars[static_cast<std::size_t>(v)] = global_mlp_train(
                spec, xs_fit, variable_snapshots(fit, v), xs_val, variable_snapshots(val, v));
        }
        return m;
    }
    case RegressorKind::knn: {
        const GlobalTensors fit = assemble_global(ds, fit_ids);
        GlobalKnnModel m;
        m.p_scaler = fit_scaler(fit.x_g);
        const Eigen::MatrixXd xs = m.p_scaler.apply(fit.x_g);
        for (int v = 0; v < 4; ++v) {
            KnnModel& var = m.vars[static_cast<std::size_t>(v)];
            var.scaled_train_params = xs;
            var.train_snapshots = variable_snapshots(fit, v);
            var.k = opts.knn_k;
            var.validate();
        }
        return m;
    }
    case RegressorKind::pod_rbf: {
        const GlobalTensors fit = assemble_global(ds, fit_ids);
        GlobalPodModel m;
        m.p_scaler = fit_scaler(fit.x_g);
        const Eigen::MatrixXd xs = m.p_scaler.apply(fit.x_g);
        for (int v = 0; v < 4; ++v) {
            m.vars[static_cast<std::size_t>(v)] = pod_fit(
                xs, variable_snapshots(fit, v), opts.pod_threshold, opts.rbf_kernel, opts.rbf_reg);
        }
        return m;
    }
    case RegressorKind::isomap_rbf: {
        const GlobalTensors fit = assemble_global(ds, fit_ids);
        GlobalIsomapModel m;
        m.p_scaler = fit_scaler(fit.x_g);
        const Eigen::MatrixXd xs = m.p_scaler.apply(fit.x_g);
        for (int v = 0; v < 4; ++v) {
            m.vars[static_cast<std::size_t>(v)] =
                isomap_fit(xs, variable_snapshots(fit, v), opts.isomap_r, opts.isomap_k_graph,
                           opts.isomap_k_back, opts.rbf_kernel, opts.rbf_reg);
        }
        return m;
    }
    }
    throw ValidationError("train_regressor: unknown regressor kind");
}

std::map<std::string, WallField> predict_submission(const Dataset& ds,
                                                    const TrainedRegressor& model) {
    const std::vector<std::string> test_ids = ds.test_ids();
    if (test_ids.empty()) {
        throw ValidationError("predict_submission: dataset has no test flows");
    }
    std::map<std::string, WallField> out;
    for (const std::string& id : test_ids) {
        const FlowCondition& c = ds.condition(id);
        WallField field;
        field.condition_id = id;
        field.values =
            std::visit([&](const auto& m) { return predict_field(ds.geometry, c, m); }, model);
        out.emplace(id, std::move(field));
    }
    return out;
}

ModelFile to_model_file(const TrainedRegressor& model) {
    ModelFile f;
    f.kind = to_string(kind_of(model));
    std::visit([&f](const auto& m) { write_model(f, m); }, model);
    return f;
}

TrainedRegressor from_model_file(const ModelFile& file) {
    switch (regressor_from_string(file.kind)) {
    case RegressorKind::mlp_pointwise:
        return load_pointwise_net(file);
    case RegressorKind::lambda_dnn:
        return load_pointwise_lambda(file);
    case RegressorKind::tree:
        return load_pointwise_tree(file);
    case RegressorKind::mlp_global:
        return load_global_mlp(file);
    case RegressorKind::knn:
        return load_global_knn(file);
    case RegressorKind::pod_rbf:
        return load_global_pod(file);
    case RegressorKind::isomap_rbf:
        return load_global_isomap(file);
    }
    throw ValidationError("from_model_file: unknown regressor kind");
}

} // namespace wallbench
