#include "wallbench/lambda_dnn.hpp"

#include "wallbench/error.hpp"

#include "net_train.hpp"

namespace wallbench {

namespace {

constexpr Eigen::Index kGeoInputs = 6;
constexpr Eigen::Index kCondInputs = 3;

detail::BranchedNet adapter_for(LambdaDnnModel& model) {
    return detail::BranchedNet{&model.geo, &model.cond, &model.trunk, {}, {}, {}};
}

std::vector<Eigen::Index> branch_widths(Eigen::Index input, const std::vector<int>& hidden) {
    std::vector<Eigen::Index> widths{input};
    for (int w : hidden) widths.push_back(w);
    return widths;
}

} // namespace

void LambdaDnnSpec::validate() const {
    if (geo_branch.empty() || cond_branch.empty()) {
        throw ValidationError("LambdaDnnSpec: both branches need at least one layer");
    }
    for (const std::vector<int>* widths : {&geo_branch, &cond_branch, &trunk}) {
        for (int w : *widths) {
            if (w < 1) throw ValidationError("LambdaDnnSpec: layer widths must be positive");
        }
    }
    MlpSpec proxy;
    proxy.hidden_sizes = geo_branch;
    proxy.activation = activation;
    proxy.leaky_slope = leaky_slope;
    proxy.dropout = dropout;
    proxy.l2 = l2;
    proxy.lr_schedule = lr_schedule;
    proxy.batch_fraction = batch_fraction;
    proxy.epochs = epochs;
    proxy.seed = seed;
    proxy.validate();
}

Eigen::VectorXd lambda_dnn_params(const LambdaDnnModel& model) {
    Eigen::VectorXd theta(lambda_dnn_param_count(model));
    theta << model.geo.params_flat(), model.cond.params_flat(), model.trunk.params_flat();
    return theta;
}

void set_lambda_dnn_params(LambdaDnnModel& model, const Eigen::VectorXd& theta) {
    adapter_for(model).set_params(theta);
}

Eigen::Index lambda_dnn_param_count(const LambdaDnnModel& model) {
    return model.geo.param_count() + model.cond.param_count() + model.trunk.param_count();
}

double lambda_dnn_objective(const LambdaDnnModel& model, const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd& y, double l2) {
    double obj = detail::mean_row_sse(lambda_dnn_predict(model, x), y);
    if (l2 > 0.0) {
        for (const DenseNet* net : {&model.geo, &model.cond, &model.trunk}) {
            for (const Eigen::MatrixXd& w : net->weights) obj += 0.5 * l2 * w.squaredNorm();
        }
    }
    return obj;
}

Eigen::VectorXd lambda_dnn_gradient(const LambdaDnnModel& model, const Eigen::MatrixXd& x,
                                    const Eigen::MatrixXd& y, double l2) {
    detail::DensePass pass_geo, pass_cond, pass_trunk;
    const Eigen::MatrixXd g = pass_geo.forward(model.geo, x.leftCols(kGeoInputs), 0.0, nullptr);
    const Eigen::MatrixXd c = pass_cond.forward(model.cond, x.rightCols(kCondInputs), 0.0, nullptr);
    Eigen::MatrixXd cat(x.rows(), g.cols() + c.cols());
    cat << g, c;
    const Eigen::MatrixXd pred = pass_trunk.forward(model.trunk, cat, 0.0, nullptr);

    const Eigen::Index ng = model.geo.param_count();
    const Eigen::Index nc = model.cond.param_count();
    Eigen::VectorXd grad(lambda_dnn_param_count(model));
    const Eigen::MatrixXd dcat = pass_trunk.backward(
        model.trunk, 2.0 / static_cast<double>(x.rows()) * (pred - y), grad, ng + nc);
    pass_geo.backward(model.geo, dcat.leftCols(model.geo.output_width()), grad, 0);
    pass_cond.backward(model.cond, dcat.rightCols(model.cond.output_width()), grad, ng);

    if (l2 > 0.0) {
        Eigen::VectorXd mask(grad.size());
        mask << model.geo.weight_mask(), model.cond.weight_mask(), model.trunk.weight_mask();
        grad += l2 * mask.cwiseProduct(lambda_dnn_params(model));
    }
    return grad;
}

LambdaDnnModel lambda_dnn_train(const LambdaDnnSpec& spec, const Eigen::MatrixXd& x,
                                const Eigen::MatrixXd& y, const Eigen::MatrixXd& x_val,
                                const Eigen::MatrixXd& y_val) {
    spec.validate();
    if (x.cols() != kGeoInputs + kCondInputs) {
        throw ValidationError("lambda_dnn_train: inputs must have 9 columns");
    }
    if (x.rows() == 0 || x.rows() != y.rows()) {
        throw ValidationError("lambda_dnn_train: input and target row counts must match");
    }
    if (x_val.rows() == 0 || x_val.cols() != x.cols() || y_val.cols() != y.cols() ||
        x_val.rows() != y_val.rows()) {
        throw ValidationError("lambda_dnn_train: malformed validation pair");
    }

    Rng rng(spec.seed);
    LambdaDnnModel model;
    model.spec = spec;
    model.geo = DenseNet::make(branch_widths(kGeoInputs, spec.geo_branch), spec.activation,
                               spec.leaky_slope, true, rng);
    model.cond = DenseNet::make(branch_widths(kCondInputs, spec.cond_branch), spec.activation,
                                spec.leaky_slope, true, rng);
    std::vector<Eigen::Index> trunk_widths =
        branch_widths(model.geo.output_width() + model.cond.output_width(), spec.trunk);
    trunk_widths.push_back(y.cols());
    model.trunk =
        DenseNet::make(trunk_widths, spec.activation, spec.leaky_slope, false, rng);

    detail::TrainSettings settings;
    settings.dropout = spec.dropout;
    settings.l2 = spec.l2;
    settings.lr_initial = spec.lr_schedule.initial;
    settings.lr_decay = spec.lr_schedule.decay;
    settings.batch_fraction = spec.batch_fraction;
    settings.epochs = spec.epochs;

    detail::BranchedNet adapter = adapter_for(model);
    model.log = detail::adam_train(adapter, settings, x, y, x_val, y_val, rng);
    return model;
}

Eigen::MatrixXd lambda_dnn_predict(const LambdaDnnModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != kGeoInputs + kCondInputs) {
        throw ValidationError("lambda_dnn_predict: inputs must have 9 columns");
    }
    const Eigen::MatrixXd g = model.geo.forward(x.leftCols(kGeoInputs));
    const Eigen::MatrixXd c = model.cond.forward(x.rightCols(kCondInputs));
    Eigen::MatrixXd cat(x.rows(), g.cols() + c.cols());
    cat << g, c;
    return model.trunk.forward(cat);
}

} // namespace wallbench
