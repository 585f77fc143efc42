#include "wallbench/mlp.hpp"

#include "wallbench/error.hpp"

#include "net_train.hpp"

#include <cmath>

namespace wallbench {

std::string to_string(Activation a) {
    switch (a) {
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    }
    return "leaky_relu";
}

Activation activation_from_string(std::string_view s) {
    if (s == "leaky_relu") return Activation::leaky_relu;
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    throw ValidationError("unknown activation '" + std::string(s) +
                          "'; expected leaky_relu, relu, or tanh");
}

void MlpSpec::validate() const {
    if (hidden_sizes.empty()) throw ValidationError("MlpSpec: at least one hidden layer required");
    for (int w : hidden_sizes) {
        if (w < 1) throw ValidationError("MlpSpec: layer widths must be positive");
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("MlpSpec: dropout must be in [0, 1)");
    if (!(l2 >= 0.0)) throw ValidationError("MlpSpec: l2 must be nonnegative");
    if (!(lr_schedule.initial > 0.0)) throw ValidationError("MlpSpec: learning rate must be positive");
    if (!(lr_schedule.decay > 0.0 && lr_schedule.decay <= 1.0)) {
        throw ValidationError("MlpSpec: lr decay must be in (0, 1]");
    }
    if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) {
        throw ValidationError("MlpSpec: batch_fraction must be in (0, 1]");
    }
    if (epochs < 1) throw ValidationError("MlpSpec: epochs must be at least 1");
    if (!(leaky_slope >= 0.0 && leaky_slope < 1.0)) {
        throw ValidationError("MlpSpec: leaky_slope must be in [0, 1)");
    }
}

DenseNet DenseNet::make(const std::vector<Eigen::Index>& widths, Activation act,
                        double leaky_slope, bool activate_last, Rng& rng) {
    if (widths.size() < 2) throw ValidationError("DenseNet: need input and output widths");
    for (Eigen::Index w : widths) {
        if (w < 1) throw ValidationError("DenseNet: widths must be positive");
    }
    DenseNet net;
    net.activation = act;
    net.leaky_slope = leaky_slope;
    net.activate_last = activate_last;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const Eigen::Index fan_in = widths[l];
        const Eigen::Index fan_out = widths[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index r = 0; r < fan_out; ++r) {
            for (Eigen::Index c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-limit, limit);
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return net;
}

Eigen::Index DenseNet::input_width() const { return weights.front().cols(); }
Eigen::Index DenseNet::output_width() const { return weights.back().rows(); }

Eigen::Index DenseNet::param_count() const {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

Eigen::VectorXd DenseNet::params_flat() const {
    Eigen::VectorXd theta(param_count());
    Eigen::Index p = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) theta(p++) = weights[l](r, c);
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) theta(p++) = biases[l](r);
    }
    return theta;
}

void DenseNet::set_params_flat(const Eigen::VectorXd& theta) {
    if (theta.size() != param_count()) {
        throw ValidationError("DenseNet: parameter vector has the wrong length");
    }
    Eigen::Index p = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) weights[l](r, c) = theta(p++);
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) biases[l](r) = theta(p++);
    }
}

Eigen::VectorXd DenseNet::weight_mask() const {
    Eigen::VectorXd mask(param_count());
    Eigen::Index p = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index i = 0; i < weights[l].size(); ++i) mask(p++) = 1.0;
        for (Eigen::Index i = 0; i < biases[l].size(); ++i) mask(p++) = 0.0;
    }
    return mask;
}

Eigen::MatrixXd DenseNet::forward(const Eigen::MatrixXd& x) const {
    if (x.cols() != input_width()) {
        throw ValidationError("DenseNet: input has " + std::to_string(x.cols()) +
                              " columns, expected " + std::to_string(input_width()));
    }
    Eigen::MatrixXd a = x;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        Eigen::MatrixXd z = a * weights[l].transpose();
        z.rowwise() += biases[l].transpose();
        const bool activated = (l + 1 < weights.size()) || activate_last;
        if (activated) detail::apply_activation(z, activation, leaky_slope);
        a = std::move(z);
    }
    return a;
}

double mlp_objective(const DenseNet& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                     double l2) {
    double obj = detail::mean_row_sse(net.forward(x), y);
    if (l2 > 0.0) {
        for (const Eigen::MatrixXd& w : net.weights) obj += 0.5 * l2 * w.squaredNorm();
    }
    return obj;
}

Eigen::VectorXd mlp_gradient(const DenseNet& net, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y, double l2) {
    detail::DensePass pass;
    const Eigen::MatrixXd pred = pass.forward(net, x, 0.0, nullptr);
    Eigen::VectorXd grad(net.param_count());
    pass.backward(net, 2.0 / static_cast<double>(x.rows()) * (pred - y), grad, 0);
    if (l2 > 0.0) grad += l2 * net.weight_mask().cwiseProduct(net.params_flat());
    return grad;
}

MlpModel mlp_train(const MlpSpec& spec, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   const Eigen::MatrixXd& x_val, const Eigen::MatrixXd& y_val) {
    spec.validate();
    if (x.rows() == 0 || x.rows() != y.rows()) {
        throw ValidationError("mlp_train: input and target row counts must match and be positive");
    }
    if (x_val.rows() == 0 || x_val.rows() != y_val.rows()) {
        throw ValidationError("mlp_train: validation pair must be nonempty with matching rows");
    }
    if (x_val.cols() != x.cols() || y_val.cols() != y.cols()) {
        throw ValidationError("mlp_train: validation column counts must match training data");
    }

    std::vector<Eigen::Index> widths;
    widths.push_back(x.cols());
    for (int w : spec.hidden_sizes) widths.push_back(w);
    widths.push_back(y.cols());

    Rng rng(spec.seed);
    MlpModel model;
    model.spec = spec;
    model.net = DenseNet::make(widths, spec.activation, spec.leaky_slope, false, rng);

    detail::TrainSettings settings;
    settings.dropout = spec.dropout;
    settings.l2 = spec.l2;
    settings.lr_initial = spec.lr_schedule.initial;
    settings.lr_decay = spec.lr_schedule.decay;
    settings.batch_fraction = spec.batch_fraction;
    settings.epochs = spec.epochs;

    detail::SingleNet adapter{&model.net, {}};
    model.log = detail::adam_train(adapter, settings, x, y, x_val, y_val, rng);
    return model;
}

Eigen::MatrixXd mlp_predict(const MlpModel& model, const Eigen::MatrixXd& x) {
    return model.net.forward(x);
}

} // namespace wallbench
