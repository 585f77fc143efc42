#pragma once

#include "wallbench/error.hpp"
#include "wallbench/mlp.hpp"
#include "wallbench/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace wallbench::detail {

inline void apply_activation(Eigen::MatrixXd& z, Activation a, double slope) {
    switch (a) {
    case Activation::leaky_relu: z = z.array().max(slope * z.array()); break;
    case Activation::relu: z = z.array().max(0.0); break;
    case Activation::tanh: z = z.array().tanh(); break;
    }
}

inline Eigen::MatrixXd activation_derivative(const Eigen::MatrixXd& pre,
                                             const Eigen::MatrixXd& post, Activation a,
                                             double slope) {
    switch (a) {
    case Activation::leaky_relu:
        return ((pre.array() > 0.0).cast<double>() * (1.0 - slope) + slope).matrix();
    case Activation::relu: return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::tanh: return (1.0 - post.array().square()).matrix();
    }
    return Eigen::MatrixXd();
}

/// caches of one training forward pass through a DenseNet
struct DensePass {
    std::vector<Eigen::MatrixXd> acts;    ///< acts[0] is the input batch
    std::vector<Eigen::MatrixXd> pre;     ///< pre-activation per layer
    std::vector<Eigen::MatrixXd> act_out; ///< activation before dropout
    std::vector<Eigen::MatrixXd> mask;    ///< inverted-dropout mask, empty when unused

    Eigen::MatrixXd forward(const DenseNet& net, const Eigen::MatrixXd& x, double dropout,
                            Rng* rng) {
        const std::size_t layers = net.weights.size();
        acts.assign(layers + 1, {});
        pre.assign(layers, {});
        act_out.assign(layers, {});
        mask.assign(layers, {});
        acts[0] = x;
        for (std::size_t l = 0; l < layers; ++l) {
            pre[l].noalias() = acts[l] * net.weights[l].transpose();
            pre[l].rowwise() += net.biases[l].transpose();
            const bool activated = (l + 1 < layers) || net.activate_last;
            if (!activated) {
                acts[l + 1] = pre[l];
                continue;
            }
            act_out[l] = pre[l];
            apply_activation(act_out[l], net.activation, net.leaky_slope);
            if (dropout > 0.0 && rng != nullptr) {
                const double keep_scale = 1.0 / (1.0 - dropout);
                mask[l].resize(act_out[l].rows(), act_out[l].cols());
                for (Eigen::Index i = 0; i < mask[l].rows(); ++i) {
                    for (Eigen::Index j = 0; j < mask[l].cols(); ++j) {
                        mask[l](i, j) = rng->uniform() < dropout ? 0.0 : keep_scale;
                    }
                }
                acts[l + 1] = act_out[l].cwiseProduct(mask[l]);
            } else {
                acts[l + 1] = act_out[l];
            }
        }
        return acts[layers];
    }

    /// writes layer gradients into grad starting at offset; returns dJ/d(input)
    Eigen::MatrixXd backward(const DenseNet& net, const Eigen::MatrixXd& dout,
                             Eigen::VectorXd& grad, Eigen::Index offset) const {
        const std::size_t layers = net.weights.size();
        std::vector<Eigen::Index> layer_offset(layers);
        Eigen::Index off = offset;
        for (std::size_t l = 0; l < layers; ++l) {
            layer_offset[l] = off;
            off += net.weights[l].size() + net.biases[l].size();
        }

        Eigen::MatrixXd g = dout;
        for (std::size_t li = layers; li-- > 0;) {
            const bool activated = (li + 1 < layers) || net.activate_last;
            if (activated) {
                if (mask[li].size() > 0) g = g.cwiseProduct(mask[li]);
                g = g.cwiseProduct(
                    activation_derivative(pre[li], act_out[li], net.activation, net.leaky_slope));
            }
            const Eigen::MatrixXd gw = g.transpose() * acts[li];
            const Eigen::VectorXd gb = g.colwise().sum();
            Eigen::Index p = layer_offset[li];
            for (Eigen::Index r = 0; r < gw.rows(); ++r) {
                for (Eigen::Index c = 0; c < gw.cols(); ++c) grad(p++) = gw(r, c);
            }
            for (Eigen::Index r = 0; r < gb.size(); ++r) grad(p++) = gb(r);
            g = g * net.weights[li];
        }
        return g;
    }
};

/// adapter giving the Adam loop flat-parameter access to a single network
struct SingleNet {
    DenseNet* net;
    DensePass pass;

    Eigen::Index param_count() const { return net->param_count(); }
    Eigen::VectorXd params() const { return net->params_flat(); }
    void set_params(const Eigen::VectorXd& theta) { net->set_params_flat(theta); }
    Eigen::VectorXd weight_mask() const { return net->weight_mask(); }

    Eigen::MatrixXd forward_train(const Eigen::MatrixXd& x, double dropout, Rng& rng) {
        return pass.forward(*net, x, dropout, &rng);
    }
    Eigen::VectorXd backward(const Eigen::MatrixXd& dout) {
        Eigen::VectorXd grad(param_count());
        pass.backward(*net, dout, grad, 0);
        return grad;
    }
    Eigen::MatrixXd predict(const Eigen::MatrixXd& x) const { return net->forward(x); }
};

/// geometry and condition branches feed an activated feature pair into the trunk
struct BranchedNet {
    DenseNet* geo;
    DenseNet* cond;
    DenseNet* trunk;
    DensePass pass_geo, pass_cond, pass_trunk;

    Eigen::Index param_count() const {
        return geo->param_count() + cond->param_count() + trunk->param_count();
    }
    Eigen::VectorXd params() const {
        Eigen::VectorXd theta(param_count());
        theta << geo->params_flat(), cond->params_flat(), trunk->params_flat();
        return theta;
    }
    void set_params(const Eigen::VectorXd& theta) {
        const Eigen::Index ng = geo->param_count();
        const Eigen::Index nc = cond->param_count();
        geo->set_params_flat(theta.segment(0, ng));
        cond->set_params_flat(theta.segment(ng, nc));
        trunk->set_params_flat(theta.segment(ng + nc, trunk->param_count()));
    }
    Eigen::VectorXd weight_mask() const {
        Eigen::VectorXd m(param_count());
        m << geo->weight_mask(), cond->weight_mask(), trunk->weight_mask();
        return m;
    }

    Eigen::MatrixXd forward_train(const Eigen::MatrixXd& x, double dropout, Rng& rng) {
        const Eigen::Index gw = geo->input_width();
        const Eigen::Index cw = cond->input_width();
        const Eigen::MatrixXd g = pass_geo.forward(*geo, x.leftCols(gw), dropout, &rng);
        const Eigen::MatrixXd c = pass_cond.forward(*cond, x.rightCols(cw), dropout, &rng);
        Eigen::MatrixXd cat(x.rows(), g.cols() + c.cols());
        cat << g, c;
        return pass_trunk.forward(*trunk, cat, dropout, &rng);
    }
    Eigen::VectorXd backward(const Eigen::MatrixXd& dout) {
        Eigen::VectorXd grad(param_count());
        const Eigen::Index ng = geo->param_count();
        const Eigen::Index nc = cond->param_count();
        const Eigen::MatrixXd dcat = pass_trunk.backward(*trunk, dout, grad, ng + nc);
        pass_geo.backward(*geo, dcat.leftCols(geo->output_width()), grad, 0);
        pass_cond.backward(*cond, dcat.rightCols(cond->output_width()), grad, ng);
        return grad;
    }
    Eigen::MatrixXd predict(const Eigen::MatrixXd& x) const {
        const Eigen::MatrixXd g = geo->forward(x.leftCols(geo->input_width()));
        const Eigen::MatrixXd c = cond->forward(x.rightCols(cond->input_width()));
        Eigen::MatrixXd cat(x.rows(), g.cols() + c.cols());
        cat << g, c;
        return trunk->forward(cat);
    }
};

struct TrainSettings {
    double dropout = 0.0;
    double l2 = 0.0;
    double lr_initial = 1e-3;
    double lr_decay = 0.99;
    double batch_fraction = 0.01;
    int epochs = 1;
};

inline double mean_row_sse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth) {
    return (pred - truth).squaredNorm() / static_cast<double>(truth.rows());
}

/// minibatch Adam with exponential learning-rate decay; restores the best
/// validation parameters; rng drives shuffling and dropout masks
template <class Net>
TrainLog adam_train(Net& net, const TrainSettings& s, const Eigen::MatrixXd& x,
                    const Eigen::MatrixXd& y, const Eigen::MatrixXd& x_val,
                    const Eigen::MatrixXd& y_val, Rng& rng) {
    const Eigen::Index n = x.rows();
    const Eigen::Index batch = std::clamp<Eigen::Index>(
        static_cast<Eigen::Index>(std::llround(s.batch_fraction * static_cast<double>(n))), 1, n);

    const double beta1 = 0.9;
    const double beta2 = 0.999;
    const double eps = 1e-8;

    Eigen::VectorXd theta = net.params();
    const Eigen::VectorXd l2_mask = net.weight_mask();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());

    TrainLog log;
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_theta = theta;

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});

    long step = 0;
    for (int epoch = 0; epoch < s.epochs; ++epoch) {
        const double lr = s.lr_initial * std::pow(s.lr_decay, epoch);
        rng.shuffle(order);

        double epoch_sse = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index rows = std::min(batch, n - start);
            Eigen::MatrixXd xb(rows, x.cols());
            Eigen::MatrixXd yb(rows, y.cols());
            for (Eigen::Index i = 0; i < rows; ++i) {
                xb.row(i) = x.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
                yb.row(i) = y.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
            }

            const Eigen::MatrixXd pred = net.forward_train(xb, s.dropout, rng);
            const Eigen::MatrixXd resid = pred - yb;
            const double batch_loss = resid.squaredNorm() / static_cast<double>(rows);
            if (!std::isfinite(batch_loss)) {
                throw TrainingError("mlp_train: non-finite loss at epoch " +
                                    std::to_string(epoch) + " (learning rate " +
                                    format_double(lr, 6) + "); lower the learning rate");
            }
            epoch_sse += batch_loss * static_cast<double>(rows);

            Eigen::VectorXd grad = net.backward(2.0 / static_cast<double>(rows) * resid);
            if (s.l2 > 0.0) grad += s.l2 * l2_mask.cwiseProduct(theta);

            ++step;
            m = beta1 * m + (1.0 - beta1) * grad;
            v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
            const double mc = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double vc = 1.0 - std::pow(beta2, static_cast<double>(step));
            theta -= (lr / mc) * m.cwiseQuotient(((v / vc).cwiseSqrt().array() + eps).matrix());
            net.set_params(theta);
        }
        log.train_loss.push_back(epoch_sse / static_cast<double>(n));

        const double val = mean_row_sse(net.predict(x_val), y_val);
        if (!std::isfinite(val)) {
            throw TrainingError("mlp_train: non-finite validation loss at epoch " +
                                std::to_string(epoch) + " (learning rate " +
                                format_double(lr, 6) + "); lower the learning rate");
        }
        log.val_loss.push_back(val);
        if (val < best_val) {
            best_val = val;
            best_theta = theta;
            log.best_epoch = epoch;
        }
    }

    net.set_params(best_theta);
    return log;
}

} // namespace wallbench::detail
