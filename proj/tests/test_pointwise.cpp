#include <doctest.h>

#include "wallbench/error.hpp"
#include "wallbench/lambda_dnn.hpp"
#include "wallbench/mlp.hpp"
#include "wallbench/rng.hpp"
#include "wallbench/tree.hpp"
#include "wallbench/tune.hpp"

#include <cmath>
#include <limits>

using namespace wallbench;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

double max_relative_gradient_error(const Eigen::VectorXd& analytic,
                                   const Eigen::VectorXd& numeric) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < analytic.size(); ++i) {
        const double denom = std::max(1.0, std::abs(numeric(i)));
        worst = std::max(worst, std::abs(analytic(i) - numeric(i)) / denom);
    }
    return worst;
}

MlpSpec tiny_spec(std::uint64_t seed) {
    MlpSpec spec;
    spec.hidden_sizes = {6, 5};
    spec.epochs = 4;
    spec.batch_fraction = 0.25;
    spec.seed = seed;
    return spec;
}

} // namespace

TEST_CASE("analytic MLP gradients match central differences at three seeds") {
    const double step = 1e-6;
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        Rng rng(seed);
        const Eigen::MatrixXd x = random_matrix(20, 9, rng);
        const Eigen::MatrixXd y = random_matrix(20, 4, rng);
        DenseNet net = DenseNet::make({9, 5, 4, 4}, Activation::leaky_relu, 0.01, false, rng);
        const double l2 = (seed == 33u) ? 1e-2 : 0.0;

        const Eigen::VectorXd analytic = mlp_gradient(net, x, y, l2);
        Eigen::VectorXd theta = net.params_flat();
        Eigen::VectorXd numeric(theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            Eigen::VectorXd probe = theta;
            probe(i) = theta(i) + step;
            net.set_params_flat(probe);
            const double hi = mlp_objective(net, x, y, l2);
            probe(i) = theta(i) - step;
            net.set_params_flat(probe);
            const double lo = mlp_objective(net, x, y, l2);
            numeric(i) = (hi - lo) / (2.0 * step);
        }
        net.set_params_flat(theta);
        CHECK(max_relative_gradient_error(analytic, numeric) <= 1e-5);
    }
}

TEST_CASE("analytic lambda-DNN gradients match central differences at three seeds") {
    const double step = 1e-6;
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        Rng rng(seed);
        const Eigen::MatrixXd x = random_matrix(20, 9, rng);
        const Eigen::MatrixXd y = random_matrix(20, 4, rng);

        LambdaDnnModel model;
        model.geo = DenseNet::make({6, 4, 3}, Activation::leaky_relu, 0.01, true, rng);
        model.cond = DenseNet::make({3, 3}, Activation::leaky_relu, 0.01, true, rng);
        model.trunk = DenseNet::make({6, 5, 4}, Activation::leaky_relu, 0.01, false, rng);
        const double l2 = (seed == 9u) ? 1e-2 : 0.0;

        const Eigen::VectorXd analytic = lambda_dnn_gradient(model, x, y, l2);
        const Eigen::VectorXd theta = lambda_dnn_params(model);
        Eigen::VectorXd numeric(theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            Eigen::VectorXd probe = theta;
            probe(i) = theta(i) + step;
            set_lambda_dnn_params(model, probe);
            const double hi = lambda_dnn_objective(model, x, y, l2);
            probe(i) = theta(i) - step;
            set_lambda_dnn_params(model, probe);
            const double lo = lambda_dnn_objective(model, x, y, l2);
            numeric(i) = (hi - lo) / (2.0 * step);
        }
        set_lambda_dnn_params(model, theta);
        CHECK(max_relative_gradient_error(analytic, numeric) <= 1e-5);
    }
}

TEST_CASE("dense forward matches hand-computed products") {
    Rng rng(1);
    DenseNet net = DenseNet::make({2, 2}, Activation::leaky_relu, 0.01, false, rng);
    net.weights[0] << 1.0, 2.0, -0.5, 3.0;
    net.biases[0] << 0.25, -1.0;

    Eigen::MatrixXd x(1, 2);
    x << 2.0, -1.0;
    const Eigen::MatrixXd out = net.forward(x); // linear final layer
    CHECK(out(0, 0) == doctest::Approx(1.0 * 2.0 + 2.0 * -1.0 + 0.25).epsilon(1e-15));
    CHECK(out(0, 1) == doctest::Approx(-0.5 * 2.0 + 3.0 * -1.0 - 1.0).epsilon(1e-15));

    net.weights[0].setZero();
    net.biases[0].setZero();
    CHECK(net.forward(x).isZero(0.0));
}

TEST_CASE("prediction is pointwise: permuting rows permutes outputs") {
    Rng rng(4);
    const Eigen::MatrixXd x = random_matrix(10, 9, rng);
    DenseNet net = DenseNet::make({9, 5, 4}, Activation::tanh, 0.01, false, rng);
    const Eigen::MatrixXd out = net.forward(x);

    Eigen::MatrixXd reversed(10, 9);
    for (int i = 0; i < 10; ++i) reversed.row(i) = x.row(9 - i);
    const Eigen::MatrixXd out_rev = net.forward(reversed);
    for (int i = 0; i < 10; ++i) {
        // matrix kernels may reassociate sums across row panels; allow ulp noise
        CHECK((out_rev.row(i) - out.row(9 - i)).cwiseAbs().maxCoeff() <= 1e-13);
    }

    // a single row predicts identically no matter how often it is evaluated
    const Eigen::MatrixXd lone = net.forward(x.topRows(1));
    CHECK(lone == net.forward(x.topRows(1)));
}

TEST_CASE("training is deterministic and snapshots the best validation epoch") {
    Rng rng(2);
    const Eigen::MatrixXd x = random_matrix(40, 9, rng);
    const Eigen::MatrixXd y = random_matrix(40, 4, rng);
    const Eigen::MatrixXd xv = random_matrix(12, 9, rng);
    const Eigen::MatrixXd yv = random_matrix(12, 4, rng);

    const MlpSpec spec = tiny_spec(77);
    const MlpModel a = mlp_train(spec, x, y, xv, yv);
    const MlpModel b = mlp_train(spec, x, y, xv, yv);
    CHECK(a.net.params_flat() == b.net.params_flat());
    CHECK(a.log.train_loss == b.log.train_loss);
    CHECK(a.log.val_loss == b.log.val_loss);

    REQUIRE(a.log.val_loss.size() == 4);
    REQUIRE(a.log.best_epoch >= 0);
    double best = std::numeric_limits<double>::infinity();
    int best_epoch = -1;
    for (std::size_t e = 0; e < a.log.val_loss.size(); ++e) {
        if (a.log.val_loss[e] < best) {
            best = a.log.val_loss[e];
            best_epoch = static_cast<int>(e);
        }
    }
    CHECK(a.log.best_epoch == best_epoch);
}

TEST_CASE("epochs=1 runs exactly one pass") {
    Rng rng(3);
    const Eigen::MatrixXd x = random_matrix(16, 9, rng);
    const Eigen::MatrixXd y = random_matrix(16, 4, rng);
    MlpSpec spec = tiny_spec(5);
    spec.epochs = 1;
    const MlpModel m = mlp_train(spec, x, y, x, y);
    CHECK(m.log.train_loss.size() == 1);
    CHECK(m.log.val_loss.size() == 1);
    CHECK(m.log.best_epoch == 0);
}

TEST_CASE("a small net recovers a linear target") {
    Rng rng(6);
    const Eigen::MatrixXd x = random_matrix(200, 9, rng);
    const Eigen::MatrixXd y = x.col(0);
    const Eigen::MatrixXd xv = random_matrix(50, 9, rng);
    const Eigen::MatrixXd yv = xv.col(0);

    MlpSpec spec;
    spec.hidden_sizes = {16};
    spec.epochs = 500;
    spec.batch_fraction = 0.02;
    spec.lr_schedule.initial = 1e-2;
    spec.lr_schedule.decay = 0.997;
    spec.seed = 12;
    const MlpModel m = mlp_train(spec, x, y, xv, yv);
    const double val_mse = (mlp_predict(m, xv) - yv).squaredNorm() / 50.0;
    CHECK(val_mse <= 1e-3);
}

TEST_CASE("dropout is off at prediction time") {
    Rng rng(8);
    const Eigen::MatrixXd x = random_matrix(30, 9, rng);
    const Eigen::MatrixXd y = random_matrix(30, 4, rng);
    MlpSpec spec = tiny_spec(9);
    spec.dropout = 0.4;
    const MlpModel m = mlp_train(spec, x, y, x, y);
    const Eigen::MatrixXd once = mlp_predict(m, x);
    const Eigen::MatrixXd twice = mlp_predict(m, x);
    CHECK(once == twice);
}

TEST_CASE("exploding training reports epoch and learning rate") {
    Rng rng(10);
    const Eigen::MatrixXd x = 1e3 * random_matrix(20, 9, rng);
    const Eigen::MatrixXd y = 1e3 * random_matrix(20, 4, rng);
    // Adam normalizes each step to about the learning rate, so the rate must
    // be large enough that layered products overflow to inf
    MlpSpec spec = tiny_spec(1);
    spec.lr_schedule.initial = 1e120;
    spec.epochs = 5;
    spec.batch_fraction = 0.5;
    CHECK_THROWS_WITH_AS(mlp_train(spec, x, y, x, y), doctest::Contains("epoch"), TrainingError);
}

TEST_CASE("predict rejects width mismatches") {
    Rng rng(13);
    const Eigen::MatrixXd x = random_matrix(16, 9, rng);
    const Eigen::MatrixXd y = random_matrix(16, 4, rng);
    const MlpModel m = mlp_train(tiny_spec(2), x, y, x, y);
    CHECK_THROWS_AS(mlp_predict(m, random_matrix(3, 5, rng)), ValidationError);
}

TEST_CASE("lambda-DNN ignores conditions when the trunk masks them") {
    Rng rng(14);
    LambdaDnnModel model;
    model.geo = DenseNet::make({6, 4}, Activation::leaky_relu, 0.01, true, rng);
    model.cond = DenseNet::make({3, 3}, Activation::leaky_relu, 0.01, true, rng);
    model.trunk = DenseNet::make({7, 5, 4}, Activation::leaky_relu, 0.01, false, rng);
    model.trunk.weights[0].rightCols(3).setZero();

    Eigen::MatrixXd a = random_matrix(5, 9, rng);
    Eigen::MatrixXd b = a;
    b.col(6).array() += 0.37;
    b.col(7).array() -= 1.4;
    b.col(8).array() *= 2.0;
    CHECK(lambda_dnn_predict(model, a) == lambda_dnn_predict(model, b));
}

TEST_CASE("published layer lists instantiate and match the closed-form parameter count") {
    Rng rng(15);
    const Eigen::MatrixXd x = random_matrix(20, 9, rng);
    const Eigen::MatrixXd y = random_matrix(20, 4, rng);

    LambdaDnnSpec spec;
    spec.geo_branch = {107, 116, 236, 139};
    spec.cond_branch = {240, 179, 114};
    spec.trunk = {230, 162, 124};
    spec.epochs = 1;
    spec.batch_fraction = 1.0;
    spec.seed = 3;
    const LambdaDnnModel m = lambda_dnn_train(spec, x, y, x, y);
    CHECK(lambda_dnn_predict(m, x).rows() == 20);
    CHECK(lambda_dnn_predict(m, x).cols() == 4);

    auto chain_count = [](std::vector<int> widths) {
        Eigen::Index total = 0;
        for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
            total += (widths[i] + 1) * widths[i + 1];
        }
        return total;
    };
    const Eigen::Index expected = chain_count({6, 107, 116, 236, 139}) +
                                  chain_count({3, 240, 179, 114}) +
                                  chain_count({139 + 114, 230, 162, 124, 4});
    CHECK(lambda_dnn_param_count(m) == expected);
}

TEST_CASE("lambda-DNN equals a block-masked plain MLP") {
    Rng rng(16);
    LambdaDnnModel model;
    model.geo = DenseNet::make({6, 4}, Activation::leaky_relu, 0.01, true, rng);
    model.cond = DenseNet::make({3, 3}, Activation::leaky_relu, 0.01, true, rng);
    model.trunk = DenseNet::make({7, 5, 4}, Activation::leaky_relu, 0.01, false, rng);

    DenseNet flat = DenseNet::make({9, 7, 5, 4}, Activation::leaky_relu, 0.01, false, rng);
    flat.weights[0].setZero();
    flat.weights[0].topLeftCorner(4, 6) = model.geo.weights[0];
    flat.weights[0].bottomRightCorner(3, 3) = model.cond.weights[0];
    flat.biases[0] << model.geo.biases[0], model.cond.biases[0];
    flat.weights[1] = model.trunk.weights[0];
    flat.biases[1] = model.trunk.biases[0];
    flat.weights[2] = model.trunk.weights[1];
    flat.biases[2] = model.trunk.biases[1];

    const Eigen::MatrixXd x = random_matrix(12, 9, rng);
    const Eigen::MatrixXd a = lambda_dnn_predict(model, x);
    const Eigen::MatrixXd b = flat.forward(x);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("tree reproduces the two-leaf hand example") {
    Eigen::MatrixXd x(4, 1), y(4, 1);
    x << 0, 1, 2, 3;
    y << 0, 0, 10, 10;
    const TreeModel m = tree_fit(TreeSpec{}, x, y);

    REQUIRE(m.nodes.size() == 3);
    CHECK(m.nodes[0].feature == 0);
    CHECK(m.nodes[0].threshold == doctest::Approx(1.5));
    CHECK(m.nodes[0].threshold > 1.0);
    CHECK(m.nodes[0].threshold < 2.0);

    Eigen::MatrixXd probe(3, 1);
    probe << 0.5, 1.5, 2.5;
    const Eigen::MatrixXd pred = tree_predict(m, probe);
    CHECK(pred(0, 0) == 0.0);
    CHECK(pred(1, 0) == 0.0);
    CHECK(pred(2, 0) == 10.0);
}

TEST_CASE("min_samples_leaf=1 memorizes distinct rows exactly") {
    Rng rng(21);
    const Eigen::MatrixXd x = random_matrix(64, 3, rng);
    const Eigen::MatrixXd y = random_matrix(64, 4, rng);
    const TreeModel m = tree_fit(TreeSpec{}, x, y);
    CHECK(tree_predict(m, x) == y);
}

TEST_CASE("constant targets produce a single leaf") {
    Eigen::MatrixXd x(6, 2);
    x << 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11;
    const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(6, 4, 2.5);
    const TreeModel m = tree_fit(TreeSpec{}, x, y);
    CHECK(m.nodes.size() == 1);
    CHECK(tree_depth(m) == 0);
    CHECK(tree_predict(m, x.topRows(1))(0, 0) == 2.5);
}

TEST_CASE("root split matches a brute-force SSE scan on 1-feature data") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(900 + seed);
        const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.index(40));
        const Eigen::MatrixXd x = random_matrix(n, 1, rng);
        const Eigen::MatrixXd y = random_matrix(n, 1, rng);

        std::vector<double> values(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = x(i, 0);
        std::sort(values.begin(), values.end());

        double best_sse = std::numeric_limits<double>::infinity();
        double best_threshold = 0.0;
        for (std::size_t p = 0; p + 1 < values.size(); ++p) {
            if (!(values[p] < values[p + 1])) continue;
            const double threshold = 0.5 * (values[p] + values[p + 1]);
            double sl = 0, nl = 0, sr = 0, nr = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (x(i, 0) <= threshold) {
                    sl += y(i, 0);
                    nl += 1;
                } else {
                    sr += y(i, 0);
                    nr += 1;
                }
            }
            const double ml = sl / nl;
            const double mr = sr / nr;
            double sse = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double mu = x(i, 0) <= threshold ? ml : mr;
                sse += (y(i, 0) - mu) * (y(i, 0) - mu);
            }
            if (sse < best_sse) {
                best_sse = sse;
                best_threshold = threshold;
            }
        }

        TreeSpec spec;
        spec.max_depth = 1;
        const TreeModel m = tree_fit(spec, x, y);
        REQUIRE(!m.nodes[0].is_leaf());
        CHECK(m.nodes[0].threshold == best_threshold);
    }
}

TEST_CASE("training SSE never increases as min_samples_leaf decreases") {
    Rng rng(31);
    const Eigen::MatrixXd x = random_matrix(80, 4, rng);
    const Eigen::MatrixXd y = random_matrix(80, 4, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int msl : {16, 8, 4, 2, 1}) {
        TreeSpec spec;
        spec.min_samples_leaf = msl;
        const TreeModel m = tree_fit(spec, x, y);
        const double sse = (tree_predict(m, x) - y).squaredNorm();
        CHECK(sse <= prev + 1e-12);
        prev = sse;
    }
    CHECK(prev == 0.0);
}

TEST_CASE("equal-error ties pick the lowest feature index") {
    Eigen::MatrixXd x(4, 2), y(4, 1);
    x << 0, 0, 1, 1, 2, 2, 3, 3; // duplicated feature
    y << 0, 0, 10, 10;
    TreeSpec spec;
    spec.max_depth = 1;
    const TreeModel m = tree_fit(spec, x, y);
    CHECK(m.nodes[0].feature == 0);
}

TEST_CASE("tree input validation") {
    CHECK_THROWS_AS(tree_fit(TreeSpec{}, Eigen::MatrixXd(), Eigen::MatrixXd()), ValidationError);
    TreeSpec bad;
    bad.min_samples_leaf = 0;
    Eigen::MatrixXd x(2, 1), y(2, 1);
    x << 0, 1;
    y << 0, 1;
    CHECK_THROWS_AS(tree_fit(bad, x, y), ValidationError);
    const TreeModel m = tree_fit(TreeSpec{}, x, y);
    CHECK_THROWS_AS(tree_predict(m, Eigen::MatrixXd::Zero(1, 2)), ValidationError);
}

TEST_CASE("max_depth bounds the tree") {
    Rng rng(41);
    const Eigen::MatrixXd x = random_matrix(32, 2, rng);
    const Eigen::MatrixXd y = random_matrix(32, 1, rng);
    for (int cap : {0, 1, 3}) {
        TreeSpec spec;
        spec.max_depth = cap;
        CHECK(tree_depth(tree_fit(spec, x, y)) <= cap);
    }
}

TEST_CASE("random search is seeded, prefix-stable, and monotone in budget") {
    Rng rng(51);
    const Eigen::MatrixXd x = random_matrix(30, 9, rng);
    Eigen::MatrixXd y = x.col(0) + 0.5 * x.col(1);
    const Eigen::MatrixXd xv = random_matrix(12, 9, rng);
    Eigen::MatrixXd yv = xv.col(0) + 0.5 * xv.col(1);

    MlpTuneSpace space;
    space.hidden_options = {{4}, {6}, {4, 4}};
    space.epoch_options = {5, 10};
    space.batch_fraction = 0.25;

    const TuneResult one = random_search_tune(space, 1, 99, x, y, xv, yv);
    CHECK(one.trials.size() == 1);
    CHECK(one.best_val_r2 == one.trials[0].val_r2);
    CHECK(one.best_spec.hidden_sizes == one.trials[0].spec.hidden_sizes);

    const TuneResult rerun = random_search_tune(space, 1, 99, x, y, xv, yv);
    CHECK(rerun.trials[0].spec.hidden_sizes == one.trials[0].spec.hidden_sizes);
    CHECK(rerun.trials[0].val_r2 == one.trials[0].val_r2);

    double prev_best = -std::numeric_limits<double>::infinity();
    for (int budget : {1, 3, 6}) {
        const TuneResult r = random_search_tune(space, budget, 99, x, y, xv, yv);
        CHECK(r.best_val_r2 >= prev_best);
        prev_best = r.best_val_r2;
        // prefix stability: trial t identical across budgets
        CHECK(r.trials[0].spec.hidden_sizes == one.trials[0].spec.hidden_sizes);
    }

    CHECK_THROWS_AS(random_search_tune(space, 0, 1, x, y, xv, yv), ValidationError);
}
