#include "wallbench/flow.hpp"
#include "wallbench/graph.hpp"
#include "wallbench/isomap.hpp"
#include "wallbench/knn.hpp"
#include "wallbench/mlp.hpp"
#include "wallbench/oracle.hpp"
#include "wallbench/pod.hpp"
#include "wallbench/rbf.hpp"
#include "wallbench/rng.hpp"
#include "wallbench/tree.hpp"

#include <benchmark/benchmark.h>

using namespace wallbench;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

} // namespace

static void BM_RbfFit(benchmark::State& state) {
    Rng rng(1);
    const Eigen::Index n = state.range(0);
    const Eigen::MatrixXd x = random_matrix(n, 3, rng);
    const Eigen::MatrixXd z = random_matrix(n, 8, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rbf_fit(x, z, RbfKernel::multiquadric, 1.0, 1e-8));
    }
}
BENCHMARK(BM_RbfFit)->Arg(64)->Arg(256);

static void BM_RbfPredict(benchmark::State& state) {
    Rng rng(2);
    const Eigen::MatrixXd x = random_matrix(256, 3, rng);
    const Eigen::MatrixXd z = random_matrix(256, 8, rng);
    const RbfModel model = rbf_fit(x, z, RbfKernel::multiquadric, 1.0, 1e-8);
    const Eigen::MatrixXd queries = random_matrix(1000, 3, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rbf_predict(model, queries));
    }
}
BENCHMARK(BM_RbfPredict);

static void BM_KnnPredict(benchmark::State& state) {
    Rng rng(3);
    KnnModel model;
    model.scaled_train_params = random_matrix(312, 3, rng);
    model.train_snapshots = random_matrix(312, 2000, rng);
    model.k = 5;
    const Eigen::VectorXd query = random_matrix(3, 1, rng).col(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(knn_predict(model, query));
    }
}
BENCHMARK(BM_KnnPredict);

static void BM_PodFit(benchmark::State& state) {
    Rng rng(4);
    const Eigen::Index n = state.range(0);
    const Eigen::MatrixXd params = random_matrix(n, 3, rng);
    const Eigen::MatrixXd snaps = random_matrix(n, 2000, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pod_fit(params, snaps, 0.99, RbfKernel::multiquadric, 1e-8));
    }
}
BENCHMARK(BM_PodFit)->Arg(64)->Arg(256);

static void BM_GeodesicDistances(benchmark::State& state) {
    Rng rng(5);
    const Eigen::MatrixXd points = random_matrix(256, 3, rng);
    const NeighborGraph graph = knn_graph(points, 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(geodesic_distances(graph));
    }
}
BENCHMARK(BM_GeodesicDistances);

static void BM_ClassicalMds(benchmark::State& state) {
    Rng rng(6);
    const Eigen::MatrixXd points = random_matrix(256, 3, rng);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(256, 256);
    for (Eigen::Index i = 0; i < 256; ++i) {
        for (Eigen::Index j = i + 1; j < 256; ++j) {
            d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(classical_mds(d, 3));
    }
}
BENCHMARK(BM_ClassicalMds);

static void BM_TreeFit(benchmark::State& state) {
    Rng rng(7);
    const Eigen::MatrixXd x = random_matrix(4096, 9, rng);
    const Eigen::MatrixXd y = random_matrix(4096, 4, rng);
    TreeSpec spec;
    spec.max_depth = 12;
    spec.min_samples_leaf = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tree_fit(spec, x, y));
    }
}
BENCHMARK(BM_TreeFit);

static void BM_MlpTrainEpoch(benchmark::State& state) {
    Rng rng(8);
    const Eigen::MatrixXd x = random_matrix(2048, 9, rng);
    const Eigen::MatrixXd y = random_matrix(2048, 4, rng);
    const Eigen::MatrixXd x_val = random_matrix(128, 9, rng);
    const Eigen::MatrixXd y_val = random_matrix(128, 4, rng);
    MlpSpec spec;
    spec.hidden_sizes = {64, 64, 32};
    spec.epochs = 1;
    spec.batch_fraction = 0.01;
    spec.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mlp_train(spec, x, y, x_val, y_val));
    }
}
BENCHMARK(BM_MlpTrainEpoch);

static void BM_OracleField(benchmark::State& state) {
    OracleConfig cfg;
    const SurfaceGeometry geo = generate_geometry(cfg);
    const GasModel gas = GasModel::air_defaults();
    FlowCondition cond;
    cond.id = make_condition_id(0.85, 2.0, 2e5);
    cond.mach = 0.85;
    cond.aoa_deg = 2.0;
    cond.p_i = 2e5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic_fields(geo, cond, gas, cfg));
    }
}
BENCHMARK(BM_OracleField);

BENCHMARK_MAIN();
