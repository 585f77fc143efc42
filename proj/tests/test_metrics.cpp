#include <doctest.h>

#include "wallbench/error.hpp"
#include "wallbench/metrics.hpp"
#include "wallbench/rng.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

using namespace wallbench;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

/// two weight-1 flows and one half-weight flow with known errors
struct HandCase {
    std::vector<Eigen::VectorXd> truth;
    std::vector<Eigen::VectorXd> pred;
    std::vector<double> weights;
};

HandCase wrmae_hand_case() {
    HandCase c;
    c.truth = {vec2(1.0, -1.0), vec2(2.0, 2.0), vec2(5.0, 5.0)};
    c.pred = {vec2(1.1, -0.9), vec2(1.0, 2.0), vec2(9.0, -2.0)};
    c.weights = {1.0, 1.0, 0.5};
    return c;
}

/// in-memory dataset with 3 wall points, 4 train and 2 test conditions
Dataset tiny_dataset(Rng& rng) {
    Dataset ds;
    ds.geometry.coords.resize(3, 3);
    ds.geometry.normals.resize(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i) {
        ds.geometry.coords.row(i) << 0.1 * static_cast<double>(i), 0.0, 0.0;
        ds.geometry.normals.row(i) << 0.0, 1.0, 0.0;
    }

    const std::vector<double> aoas = {-12.0, -3.0, 4.0, 11.0, 0.0, 6.0};
    for (std::size_t i = 0; i < aoas.size(); ++i) {
        FlowCondition cond;
        cond.id = "f" + std::to_string(i);
        cond.mach = 0.5 + 0.05 * static_cast<double>(i);
        cond.aoa_deg = aoas[i];
        cond.p_i = 1e5;
        ds.conditions.push_back(cond);
        ds.split[cond.id] = i < 4 ? SplitLabel::train : SplitLabel::test;

        WallField field;
        field.condition_id = cond.id;
        field.values.resize(3, 4);
        for (Eigen::Index r = 0; r < 3; ++r) {
            for (Eigen::Index c = 0; c < 4; ++c) field.values(r, c) = rng.normal() + 2.0;
        }
        ds.fields[cond.id] = field;
    }
    return ds;
}

std::map<std::string, WallField> truth_submission(const Dataset& ds) {
    std::map<std::string, WallField> sub;
    for (const std::string& id : ds.test_ids()) sub[id] = ds.field(id);
    return sub;
}

} // namespace

TEST_CASE("r2_weighted matches the worked two-flow example") {
    const std::vector<Eigen::VectorXd> truth = {vec2(1.0, 2.0), vec2(3.0, 4.0)};
    const std::vector<Eigen::VectorXd> pred = {vec2(1.0, 2.0), vec2(2.0, 4.0)};
    const std::vector<double> weights = {1.0, 0.5};

    CHECK(std::abs(r2_weighted(truth, pred, weights) - 13.0 / 15.0) <= 1e-12);
}

TEST_CASE("r2_weighted hits its trivial anchors") {
    const std::vector<Eigen::VectorXd> truth = {vec2(1.0, 2.0), vec2(3.0, 4.0)};
    const std::vector<double> weights = {1.0, 0.5};

    CHECK(r2_weighted(truth, truth, weights) == 1.0);

    const std::vector<Eigen::VectorXd> mean_pred = {vec2(2.5, 2.5), vec2(2.5, 2.5)};
    CHECK(r2_weighted(truth, mean_pred, weights) == 0.0);
}

TEST_CASE("r2_weighted is invariant under a common affine map") {
    Rng rng(41);
    std::vector<Eigen::VectorXd> truth;
    std::vector<Eigen::VectorXd> pred;
    std::vector<double> weights;
    for (int f = 0; f < 5; ++f) {
        Eigen::VectorXd t(7);
        Eigen::VectorXd p(7);
        for (Eigen::Index i = 0; i < 7; ++i) {
            t(i) = rng.normal();
            p(i) = t(i) + 0.3 * rng.normal();
        }
        truth.push_back(t);
        pred.push_back(p);
        weights.push_back(f % 2 == 0 ? 1.0 : 0.5);
    }

    const double base = r2_weighted(truth, pred, weights);
    const double a = -3.7;
    const double b = 11.25;
    std::vector<Eigen::VectorXd> truth2;
    std::vector<Eigen::VectorXd> pred2;
    for (int f = 0; f < 5; ++f) {
        truth2.push_back((a * truth[static_cast<std::size_t>(f)]).array() + b);
        pred2.push_back((a * pred[static_cast<std::size_t>(f)]).array() + b);
    }
    CHECK(std::abs(r2_weighted(truth2, pred2, weights) - base) <= 1e-10);
}

TEST_CASE("r2_weighted mean convention is switchable") {
    const std::vector<Eigen::VectorXd> truth = {vec2(1.0, 2.0), vec2(30.0, 40.0)};
    const std::vector<Eigen::VectorXd> pred = {vec2(1.5, 2.0), vec2(28.0, 41.0)};
    const std::vector<double> weights = {1.0, 0.5};

    const double unweighted = r2_weighted(truth, pred, weights, false);
    const double weighted = r2_weighted(truth, pred, weights, true);
    CHECK(unweighted != weighted);

    const std::vector<double> ones = {1.0, 1.0};
    CHECK(r2_weighted(truth, pred, ones, false) == r2_weighted(truth, pred, ones, true));
}

TEST_CASE("r2_weighted rejects degenerate and malformed inputs") {
    const std::vector<Eigen::VectorXd> flat = {vec2(2.0, 2.0), vec2(2.0, 2.0)};
    const std::vector<double> weights = {1.0, 1.0};
    CHECK_THROWS_AS(r2_weighted(flat, flat, weights), DomainError);

    const std::vector<Eigen::VectorXd> truth = {vec2(1.0, 2.0), vec2(3.0, 4.0)};
    CHECK_THROWS_AS(r2_weighted(truth, {vec2(1.0, 2.0)}, weights), ValidationError);
    CHECK_THROWS_AS(r2_weighted(truth, truth, {1.0, 0.25}), ValidationError);
    CHECK_THROWS_AS(r2_weighted({}, {}, {}), ValidationError);

    const std::vector<Eigen::VectorXd> nan_pred = {
        vec2(1.0, 2.0), vec2(std::numeric_limits<double>::quiet_NaN(), 4.0)};
    CHECK_THROWS_AS(r2_weighted(truth, nan_pred, weights), ValidationError);
}

TEST_CASE("wrmae matches the worked three-flow example") {
    const HandCase c = wrmae_hand_case();
    const WorstFlowScore worst = wrmae(c.truth, c.pred, c.weights);
    CHECK(std::abs(worst.value - 0.25) <= 1e-12);
    CHECK(worst.flow == 1);

    const std::vector<double> rmae = rmae_per_flow(c.truth, c.pred);
    CHECK(std::abs(rmae[0] - 0.1) <= 1e-12);
    CHECK(std::abs(rmae[1] - 0.25) <= 1e-12);
}

TEST_CASE("wrmae is zero for a perfect prediction") {
    const HandCase c = wrmae_hand_case();
    CHECK(wrmae(c.truth, c.truth, c.weights).value == 0.0);
}

TEST_CASE("wrmae is scale-invariant but not shift-invariant") {
    const HandCase c = wrmae_hand_case();
    const double base = wrmae(c.truth, c.pred, c.weights).value;

    HandCase scaled = c;
    for (auto& v : scaled.truth) v *= -7.5;
    for (auto& v : scaled.pred) v *= -7.5;
    CHECK(std::abs(wrmae(scaled.truth, scaled.pred, scaled.weights).value - base) <= 1e-12);

    HandCase shifted = c;
    for (auto& v : shifted.truth) v.array() += 5.0;
    for (auto& v : shifted.pred) v.array() += 5.0;
    CHECK(wrmae(shifted.truth, shifted.pred, shifted.weights).value != base);
}

TEST_CASE("half-weight flows never move wrmae but do move r2") {
    HandCase c = wrmae_hand_case();
    const double base_wrmae = wrmae(c.truth, c.pred, c.weights).value;
    const double base_r2 = r2_weighted(c.truth, c.pred, c.weights);

    // a terrible half-weight flow
    c.truth.push_back(vec2(1.0, 1.0));
    c.pred.push_back(vec2(100.0, -100.0));
    c.weights.push_back(0.5);

    CHECK(wrmae(c.truth, c.pred, c.weights).value == base_wrmae);
    CHECK(r2_weighted(c.truth, c.pred, c.weights) != base_r2);
}

TEST_CASE("worsening the argmax flow never lowers wrmae") {
    const HandCase c = wrmae_hand_case();
    const WorstFlowScore base = wrmae(c.truth, c.pred, c.weights);

    for (double offset : {0.1, 0.5, 2.0, 25.0}) {
        HandCase worse = c;
        worse.pred[base.flow].array() += offset;
        CHECK(wrmae(worse.truth, worse.pred, worse.weights).value >= base.value);
    }
}

TEST_CASE("wrmae names a flow whose truth is identically zero") {
    std::vector<Eigen::VectorXd> truth = {vec2(1.0, -1.0), vec2(0.0, 0.0)};
    std::vector<Eigen::VectorXd> pred = {vec2(1.0, -1.0), vec2(0.1, 0.0)};
    const std::vector<double> weights = {1.0, 1.0};

    CHECK_THROWS_WITH_AS(wrmae(truth, pred, weights, {"alpha", "beta"}),
                         doctest::Contains("beta"), DomainError);
    CHECK_THROWS_WITH_AS(wrmae(truth, pred, weights), doctest::Contains("flow 1"), DomainError);

    const std::vector<double> half = {0.5, 0.5};
    std::vector<Eigen::VectorXd> ok_truth = {vec2(1.0, -1.0), vec2(2.0, 1.0)};
    CHECK_THROWS_AS(wrmae(ok_truth, pred, half), ValidationError);
}

TEST_CASE("score_submission scores a perfect submission end to end") {
    Rng rng(91);
    const Dataset ds = tiny_dataset(rng);
    const ScoreReport report = score_submission(ds, truth_submission(ds));

    for (std::size_t v = 0; v < 4; ++v) {
        CHECK(report.r2[v] == 1.0);
        CHECK(report.wrmae[v] == 0.0);
    }
    CHECK(report.r2_mean == 1.0);
    CHECK(report.wrmae_mean == 0.0);
    CHECK(report.flow_ids == std::vector<std::string>{"f4", "f5"});
    CHECK(report.flow_weights == std::vector<double>{1.0, 1.0});
    CHECK(report.rmae_table.rows() == 2);

    const double mean_check =
        (report.r2[0] + report.r2[1] + report.r2[2] + report.r2[3]) / 4.0;
    CHECK(std::abs(report.r2_mean - mean_check) <= 1e-12);
}

TEST_CASE("score_submission scores the test-mean submission at zero r2") {
    Rng rng(92);
    const Dataset ds = tiny_dataset(rng);
    const std::vector<std::string> test_ids = ds.test_ids();

    Eigen::RowVector4d mean = Eigen::RowVector4d::Zero();
    double count = 0.0;
    for (const std::string& id : test_ids) {
        mean += ds.field(id).values.colwise().sum();
        count += static_cast<double>(ds.field(id).values.rows());
    }
    mean /= count;

    std::map<std::string, WallField> sub;
    for (const std::string& id : test_ids) {
        WallField f;
        f.condition_id = id;
        f.values = mean.replicate(3, 1);
        sub[id] = f;
    }

    const ScoreReport report = score_submission(ds, sub);
    for (std::size_t v = 0; v < 4; ++v) CHECK(std::abs(report.r2[v]) <= 1e-12);
}

TEST_CASE("score_submission rejects coverage violations") {
    Rng rng(93);
    const Dataset ds = tiny_dataset(rng);

    std::map<std::string, WallField> missing = truth_submission(ds);
    missing.erase("f5");
    CHECK_THROWS_WITH_AS(score_submission(ds, missing), doctest::Contains("f5"), SubmissionError);

    std::map<std::string, WallField> extra = truth_submission(ds);
    extra["f1"] = ds.field("f1");
    CHECK_THROWS_AS(score_submission(ds, extra), SubmissionError);

    std::map<std::string, WallField> bad_shape = truth_submission(ds);
    bad_shape["f4"].values = Eigen::MatrixXd::Zero(2, 4);
    CHECK_THROWS_AS(score_submission(ds, bad_shape), SubmissionError);
}

TEST_CASE("score report renders and parses back bitwise") {
    Rng rng(94);
    const Dataset ds = tiny_dataset(rng);
    std::map<std::string, WallField> sub = truth_submission(ds);
    for (auto& [id, field] : sub) field.values.array() += 0.01;

    const ScoreReport report = score_submission(ds, sub);
    const std::string text = render_report_text(report);
    CHECK(text.find("cp") != std::string::npos);
    CHECK(text.find("cfz") != std::string::npos);
    CHECK(text.find("mean") != std::string::npos);
    CHECK(text.find("f4") != std::string::npos);

    const std::string json_text = render_report_json(report);
    const ScoreReport parsed = report_from_json(json_text);
    for (std::size_t v = 0; v < 4; ++v) {
        CHECK(parsed.r2[v] == report.r2[v]);
        CHECK(parsed.wrmae[v] == report.wrmae[v]);
        CHECK(parsed.worst_flow[v].id == report.worst_flow[v].id);
        CHECK(parsed.worst_flow[v].p_i == report.worst_flow[v].p_i);
    }
    CHECK(parsed.r2_mean == report.r2_mean);
    CHECK(parsed.wrmae_mean == report.wrmae_mean);
    CHECK(parsed.flow_ids == report.flow_ids);
    CHECK(parsed.flow_weights == report.flow_weights);
    CHECK((parsed.rmae_table.array() == report.rmae_table.array()).all());

    CHECK(render_report_json(parsed) == json_text);
    CHECK_THROWS_AS(report_from_json("not json"), ValidationError);
    CHECK_THROWS_AS(report_from_json("{}"), ValidationError);
}
