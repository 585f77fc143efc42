#include "wallbench/metrics.hpp"

#include "wallbench/error.hpp"
#include "wallbench/flow.hpp"
#include "wallbench/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace wallbench {

namespace {

std::string flow_label(const std::vector<std::string>& names, std::size_t f) {
    return names.empty() ? "flow " + std::to_string(f) : names[f];
}

void check_flow_shapes(const std::vector<Eigen::VectorXd>& truth,
                       const std::vector<Eigen::VectorXd>& pred,
                       const std::vector<double>* weights) {
    if (truth.empty()) throw ValidationError("metrics: no test flows");
    if (pred.size() != truth.size() || (weights != nullptr && weights->size() != truth.size())) {
        throw ValidationError("metrics: flow counts differ");
    }
    for (std::size_t f = 0; f < truth.size(); ++f) {
        if (truth[f].size() == 0 || truth[f].size() != pred[f].size()) {
            throw ValidationError("metrics: truth and prediction shapes differ");
        }
        if (!truth[f].allFinite() || !pred[f].allFinite()) {
            throw ValidationError("metrics: non-finite field values");
        }
        if (weights != nullptr && (*weights)[f] != 1.0 && (*weights)[f] != 0.5) {
            throw ValidationError("metrics: flow weights must be 1.0 or 0.5");
        }
    }
}

} // namespace

double r2_weighted(const std::vector<Eigen::VectorXd>& truth,
                   const std::vector<Eigen::VectorXd>& pred, const std::vector<double>& weights,
                   bool weighted_mean) {
    check_flow_shapes(truth, pred, &weights);

    double mean_num = 0.0;
    double mean_den = 0.0;
    for (std::size_t f = 0; f < truth.size(); ++f) {
        const double w = weighted_mean ? weights[f] : 1.0;
        mean_num += w * truth[f].sum();
        mean_den += w * static_cast<double>(truth[f].size());
    }
    const double mean = mean_num / mean_den;

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t f = 0; f < truth.size(); ++f) {
        ss_res += weights[f] * (truth[f] - pred[f]).squaredNorm();
        ss_tot += weights[f] * (truth[f].array() - mean).matrix().squaredNorm();
    }
    if (!(ss_tot > 0.0)) {
        throw DomainError("r2_weighted: truth is constant, no variance to explain");
    }
    return 1.0 - ss_res / ss_tot;
}

std::vector<double> rmae_per_flow(const std::vector<Eigen::VectorXd>& truth,
                                  const std::vector<Eigen::VectorXd>& pred,
                                  const std::vector<std::string>& flow_names) {
    check_flow_shapes(truth, pred, nullptr);

    std::vector<double> rmae(truth.size());
    for (std::size_t f = 0; f < truth.size(); ++f) {
        const double denom = truth[f].cwiseAbs().sum();
        if (!(denom > 0.0)) {
            throw DomainError("rmae_per_flow: truth is identically zero on " +
                              flow_label(flow_names, f));
        }
        rmae[f] = (truth[f] - pred[f]).cwiseAbs().sum() / denom;
    }
    return rmae;
}

WorstFlowScore wrmae(const std::vector<Eigen::VectorXd>& truth,
                     const std::vector<Eigen::VectorXd>& pred, const std::vector<double>& weights,
                     const std::vector<std::string>& flow_names) {
    check_flow_shapes(truth, pred, &weights);
    const std::vector<double> rmae = rmae_per_flow(truth, pred, flow_names);

    WorstFlowScore worst;
    bool found = false;
    for (std::size_t f = 0; f < rmae.size(); ++f) {
        if (weights[f] != 1.0) continue;
        if (!found || rmae[f] > worst.value) {
            worst.value = rmae[f];
            worst.flow = f;
            found = true;
        }
    }
    if (!found) throw ValidationError("wrmae: no flow carries weight 1.0");
    return worst;
}

ScoreReport score_submission(const Dataset& ds, const std::map<std::string, WallField>& submission,
                             bool weighted_mean) {
    const std::vector<std::string> test_ids = ds.test_ids();
    if (test_ids.empty()) throw ValidationError("score_submission: dataset has no test flows");

    for (const auto& [id, field] : submission) {
        if (ds.split.count(id) == 0 || ds.split.at(id) != SplitLabel::test) {
            throw SubmissionError("score_submission: unexpected submission id " + id);
        }
    }

    ScoreReport report;
    report.flow_ids = test_ids;
    report.flow_weights.reserve(test_ids.size());
    for (const std::string& id : test_ids) {
        if (!ds.has_field(id)) {
            throw ValidationError("score_submission: dataset is missing truth for " + id);
        }
        const auto it = submission.find(id);
        if (it == submission.end()) {
            throw SubmissionError("score_submission: submission is missing " + id);
        }
        const WallField& truth = ds.field(id);
        if (it->second.values.rows() != truth.values.rows() || it->second.values.cols() != 4) {
            throw SubmissionError("score_submission: wrong field shape for " + id);
        }
        report.flow_weights.push_back(flow_weight(ds.condition(id)));
    }

    report.rmae_table.resize(static_cast<Eigen::Index>(test_ids.size()), 4);
    for (std::size_t v = 0; v < 4; ++v) {
        std::vector<Eigen::VectorXd> truth;
        std::vector<Eigen::VectorXd> pred;
        truth.reserve(test_ids.size());
        pred.reserve(test_ids.size());
        for (const std::string& id : test_ids) {
            truth.push_back(ds.field(id).values.col(static_cast<Eigen::Index>(v)));
            pred.push_back(submission.at(id).values.col(static_cast<Eigen::Index>(v)));
        }

        const std::vector<double> rmae = rmae_per_flow(truth, pred, test_ids);
        for (std::size_t f = 0; f < rmae.size(); ++f) {
            report.rmae_table(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(v)) =
                rmae[f];
        }
        const WorstFlowScore worst = wrmae(truth, pred, report.flow_weights, test_ids);
        report.wrmae[v] = worst.value;
        report.worst_flow[v] = ds.condition(test_ids[worst.flow]);
        report.r2[v] = r2_weighted(truth, pred, report.flow_weights, weighted_mean);
    }

    report.r2_mean = (report.r2[0] + report.r2[1] + report.r2[2] + report.r2[3]) / 4.0;
    report.wrmae_mean =
        (report.wrmae[0] + report.wrmae[1] + report.wrmae[2] + report.wrmae[3]) / 4.0;
    return report;
}

std::string render_report_text(const ScoreReport& report) {
    std::ostringstream out;
    out << std::left;
    out << std::setw(10) << "variable" << std::setw(14) << "r2" << std::setw(14) << "wrmae"
        << "worst flow (M, AoA, p_i)\n";
    for (std::size_t v = 0; v < 4; ++v) {
        const FlowCondition& worst = report.worst_flow[v];
        out << std::setw(10) << kOutputNames[v] << std::setw(14) << format_double(report.r2[v], 6)
            << std::setw(14) << format_double(report.wrmae[v], 6) << worst.id << " ("
            << format_double(worst.mach, 6) << ", " << format_double(worst.aoa_deg, 6) << ", "
            << format_double(worst.p_i, 6) << ")\n";
    }
    out << std::setw(10) << "mean" << std::setw(14) << format_double(report.r2_mean, 6)
        << std::setw(14) << format_double(report.wrmae_mean, 6) << "\n";

    out << "\n";
    out << std::setw(24) << "flow" << std::setw(8) << "weight";
    for (const std::string_view name : kOutputNames) {
        out << std::setw(14) << (std::string("rmae_") + std::string(name));
    }
    out << "\n";
    for (std::size_t f = 0; f < report.flow_ids.size(); ++f) {
        out << std::setw(24) << report.flow_ids[f] << std::setw(8)
            << format_double(report.flow_weights[f], 2);
        for (Eigen::Index v = 0; v < 4; ++v) {
            out << std::setw(14)
                << format_double(report.rmae_table(static_cast<Eigen::Index>(f), v), 6);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_report_json(const ScoreReport& report) {
    nlohmann::ordered_json j;
    for (std::size_t v = 0; v < 4; ++v) j["r2"][std::string(kOutputNames[v])] = report.r2[v];
    j["r2"]["mean"] = report.r2_mean;
    for (std::size_t v = 0; v < 4; ++v) j["wrmae"][std::string(kOutputNames[v])] = report.wrmae[v];
    j["wrmae"]["mean"] = report.wrmae_mean;
    for (std::size_t v = 0; v < 4; ++v) {
        const FlowCondition& worst = report.worst_flow[v];
        j["worst_flow"][std::string(kOutputNames[v])] = {{"id", worst.id},
                                                         {"mach", worst.mach},
                                                         {"aoa_deg", worst.aoa_deg},
                                                         {"p_i", worst.p_i}};
    }
    j["flows"] = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < report.flow_ids.size(); ++f) {
        nlohmann::ordered_json row;
        row["id"] = report.flow_ids[f];
        row["weight"] = report.flow_weights[f];
        for (Eigen::Index v = 0; v < 4; ++v) {
            row[std::string(kOutputNames[static_cast<std::size_t>(v)])] =
                report.rmae_table(static_cast<Eigen::Index>(f), v);
        }
        j["flows"].push_back(row);
    }
    return j.dump(2) + "\n";
}

ScoreReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("report_from_json: ") + e.what());
    }

    ScoreReport report;
    try {
        for (std::size_t v = 0; v < 4; ++v) {
            const std::string name(kOutputNames[v]);
            report.r2[v] = j.at("r2").at(name).get<double>();
            report.wrmae[v] = j.at("wrmae").at(name).get<double>();
            const nlohmann::json& worst = j.at("worst_flow").at(name);
            report.worst_flow[v].id = worst.at("id").get<std::string>();
            report.worst_flow[v].mach = worst.at("mach").get<double>();
            report.worst_flow[v].aoa_deg = worst.at("aoa_deg").get<double>();
            report.worst_flow[v].p_i = worst.at("p_i").get<double>();
        }
        report.r2_mean = j.at("r2").at("mean").get<double>();
        report.wrmae_mean = j.at("wrmae").at("mean").get<double>();

        const nlohmann::json& flows = j.at("flows");
        report.rmae_table.resize(static_cast<Eigen::Index>(flows.size()), 4);
        for (std::size_t f = 0; f < flows.size(); ++f) {
            report.flow_ids.push_back(flows[f].at("id").get<std::string>());
            report.flow_weights.push_back(flows[f].at("weight").get<double>());
            for (std::size_t v = 0; v < 4; ++v) {
                report.rmae_table(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(v)) =
                    flows[f].at(std::string(kOutputNames[v])).get<double>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("report_from_json: ") + e.what());
    }
    return report;
}

} // namespace wallbench
