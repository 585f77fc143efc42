#include "wallbench/dataset.hpp"

#include "wallbench/error.hpp"
#include "wallbench/rng.hpp"
#include "wallbench/text.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wallbench {

void SurfaceGeometry::validate() const {
    if (coords.rows() == 0) throw ValidationError("geometry: empty point cloud");
    if (coords.cols() != 3 || normals.cols() != 3) {
        throw ValidationError("geometry: coords and normals must have 3 columns");
    }
    if (normals.rows() != coords.rows()) {
        throw ValidationError("geometry: coords and normals row counts differ");
    }
    if (!coords.allFinite() || !normals.allFinite()) {
        throw ValidationError("geometry: non-finite entry");
    }
    for (Eigen::Index i = 0; i < normals.rows(); ++i) {
        const double norm = normals.row(i).norm();
        if (std::abs(norm - 1.0) > 1e-6) {
            throw ValidationError("geometry: normal of point " + std::to_string(i) +
                                  " has norm " + format_double(norm, 6));
        }
    }
}

void WallField::validate(Eigen::Index n_p) const {
    if (values.rows() != n_p) {
        throw ValidationError("field " + condition_id + ": expected " + std::to_string(n_p) +
                              " rows, got " + std::to_string(values.rows()));
    }
    if (values.cols() != 4) {
        throw ValidationError("field " + condition_id + ": expected 4 columns");
    }
    if (!values.allFinite()) {
        throw ValidationError("field " + condition_id + ": non-finite entry");
    }
}

std::string to_string(SplitLabel label) {
    return label == SplitLabel::train ? "train" : "test";
}

SplitLabel split_label_from_string(const std::string& s) {
    if (s == "train") return SplitLabel::train;
    if (s == "test") return SplitLabel::test;
    throw ValidationError("unknown split label '" + s + "'");
}

const FlowCondition& Dataset::condition(const std::string& id) const {
    for (const auto& c : conditions) {
        if (c.id == id) return c;
    }
    throw ValidationError("unknown condition id '" + id + "'");
}

const WallField& Dataset::field(const std::string& id) const {
    auto it = fields.find(id);
    if (it == fields.end()) throw ValidationError("no stored field for condition '" + id + "'");
    return it->second;
}

std::vector<std::string> Dataset::ids_with_label(SplitLabel label) const {
    std::vector<std::string> out;
    for (const auto& c : conditions) {
        auto it = split.find(c.id);
        if (it != split.end() && it->second == label) out.push_back(c.id);
    }
    return out;
}

void Dataset::validate() const {
    geometry.validate();
    std::set<std::string> ids;
    for (const auto& c : conditions) {
        if (!ids.insert(c.id).second) {
            throw ValidationError("duplicate condition id '" + c.id + "'");
        }
    }
    for (const auto& [id, label] : split) {
        (void)label;
        if (ids.count(id) == 0) {
            throw ValidationError("split labels unknown condition '" + id + "'");
        }
    }
    for (const auto& c : conditions) {
        if (split.count(c.id) == 0) {
            throw ValidationError("condition '" + c.id + "' has no split label");
        }
    }
    for (const auto& [id, f] : fields) {
        if (ids.count(id) == 0) {
            throw ValidationError("stored field for unknown condition '" + id + "'");
        }
        f.validate(geometry.n_p());
    }
}

Eigen::MatrixXd Scaler::apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != means.size()) {
        throw ValidationError("scaler: expected " + std::to_string(means.size()) + " columns");
    }
    return (x.rowwise() - means.transpose()).array().rowwise() /
           stds.transpose().array();
}

Eigen::MatrixXd Scaler::invert(const Eigen::MatrixXd& x_scaled) const {
    if (x_scaled.cols() != means.size()) {
        throw ValidationError("scaler: expected " + std::to_string(means.size()) + " columns");
    }
    return (x_scaled.array().rowwise() * stds.transpose().array()).matrix().rowwise() +
           means.transpose();
}

Scaler fit_scaler(const Eigen::MatrixXd& x) {
    if (x.rows() == 0 || x.cols() == 0) throw ValidationError("scaler: empty fitting matrix");
    Scaler s;
    s.means = x.colwise().mean();
    s.stds.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double var = (x.col(j).array() - s.means(j)).square().mean();
        const double sd = std::sqrt(var);
        s.stds(j) = (sd > 0.0 && std::isfinite(sd)) ? sd : 1.0;
    }
    return s;
}

namespace {

bool forced_extreme_mach(double mach) {
    const double forced[] = {0.30, 0.82, 0.96};
    for (double m : forced) {
        if (std::abs(mach - m) < 1e-12) return true;
    }
    return false;
}

} // namespace

std::map<std::string, SplitLabel> split_dataset(const std::vector<FlowCondition>& conditions,
                                                std::uint64_t seed) {
    // Group by (M, p_i); std::map iteration gives the documented lexical order.
    std::map<std::pair<double, double>, std::vector<const FlowCondition*>> groups;
    for (const auto& c : conditions) {
        groups[{c.mach, c.p_i}].push_back(&c);
    }

    Rng rng(seed);
    std::map<std::string, SplitLabel> out;
    for (auto& [key, members] : groups) {
        if (members.size() != 12) {
            throw ValidationError("split: group (mach=" + format_double(key.first, 6) +
                                  ", p_i=" + format_double(key.second, 6) + ") has " +
                                  std::to_string(members.size()) + " conditions, expected 12");
        }
        std::sort(members.begin(), members.end(),
                  [](const FlowCondition* a, const FlowCondition* b) {
                      return a->aoa_deg < b->aoa_deg;
                  });
        for (const auto* c : members) out[c->id] = SplitLabel::train;

        std::vector<const FlowCondition*> pool = members;
        if (forced_extreme_mach(key.first)) {
            pool.erase(pool.begin());
            pool.pop_back();
        }
        for (int draw = 0; draw < 4; ++draw) {
            const std::size_t pick = rng.index(pool.size());
            out[pool[pick]->id] = SplitLabel::test;
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }
    return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>>
inner_split(const std::vector<std::string>& train_ids, double fraction, std::uint64_t seed) {
    if (train_ids.size() < 2) throw ValidationError("inner split: need at least 2 ids");
    if (!(fraction > 0.0) || !(fraction < 1.0)) {
        throw ValidationError("inner split: fraction must lie in (0, 1)");
    }
    const auto n = train_ids.size();
    const auto n_inner = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<bool> is_inner(n, false);
    for (std::size_t i = 0; i < n_inner; ++i) is_inner[order[i]] = true;

    std::pair<std::vector<std::string>, std::vector<std::string>> result;
    for (std::size_t i = 0; i < n; ++i) {
        (is_inner[i] ? result.first : result.second).push_back(train_ids[i]);
    }
    return result;
}

PointwiseTensors assemble_pointwise(const Dataset& ds, const std::vector<std::string>& ids) {
    const Eigen::Index n_p = ds.geometry.n_p();
    PointwiseTensors t;
    t.x.resize(n_p * static_cast<Eigen::Index>(ids.size()), 9);
    t.y.resize(n_p * static_cast<Eigen::Index>(ids.size()), 4);
    Eigen::Index row = 0;
    for (const auto& id : ids) {
        const FlowCondition& c = ds.condition(id);
        const WallField& f = ds.field(id);
        t.x.block(row, 0, n_p, 3) = ds.geometry.coords;
        t.x.block(row, 3, n_p, 3) = ds.geometry.normals;
        t.x.block(row, 6, n_p, 1).setConstant(c.mach);
        t.x.block(row, 7, n_p, 1).setConstant(c.aoa_deg);
        t.x.block(row, 8, n_p, 1).setConstant(c.p_i);
        t.y.block(row, 0, n_p, 4) = f.values;
        row += n_p;
    }
    return t;
}

GlobalTensors assemble_global(const Dataset& ds, const std::vector<std::string>& ids) {
    GlobalTensors t;
    t.x_g.resize(static_cast<Eigen::Index>(ids.size()), 3);
    t.y_g.reserve(ids.size());
    Eigen::Index row = 0;
    for (const auto& id : ids) {
        const FlowCondition& c = ds.condition(id);
        t.x_g(row, 0) = c.mach;
        t.x_g(row, 1) = c.aoa_deg;
        t.x_g(row, 2) = c.p_i;
        t.y_g.push_back(ds.field(id).values);
        ++row;
    }
    return t;
}

} // namespace wallbench
