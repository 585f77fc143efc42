#pragma once

#include "wallbench/flow.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace wallbench {

/// Fixed wall point cloud; point ids are 0..n_p-1 in row order.
struct SurfaceGeometry {
    Eigen::MatrixXd coords;  // n_p x 3, metres
    Eigen::MatrixXd normals; // n_p x 3, unit vectors

    Eigen::Index n_p() const { return coords.rows(); }

    /// Throws ValidationError on shape mismatch or non-unit normals.
    void validate() const;
};

/// One wall snapshot: per-point (Cp, Cfx, Cfy, Cfz) for one condition.
struct WallField {
    std::string condition_id;
    Eigen::MatrixXd values; // n_p x 4

    void validate(Eigen::Index n_p) const;
};

enum class SplitLabel { train, test };

std::string to_string(SplitLabel label);
SplitLabel split_label_from_string(const std::string& s);

/// Geometry + conditions + snapshots + split labels. Fields may be absent
/// for conditions whose truth is hidden (challenge mode).
struct Dataset {
    SurfaceGeometry geometry;
    std::vector<FlowCondition> conditions;
    std::map<std::string, WallField> fields;
    std::map<std::string, SplitLabel> split;

    const FlowCondition& condition(const std::string& id) const;
    bool has_field(const std::string& id) const { return fields.count(id) != 0; }
    const WallField& field(const std::string& id) const;

    /// Ids carrying the given label, in conditions order.
    std::vector<std::string> ids_with_label(SplitLabel label) const;
    std::vector<std::string> train_ids() const { return ids_with_label(SplitLabel::train); }
    std::vector<std::string> test_ids() const { return ids_with_label(SplitLabel::test); }

    /// Throws ValidationError on any structural inconsistency.
    void validate() const;
};

/// Per-column z-score parameters; degenerate columns keep std 1.
struct Scaler {
    Eigen::VectorXd means;
    Eigen::VectorXd stds;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd invert(const Eigen::MatrixXd& x_scaled) const;
};

/// Population-std z-score fitted per column.
Scaler fit_scaler(const Eigen::MatrixXd& x);

/// Quasi-random split: per (M, p_i) group of 12 AoA, 4 test and 8 train.
/// For M in {0.30, 0.82, 0.96} the two extreme AoA are forced into train
/// before drawing. Groups are processed in (M, p_i) lexical order; the 4
/// test members are drawn by index without replacement from one seeded
/// generator shared across groups.
std::map<std::string, SplitLabel> split_dataset(const std::vector<FlowCondition>& conditions,
                                                std::uint64_t seed);

/// Partitions train ids into round(fraction*n) inner-train ids and the rest
/// for validation; both keep the input's relative order.
std::pair<std::vector<std::string>, std::vector<std::string>>
inner_split(const std::vector<std::string>& train_ids, double fraction, std::uint64_t seed);

struct PointwiseTensors {
    Eigen::MatrixXd x; // n_p*|ids| x 9: (x, y, z, nx, ny, nz, M, AoA, p_i)
    Eigen::MatrixXd y; // n_p*|ids| x 4: (Cp, Cfx, Cfy, Cfz)
};

struct GlobalTensors {
    Eigen::MatrixXd x_g;               // |ids| x 3: (M, AoA, p_i)
    std::vector<Eigen::MatrixXd> y_g;  // per id: n_p x 4
};

/// Rows are condition-major then point-id, so y_g is a pure reshape of y.
PointwiseTensors assemble_pointwise(const Dataset& ds, const std::vector<std::string>& ids);
GlobalTensors assemble_global(const Dataset& ds, const std::vector<std::string>& ids);

} // namespace wallbench
