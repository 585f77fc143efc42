#pragma once

#include "wallbench/dataset.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wallbench {

/// Directory layout: conditions.csv, geometry.csv, fields/<id>.csv.
/// All doubles are written with 17 significant digits so save/load
/// round-trips 64-bit values bitwise. The fixed header lines double as
/// the format version; a mismatch is rejected.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

/// Submission layout: fields/<id>.csv, one per test condition.
void save_submission(const std::map<std::string, WallField>& predictions,
                     const std::filesystem::path& dir);

/// Strict challenge-side validation: the files must cover exactly test_ids,
/// each with n_p finite rows in point-id order. Violations raise
/// SubmissionError naming the offending id.
std::map<std::string, WallField> load_submission(const std::filesystem::path& dir,
                                                 const std::vector<std::string>& test_ids,
                                                 Eigen::Index n_p);

} // namespace wallbench
