#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace wallbench {

/// Kind-tagged model container. Serialized as a fixed magic tag, a length-
/// prefixed JSON header (kind, ordered meta strings, tensor shapes), then the
/// tensors as raw little-endian 64-bit rows. Save/load round-trips bitwise.
struct ModelFile {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;
};

void save_model(const ModelFile& m, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

/// Meta lookup; a missing key is a ValidationError naming it.
const std::string& meta_value(const ModelFile& m, const std::string& key);

/// Tensor lookup by name; missing is a ValidationError naming it.
const Eigen::MatrixXd& tensor_value(const ModelFile& m, const std::string& name);

} // namespace wallbench
