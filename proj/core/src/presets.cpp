#include "wallbench/presets.hpp"

namespace wallbench {

std::vector<int> reference_pointwise_hidden() { return {166, 235, 248, 81, 72}; }
std::vector<int> reference_lambda_geo_hidden() { return {107, 116, 236, 139}; }
std::vector<int> reference_lambda_cond_hidden() { return {240, 179, 114}; }
std::vector<int> reference_lambda_trunk_hidden() { return {230, 162, 124}; }
std::vector<int> reference_global_hidden() { return {75, 120, 1226, 16490}; }

std::array<int, 4> reference_knn_k() { return {7, 6, 9, 6}; }
std::array<int, 4> reference_isomap_k_back() { return {7, 7, 12, 9}; }
std::array<int, 4> reference_pod_ranks() { return {261, 277, 268, 256}; }

std::vector<int> default_pointwise_hidden() { return {64, 64, 32}; }
std::vector<int> default_lambda_geo_hidden() { return {32, 24}; }
std::vector<int> default_lambda_cond_hidden() { return {16, 12}; }
std::vector<int> default_lambda_trunk_hidden() { return {48, 32}; }
std::vector<int> default_global_hidden() { return {64, 64}; }

} // namespace wallbench
