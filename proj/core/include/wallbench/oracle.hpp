#pragma once

#include "wallbench/dataset.hpp"
#include "wallbench/flow.hpp"

#include <cstdint>

namespace wallbench {

/// Knobs of the analytic stand-in dataset. Defaults give the shipped
/// desk-scale benchmark: 2000 points, shock-like Cp fronts above M=0.7,
/// exact Re^(-0.2) friction scaling, no noise.
struct OracleConfig {
    Eigen::Index n_p = 2000;
    std::uint64_t seed = 42;
    double shock_sharpness = 25.0;
    double cf_scale_exponent = -0.2;
    double noise_amplitude = 0.0;

    void validate() const;
};

/// Two lofted wing-like sheets sampled at seeded random (s, t) parameters;
/// the map (s, t, side) -> (x, y, z) is invertible so field evaluation can
/// recover the surface parameters from coordinates alone.
SurfaceGeometry generate_geometry(const OracleConfig& cfg);

/// Closed-form wall fields; the exact formulas are documented in README.md.
/// Deterministic: identical inputs give bit-identical outputs.
WallField analytic_fields(const SurfaceGeometry& geo, const FlowCondition& cond,
                          const GasModel& gas, const OracleConfig& cfg);

/// Full synthetic dataset: geometry, DoE conditions, fields for every
/// condition, and a split from split_dataset(seed).
Dataset generate_dataset(const DoeSpec& doe, const OracleConfig& cfg, const GasModel& gas,
                         std::uint64_t seed);

} // namespace wallbench
