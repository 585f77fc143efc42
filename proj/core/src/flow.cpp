#include "wallbench/flow.hpp"

#include "wallbench/error.hpp"
#include "wallbench/text.hpp"

#include <cmath>
#include <set>

namespace wallbench {

GasModel GasModel::air_defaults() {
    GasModel gas;
    FlowCondition anchor;
    anchor.mach = 0.85;
    anchor.p_i = 2.0e5;
    gas.l_ref = calibrate_reference_length(gas, 5.0e6, anchor);
    return gas;
}

void GasModel::validate() const {
    if (!(gamma > 1.0)) throw DomainError("gas model: gamma must exceed 1");
    const double fields[] = {r_gas, t_ref, mu_ref, s_suth, t_i, l_ref};
    for (double v : fields) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("gas model: all constants must be finite and positive");
        }
    }
}

double static_temperature(double t_i, double mach, const GasModel& gas) {
    if (!std::isfinite(t_i) || !std::isfinite(mach) || t_i <= 0.0 || mach < 0.0) {
        throw DomainError("static_temperature: requires finite t_i > 0 and mach >= 0");
    }
    if (mach == 0.0) return t_i;
    return t_i / (1.0 + 0.5 * (gas.gamma - 1.0) * mach * mach);
}

double sutherland_viscosity(double t, const GasModel& gas) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("sutherland_viscosity: requires finite t > 0");
    }
    const double ratio = t / gas.t_ref;
    return gas.mu_ref * ratio * std::sqrt(ratio) * (gas.t_ref + gas.s_suth) / (t + gas.s_suth);
}

double reynolds(const FlowCondition& cond, const GasModel& gas) {
    gas.validate();
    if (cond.mach < 0.0 || !std::isfinite(cond.mach)) {
        throw DomainError("reynolds: mach must be finite and >= 0");
    }
    if (cond.mach == 0.0) return 0.0;
    const double t = static_temperature(gas.t_i, cond.mach, gas);
    const double mu = sutherland_viscosity(t, gas);
    const double base = 1.0 + 0.5 * (gas.gamma - 1.0) * cond.mach * cond.mach;
    const double expo = (1.0 - 2.0 * gas.gamma) / (2.0 * (gas.gamma - 1.0));
    return std::sqrt(gas.gamma / gas.r_gas) * cond.p_i * cond.mach * gas.l_ref /
           (std::sqrt(gas.t_i) * mu) * std::pow(base, expo);
}

double calibrate_reference_length(const GasModel& gas_without_l, double target_re,
                                  const FlowCondition& at) {
    if (!(target_re > 0.0)) throw DomainError("calibrate_reference_length: target_re must be positive");
    GasModel unit = gas_without_l;
    unit.l_ref = 1.0;
    const double re_per_metre = reynolds(at, unit);
    if (!(re_per_metre > 0.0) || !std::isfinite(re_per_metre)) {
        throw DomainError("calibrate_reference_length: Re vanishes at the calibration point (mach or p_i is zero)");
    }
    return target_re / re_per_metre;
}

std::string make_condition_id(double mach, double aoa_deg, double p_i) {
    return "m" + format_double(mach, 6) + "_a" + format_double(aoa_deg, 6) + "_p" +
           format_double(p_i, 6);
}

DoeSpec DoeSpec::defaults() {
    DoeSpec spec;
    spec.mach_list = {0.30, 0.50, 0.70, 0.76, 0.80, 0.82, 0.84,
                      0.85, 0.86, 0.88, 0.90, 0.92, 0.96};
    spec.p_i_list = {1.0e5, 2.0e5, 4.0e5};
    spec.aoa_table.reserve(spec.mach_list.size());
    for (double m : spec.mach_list) {
        double half_range;
        if (m <= 0.5) {
            half_range = 15.0;
        } else if (m >= 0.88) {
            half_range = 8.0;
        } else {
            half_range = 15.0 + (m - 0.5) * (8.0 - 15.0) / (0.88 - 0.5);
        }
        std::vector<double> row(12);
        for (int j = 0; j < 12; ++j) {
            row[j] = -half_range + 2.0 * half_range * j / 11.0;
        }
        spec.aoa_table.push_back(std::move(row));
    }
    return spec;
}

void DoeSpec::validate() const {
    if (mach_list.empty()) throw ValidationError("DoE spec: mach_list is empty");
    if (p_i_list.empty()) throw ValidationError("DoE spec: p_i_list is empty");
    if (aoa_table.size() != mach_list.size()) {
        throw ValidationError("DoE spec: aoa_table must have one row per Mach number");
    }
    std::set<double> mach_seen(mach_list.begin(), mach_list.end());
    if (mach_seen.size() != mach_list.size()) {
        throw ValidationError("DoE spec: mach_list has duplicate entries");
    }
    std::set<double> p_seen(p_i_list.begin(), p_i_list.end());
    if (p_seen.size() != p_i_list.size()) {
        throw ValidationError("DoE spec: p_i_list has duplicate entries");
    }
    for (double p : p_i_list) {
        if (!(p > 0.0)) throw ValidationError("DoE spec: stagnation pressures must be positive");
    }
    const std::size_t row_len = aoa_table.front().size();
    for (std::size_t i = 0; i < aoa_table.size(); ++i) {
        const auto& row = aoa_table[i];
        if (row.empty()) throw ValidationError("DoE spec: empty AoA row");
        if (row.size() != row_len) {
            throw ValidationError("DoE spec: AoA rows must all have the same length");
        }
        for (std::size_t j = 1; j < row.size(); ++j) {
            if (!(row[j] > row[j - 1])) {
                throw ValidationError("DoE spec: AoA row for mach " + format_double(mach_list[i], 6) +
                                      " is not strictly increasing");
            }
        }
    }
}

std::vector<FlowCondition> generate_doe(const DoeSpec& spec) {
    spec.validate();
    std::vector<FlowCondition> out;
    out.reserve(spec.mach_list.size() * spec.aoa_table.front().size() * spec.p_i_list.size());
    for (std::size_t i = 0; i < spec.mach_list.size(); ++i) {
        for (double aoa : spec.aoa_table[i]) {
            for (double p : spec.p_i_list) {
                FlowCondition c;
                c.mach = spec.mach_list[i];
                c.aoa_deg = aoa;
                c.p_i = p;
                c.id = make_condition_id(c.mach, c.aoa_deg, c.p_i);
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

double flow_weight(double aoa_deg) {
    return (aoa_deg > -10.0 && aoa_deg < 10.0) ? 1.0 : 0.5;
}

double flow_weight(const FlowCondition& cond) { return flow_weight(cond.aoa_deg); }

} // namespace wallbench
