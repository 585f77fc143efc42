#pragma once

#include <string>
#include <vector>

namespace wallbench {

/// One point of the design of experiments: the parameter vector (M, AoA, p_i).
struct FlowCondition {
    std::string id;
    double mach = 0.0;
    double aoa_deg = 0.0;
    double p_i = 0.0; // stagnation pressure [Pa]
};

/// Gas constants entering the Reynolds/Sutherland relations plus the fixed
/// stagnation temperature and reference length of the test campaign.
struct GasModel {
    double gamma = 1.4;        // ratio of specific heats
    double r_gas = 287.058;    // specific gas constant [J/(kg K)]
    double t_ref = 273.15;     // Sutherland reference temperature [K]
    double mu_ref = 1.716e-5;  // viscosity at t_ref [Pa s]
    double s_suth = 110.4;     // Sutherland constant [K]
    double t_i = 322.2;        // stagnation temperature [K]
    double l_ref = 1.0;        // reference length [m]

    /// Standard air, l_ref calibrated so Re(M=0.85, p_i=2e5) = 5e6.
    static GasModel air_defaults();

    /// Throws DomainError unless all fields are positive and gamma > 1.
    void validate() const;
};

/// The (Mach, AoA, p_i) grid. aoa_table rows parallel mach_list.
struct DoeSpec {
    std::vector<double> mach_list;
    std::vector<std::vector<double>> aoa_table;
    std::vector<double> p_i_list;

    /// 13 Mach x 12 evenly spaced AoA x 3 pressures = 468 conditions.
    /// AoA range is [-15,15] up to M=0.5, [-8,8] from M=0.88, linear in M between.
    static DoeSpec defaults();

    /// Throws ValidationError naming the violated invariant.
    void validate() const;
};

/// Static temperature T = t_i / (1 + (gamma-1)/2 M^2).
double static_temperature(double t_i, double mach, const GasModel& gas);

/// Sutherland's law: mu_ref (t/t_ref)^(3/2) (t_ref + S)/(t + S).
double sutherland_viscosity(double t, const GasModel& gas);

/// Chord Reynolds number from stagnation conditions:
/// Re = sqrt(gamma/r) p_i M l_ref / (sqrt(t_i) mu(T)) (1+(gamma-1)/2 M^2)^((1-2 gamma)/(2(gamma-1))).
/// Exactly linear in p_i and in l_ref.
double reynolds(const FlowCondition& cond, const GasModel& gas);

/// Solves Re(at, gas with l_ref = L) = target_re for L in closed form.
double calibrate_reference_length(const GasModel& gas_without_l, double target_re,
                                  const FlowCondition& at);

/// Deterministic id string "m<M>_a<AoA>_p<p_i>" with 6 significant digits.
std::string make_condition_id(double mach, double aoa_deg, double p_i);

/// Expands the grid; Mach-major, then AoA, then p_i.
std::vector<FlowCondition> generate_doe(const DoeSpec& spec);

/// Scoring weight: 1.0 on the open interval AoA in (-10, 10), 0.5 otherwise.
double flow_weight(double aoa_deg);
double flow_weight(const FlowCondition& cond);

} // namespace wallbench
