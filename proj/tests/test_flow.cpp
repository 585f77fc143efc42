#include <doctest.h>

#include "wallbench/error.hpp"
#include "wallbench/flow.hpp"

#include <cmath>
#include <set>

using namespace wallbench;

namespace {

FlowCondition make_cond(double mach, double aoa, double p_i) {
    FlowCondition c;
    c.mach = mach;
    c.aoa_deg = aoa;
    c.p_i = p_i;
    c.id = make_condition_id(mach, aoa, p_i);
    return c;
}

} // namespace

TEST_CASE("static temperature identity at mach 0") {
    GasModel gas;
    CHECK(static_temperature(300.0, 0.0, gas) == 300.0);
    CHECK(static_temperature(1.7, 0.0, gas) == 1.7);
    CHECK(static_temperature(322.2, 0.0, gas) == 322.2);
}

TEST_CASE("static temperature closed forms") {
    GasModel gas;
    CHECK(static_temperature(300.0, 1.0, gas) == doctest::Approx(250.0).epsilon(1e-14));
    // 322.2 / (1 + 0.2 * 0.85^2), evaluated independently at high precision.
    CHECK(static_temperature(322.2, 0.85, gas) ==
          doctest::Approx(281.52031454783748).epsilon(1e-14));
}

TEST_CASE("static temperature rejects bad inputs") {
    GasModel gas;
    CHECK_THROWS_AS(static_temperature(std::nan(""), 0.5, gas), DomainError);
    CHECK_THROWS_AS(static_temperature(300.0, std::nan(""), gas), DomainError);
    CHECK_THROWS_AS(static_temperature(-5.0, 0.5, gas), DomainError);
    CHECK_THROWS_AS(static_temperature(300.0, -0.1, gas), DomainError);
}

TEST_CASE("sutherland viscosity reference point and doubling") {
    GasModel gas;
    CHECK(sutherland_viscosity(gas.t_ref, gas) == gas.mu_ref);
    // t = 2 * t_ref, evaluated independently at high precision.
    CHECK(sutherland_viscosity(546.30, gas) ==
          doctest::Approx(2.8347662126740132e-5).epsilon(1e-14));
    CHECK(sutherland_viscosity(400.0, gas) > sutherland_viscosity(300.0, gas));
}

TEST_CASE("sutherland viscosity strictly increasing on 100..1000 K") {
    GasModel gas;
    double prev = sutherland_viscosity(100.0, gas);
    for (int t = 110; t <= 1000; t += 10) {
        const double mu = sutherland_viscosity(static_cast<double>(t), gas);
        CHECK(mu > prev);
        prev = mu;
    }
    CHECK_THROWS_AS(sutherland_viscosity(0.0, gas), DomainError);
    CHECK_THROWS_AS(sutherland_viscosity(-10.0, gas), DomainError);
}

TEST_CASE("reynolds vanishes at mach 0 and is linear in p_i and l_ref") {
    GasModel gas = GasModel::air_defaults();
    CHECK(reynolds(make_cond(0.0, 0.0, 2e5), gas) == 0.0);

    const double re1 = reynolds(make_cond(0.85, 2.0, 1e5), gas);
    const double re2 = reynolds(make_cond(0.85, 2.0, 2e5), gas);
    const double re4 = reynolds(make_cond(0.85, 2.0, 4e5), gas);
    CHECK(re2 / re1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(re4 / re1 == doctest::Approx(4.0).epsilon(1e-12));

    GasModel doubled = gas;
    doubled.l_ref *= 2.0;
    CHECK(reynolds(make_cond(0.85, 2.0, 2e5), doubled) / re2 ==
          doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("calibrated air model hits the published Reynolds anchors") {
    GasModel gas = GasModel::air_defaults();
    // Closed-form inversion evaluated independently at high precision.
    CHECK(gas.l_ref == doctest::Approx(0.1799676727854932).epsilon(1e-12));
    CHECK(reynolds(make_cond(0.85, 0.0, 2e5), gas) == doctest::Approx(5.0e6).epsilon(1e-3));
    CHECK(reynolds(make_cond(0.85, 0.0, 1e5), gas) == doctest::Approx(2.5e6).epsilon(1e-3));
    CHECK(reynolds(make_cond(0.85, 0.0, 4e5), gas) == doctest::Approx(1.0e7).epsilon(1e-3));
}

TEST_CASE("calibrate_reference_length round-trips and scales") {
    GasModel gas;
    const FlowCondition at = make_cond(0.85, 0.0, 2e5);
    const double l1 = calibrate_reference_length(gas, 5e6, at);
    GasModel with_l = gas;
    with_l.l_ref = l1;
    CHECK(reynolds(at, with_l) == doctest::Approx(5e6).epsilon(1e-9));

    const double l2 = calibrate_reference_length(gas, 1e7, at);
    CHECK(l2 / l1 == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(calibrate_reference_length(gas, 5e6, make_cond(0.0, 0.0, 2e5)),
                    DomainError);
    CHECK_THROWS_AS(calibrate_reference_length(gas, -1.0, at), DomainError);
}

TEST_CASE("default DoE has 468 conditions with the documented AoA ranges") {
    const DoeSpec spec = DoeSpec::defaults();
    spec.validate();
    const auto conditions = generate_doe(spec);
    CHECK(conditions.size() == 468);

    std::set<std::string> ids;
    for (const auto& c : conditions) ids.insert(c.id);
    CHECK(ids.size() == 468);

    double lo03 = 1e30, hi03 = -1e30, lo90 = 1e30, hi90 = -1e30;
    for (const auto& c : conditions) {
        if (c.mach == 0.30) {
            lo03 = std::min(lo03, c.aoa_deg);
            hi03 = std::max(hi03, c.aoa_deg);
        }
        if (c.mach == 0.90) {
            lo90 = std::min(lo90, c.aoa_deg);
            hi90 = std::max(hi90, c.aoa_deg);
        }
    }
    CHECK(lo03 == doctest::Approx(-15.0));
    CHECK(hi03 == doctest::Approx(15.0));
    CHECK(lo90 == doctest::Approx(-8.0));
    CHECK(hi90 == doctest::Approx(8.0));
}

TEST_CASE("generate_doe is deterministic") {
    const DoeSpec spec = DoeSpec::defaults();
    const auto a = generate_doe(spec);
    const auto b = generate_doe(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].mach == b[i].mach);
        CHECK(a[i].aoa_deg == b[i].aoa_deg);
        CHECK(a[i].p_i == b[i].p_i);
    }
}

TEST_CASE("malformed DoE specs are rejected with a named invariant") {
    DoeSpec spec = DoeSpec::defaults();
    spec.mach_list.clear();
    spec.aoa_table.clear();
    CHECK_THROWS_AS(generate_doe(spec), ValidationError);

    spec = DoeSpec::defaults();
    spec.aoa_table[3][5] = spec.aoa_table[3][4]; // break strict monotonicity
    CHECK_THROWS_AS(generate_doe(spec), ValidationError);

    spec = DoeSpec::defaults();
    spec.aoa_table.pop_back();
    CHECK_THROWS_AS(generate_doe(spec), ValidationError);

    spec = DoeSpec::defaults();
    spec.p_i_list = {1e5, 1e5};
    CHECK_THROWS_AS(generate_doe(spec), ValidationError);
}

TEST_CASE("flow weight boundary behaviour") {
    CHECK(flow_weight(3.0) == 1.0);
    CHECK(flow_weight(10.0) == 0.5);
    CHECK(flow_weight(-10.0) == 0.5);
    CHECK(flow_weight(-15.0) == 0.5);
    CHECK(flow_weight(9.9999) == 1.0);
    CHECK(flow_weight(-9.9999) == 1.0);
}

TEST_CASE("flow weights partition the default DoE") {
    const auto conditions = generate_doe(DoeSpec::defaults());
    int full = 0, reduced = 0;
    for (const auto& c : conditions) {
        const double w = flow_weight(c);
        REQUIRE((w == 1.0 || w == 0.5));
        (w == 1.0 ? full : reduced) += 1;
    }
    CHECK(full + reduced == 468);
    CHECK(full > 0);
    CHECK(reduced > 0);
}

TEST_CASE("gas model validation") {
    GasModel gas;
    CHECK_NOTHROW(gas.validate());
    gas.gamma = 1.0;
    CHECK_THROWS_AS(gas.validate(), DomainError);
    gas = GasModel{};
    gas.mu_ref = 0.0;
    CHECK_THROWS_AS(gas.validate(), DomainError);
}
