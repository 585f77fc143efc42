#include "wallbench/oracle.hpp"

#include "wallbench/error.hpp"
#include "wallbench/rng.hpp"
#include "wallbench/text.hpp"

#include <algorithm>
#include <cmath>

namespace wallbench {
namespace {

// Wing shell: span, leading-edge sweep slope, chord taper, half-thickness.
// h(s) is strictly positive so the surface side is always recoverable from
// the sign of z.
constexpr double kSpan = 3.0;
constexpr double kSweep = 0.6;
constexpr double kPi = 3.14159265358979323846;

double chord(double t) { return 1.0 - 0.5 * t; }
double half_thickness(double s) { return 0.06 + 0.10 * std::sin(kPi * s); }
double half_thickness_ds(double s) { return 0.10 * kPi * std::cos(kPi * s); }

struct SurfaceParams {
    double s;
    double t;
    double side; // +1 upper, -1 lower
};

SurfaceParams recover_params(double x, double y, double z) {
    SurfaceParams p;
    p.t = std::clamp(y / kSpan, 0.0, 1.0);
    p.s = std::clamp((x - kSweep * p.t) / chord(p.t), 0.0, 1.0);
    p.side = (z >= 0.0) ? 1.0 : -1.0;
    return p;
}

} // namespace

void OracleConfig::validate() const {
    if (n_p < 8) throw ValidationError("oracle config: n_p must be at least 8");
    if (!(shock_sharpness > 0.0)) throw ValidationError("oracle config: shock_sharpness must be positive");
    if (noise_amplitude < 0.0) throw ValidationError("oracle config: noise_amplitude must be nonnegative");
}

SurfaceGeometry generate_geometry(const OracleConfig& cfg) {
    cfg.validate();
    SurfaceGeometry geo;
    geo.coords.resize(cfg.n_p, 3);
    geo.normals.resize(cfg.n_p, 3);
    Rng rng(cfg.seed);
    for (Eigen::Index i = 0; i < cfg.n_p; ++i) {
        const double side = (i % 2 == 0) ? 1.0 : -1.0;
        const double s = rng.uniform();
        const double t = rng.uniform();
        const double c = chord(t);
        const double h = half_thickness(s);

        geo.coords(i, 0) = kSweep * t + s * c;
        geo.coords(i, 1) = kSpan * t;
        geo.coords(i, 2) = side * h * c;

        // Tangents: d/ds = (c, 0, side h' c), d/dt = (sweep + s c', span, side h c')
        // with c' = -1/2. Cross product has n_z = c*span > 0; orient outward.
        const double hp = half_thickness_ds(s);
        const double rt_x = kSweep - 0.5 * s;
        const double rt_z = -0.5 * side * h;
        Eigen::Vector3d n;
        n(0) = -side * hp * c * kSpan;          // rs_y*rt_z - rs_z*rt_y
        n(1) = side * hp * c * rt_x - c * rt_z; // rs_z*rt_x - rs_x*rt_z
        n(2) = c * kSpan;                       // rs_x*rt_y - rs_y*rt_x
        n.normalize();
        geo.normals.row(i) = side * n;
    }
    return geo;
}

WallField analytic_fields(const SurfaceGeometry& geo, const FlowCondition& cond,
                          const GasModel& gas, const OracleConfig& cfg) {
    cfg.validate();
    const double mach = cond.mach;
    const double a = cond.aoa_deg / 15.0; // normalized AoA
    const double rho_fac = cond.p_i / 2.0e5;
    const double re = reynolds(cond, gas);
    const double cf_scale = std::pow(re, cfg.cf_scale_exponent);

    // Shock front on the upper surface only, switched on continuously above
    // M = 0.7; position advances with Mach and AoA.
    const double shock_amp = (mach > 0.7) ? -0.5 * std::pow((mach - 0.7) / 0.26, 2.0) : 0.0;
    const double s_shock = 0.25 + 1.4 * (mach - 0.7) + 0.18 * a;

    WallField f;
    f.condition_id = cond.id;
    f.values.resize(geo.n_p(), 4);
    for (Eigen::Index i = 0; i < geo.n_p(); ++i) {
        const SurfaceParams p =
            recover_params(geo.coords(i, 0), geo.coords(i, 1), geo.coords(i, 2));
        const double s = p.s, t = p.t, side = p.side;
        const double sps = std::sin(kPi * s);

        double cp = 0.3 - 1.15 * sps * (1.0 - 0.35 * t)
                    - 0.55 * side * a * (1.0 - s) * (1.0 - 0.3 * t)
                    - 0.5 * mach * mach * sps
                    + 0.1 * (rho_fac - 1.0) * sps * (1.0 - 0.5 * t);
        if (side > 0.0 && shock_amp != 0.0) {
            cp += shock_amp * std::tanh(cfg.shock_sharpness * (s - s_shock)) * (1.0 - 0.4 * t);
        }

        const double cfx = cf_scale * (2.8 + 2.0 * (1.0 - s) * (1.0 - s) * (1.0 - 0.3 * t)
                                       + 0.25 * side * a * (1.0 - s));
        const double cfy = cf_scale * (1.0 + 1.5 * t * (1.0 - 0.5 * s)
                                       + 0.13 * side * a * t);
        const double cfz = cf_scale * side * (0.8 + 1.2 * sps * (1.0 - 0.4 * t)
                                              + 0.18 * side * a * (1.0 - s));

        f.values(i, 0) = cp;
        f.values(i, 1) = cfx;
        f.values(i, 2) = cfy;
        f.values(i, 3) = cfz;
    }

    if (cfg.noise_amplitude > 0.0) {
        Rng rng(derive_seed(cfg.seed, fnv1a64(cond.id)));
        for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
            for (Eigen::Index j = 0; j < 4; ++j) {
                f.values(i, j) += cfg.noise_amplitude * rng.normal();
            }
        }
    }
    return f;
}

Dataset generate_dataset(const DoeSpec& doe, const OracleConfig& cfg, const GasModel& gas,
                         std::uint64_t seed) {
    Dataset ds;
    ds.geometry = generate_geometry(cfg);
    ds.conditions = generate_doe(doe);
    for (const auto& c : ds.conditions) {
        ds.fields[c.id] = analytic_fields(ds.geometry, c, gas, cfg);
    }
    ds.split = split_dataset(ds.conditions, seed);
    return ds;
}

} // namespace wallbench
