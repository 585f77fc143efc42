#include "wallbench/rbf.hpp"

#include "wallbench/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wallbench {
namespace {

double kernel_value(RbfKernel kernel, double shape, double r) {
    const double e = shape * r;
    switch (kernel) {
        case RbfKernel::gaussian: return std::exp(-e * e);
        case RbfKernel::multiquadric: return std::sqrt(1.0 + e * e);
    }
    throw DomainError("unknown RBF kernel");
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              RbfKernel kernel, double shape) {
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
            k(i, j) = kernel_value(kernel, shape, (a.row(i) - b.row(j)).norm());
        }
    }
    return k;
}

} // namespace

std::string to_string(RbfKernel k) {
    return k == RbfKernel::gaussian ? "gaussian" : "multiquadric";
}

RbfKernel rbf_kernel_from_string(const std::string& s) {
    if (s == "gaussian") return RbfKernel::gaussian;
    if (s == "multiquadric") return RbfKernel::multiquadric;
    throw ValidationError("unknown RBF kernel '" + s + "' (expected gaussian or multiquadric)");
}

RbfModel rbf_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, RbfKernel kernel,
                 double shape, double reg) {
    const Eigen::Index m = x.rows();
    const Eigen::Index d = x.cols();
    if (z.rows() != m) throw ValidationError("rbf_fit: x and z row counts differ");
    if (m < d + 2) throw ValidationError("rbf_fit: need at least d + 2 points for the linear tail");
    if (!(shape > 0.0)) throw ValidationError("rbf_fit: shape must be positive");
    if (reg < 0.0) throw ValidationError("rbf_fit: reg must be nonnegative");
    if (!x.allFinite() || !z.allFinite()) throw ValidationError("rbf_fit: non-finite input");

    const Eigen::Index p = d + 1;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + p, m + p);
    a.topLeftCorner(m, m) = kernel_matrix(x, x, kernel, shape);
    a.topLeftCorner(m, m).diagonal().array() += reg;
    a.block(0, m, m, 1).setOnes();
    a.block(0, m + 1, m, d) = x;
    a.block(m, 0, 1, m).setOnes();
    a.block(m + 1, 0, d, m) = x.transpose();

    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m + p, z.cols());
    rhs.topRows(m) = z;

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd sol = lu.solve(rhs);
    const double rhs_norm = rhs.norm();
    const double residual = (a * sol - rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
    if (!sol.allFinite() || residual > 1e-6) {
        throw TrainingError("rbf_fit: interpolation system is singular or ill-conditioned; "
                            "increase reg");
    }

    RbfModel model;
    model.centers = x;
    model.weights = sol.topRows(m);
    model.poly_coeffs = sol.bottomRows(p);
    model.kernel = kernel;
    model.shape = shape;
    model.reg = reg;
    return model;
}

Eigen::MatrixXd rbf_predict(const RbfModel& model, const Eigen::MatrixXd& x_star) {
    if (x_star.cols() != model.centers.cols()) {
        throw ValidationError("rbf_predict: dimension mismatch");
    }
    const Eigen::MatrixXd phi = kernel_matrix(x_star, model.centers, model.kernel, model.shape);
    Eigen::MatrixXd p(x_star.rows(), model.centers.cols() + 1);
    p.col(0).setOnes();
    p.rightCols(model.centers.cols()) = x_star;
    return phi * model.weights + p * model.poly_coeffs;
}

std::vector<double> default_shape_candidates(const Eigen::MatrixXd& x) {
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(x.rows()) * (static_cast<std::size_t>(x.rows()) - 1) / 2);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
            dists.push_back((x.row(i) - x.row(j)).norm());
        }
    }
    double median = 1.0;
    if (!dists.empty()) {
        const auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
        std::nth_element(dists.begin(), mid, dists.end());
        if (*mid > 0.0) median = *mid;
    }
    const double e0 = 1.0 / median;
    return {0.25 * e0, 0.5 * e0, e0, 2.0 * e0, 4.0 * e0};
}

RbfModel rbf_fit_auto(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, RbfKernel kernel,
                      std::vector<double> shape_candidates, double reg) {
    if (shape_candidates.empty()) shape_candidates = default_shape_candidates(x);
    std::sort(shape_candidates.begin(), shape_candidates.end());

    const Eigen::Index m = x.rows();
    std::vector<Eigen::Index> fit_rows, val_rows;
    for (Eigen::Index i = 0; i < m; ++i) {
        ((i % 4 == 3) ? val_rows : fit_rows).push_back(i);
    }

    // Too few points for a holdout: fit directly with the median-scale shape.
    if (val_rows.empty() || static_cast<Eigen::Index>(fit_rows.size()) < x.cols() + 2) {
        return rbf_fit(x, z, kernel, shape_candidates[shape_candidates.size() / 2], reg);
    }

    Eigen::MatrixXd x_fit(static_cast<Eigen::Index>(fit_rows.size()), x.cols());
    Eigen::MatrixXd z_fit(static_cast<Eigen::Index>(fit_rows.size()), z.cols());
    Eigen::MatrixXd x_val(static_cast<Eigen::Index>(val_rows.size()), x.cols());
    Eigen::MatrixXd z_val(static_cast<Eigen::Index>(val_rows.size()), z.cols());
    for (std::size_t i = 0; i < fit_rows.size(); ++i) {
        x_fit.row(static_cast<Eigen::Index>(i)) = x.row(fit_rows[i]);
        z_fit.row(static_cast<Eigen::Index>(i)) = z.row(fit_rows[i]);
    }
    for (std::size_t i = 0; i < val_rows.size(); ++i) {
        x_val.row(static_cast<Eigen::Index>(i)) = x.row(val_rows[i]);
        z_val.row(static_cast<Eigen::Index>(i)) = z.row(val_rows[i]);
    }

    std::vector<std::pair<double, double>> scored; // (score, shape), insertion-ordered
    for (double shape : shape_candidates) {
        try {
            const RbfModel trial = rbf_fit(x_fit, z_fit, kernel, shape, reg);
            const double err = (rbf_predict(trial, x_val) - z_val).squaredNorm();
            scored.emplace_back(std::isfinite(err) ? err : std::numeric_limits<double>::infinity(),
                                shape);
        } catch (const TrainingError&) {
            scored.emplace_back(std::numeric_limits<double>::infinity(), shape);
        }
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const auto& [score, shape] : scored) {
        (void)score;
        try {
            return rbf_fit(x, z, kernel, shape, reg);
        } catch (const TrainingError&) {
            // fall through to the next-best shape
        }
    }
    throw TrainingError("rbf_fit_auto: every candidate shape produced a singular system; "
                        "increase reg");
}

} // namespace wallbench
