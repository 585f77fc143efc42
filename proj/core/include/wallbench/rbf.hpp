#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wallbench {

enum class RbfKernel { gaussian, multiquadric };

std::string to_string(RbfKernel k);
RbfKernel rbf_kernel_from_string(const std::string& s);

/// Scattered-data interpolant with a linear polynomial tail; the tail makes
/// constant and affine targets reproduced exactly.
struct RbfModel {
    Eigen::MatrixXd centers;     // m x d
    Eigen::MatrixXd weights;     // m x q
    Eigen::MatrixXd poly_coeffs; // (d+1) x q, row 0 is the constant term
    RbfKernel kernel = RbfKernel::gaussian;
    double shape = 1.0;
    double reg = 0.0;
};

/// Solves the augmented interpolation system
///   [K + reg*I, P; P^T, 0] [w; c] = [z; 0],  P = [1 | X].
/// Throws TrainingError suggesting reg > 0 when the system is singular.
RbfModel rbf_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, RbfKernel kernel,
                 double shape, double reg);

Eigen::MatrixXd rbf_predict(const RbfModel& model, const Eigen::MatrixXd& x_star);

/// Shape grid scaled by the inverse median pairwise distance of x.
std::vector<double> default_shape_candidates(const Eigen::MatrixXd& x);

/// Picks the shape by a deterministic 75/25 holdout (every 4th row) over the
/// candidates (default grid when empty), then refits on all rows. Ties and
/// failed candidates resolve toward smaller shapes.
RbfModel rbf_fit_auto(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z, RbfKernel kernel,
                      std::vector<double> shape_candidates, double reg);

} // namespace wallbench
