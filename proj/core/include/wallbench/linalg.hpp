#pragma once

#include <Eigen/Core>

namespace wallbench {

struct SvdResult {
    Eigen::MatrixXd u;     // n x k
    Eigen::VectorXd sigma; // k, descending nonnegative
    Eigen::MatrixXd vt;    // k x m
};

/// Thin SVD, k = min(n, m). Throws DomainError on non-finite input.
SvdResult svd(const Eigen::MatrixXd& a);

struct EigResult {
    Eigen::VectorXd values;  // descending
    Eigen::MatrixXd vectors; // orthonormal columns, matching order
};

/// Symmetric eigendecomposition; input asymmetry beyond 1e-9 relative is rejected.
EigResult sym_eig(const Eigen::MatrixXd& b);

} // namespace wallbench
