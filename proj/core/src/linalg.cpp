#include "wallbench/linalg.hpp"

#include "wallbench/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace wallbench {

SvdResult svd(const Eigen::MatrixXd& a) {
    if (!a.allFinite()) throw DomainError("svd: non-finite input");
    Eigen::BDCSVD<Eigen::MatrixXd> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult r;
    r.u = solver.matrixU();
    r.sigma = solver.singularValues();
    r.vt = solver.matrixV().transpose();
    return r;
}

EigResult sym_eig(const Eigen::MatrixXd& b) {
    if (!b.allFinite()) throw DomainError("sym_eig: non-finite input");
    if (b.rows() != b.cols()) throw DomainError("sym_eig: matrix must be square");
    const double scale = b.norm();
    if ((b - b.transpose()).norm() > 1e-9 * (scale > 0.0 ? scale : 1.0)) {
        throw DomainError("sym_eig: input is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success) throw DomainError("sym_eig: eigensolver failed");

    // Eigen returns ascending order; flip to descending.
    const Eigen::Index n = b.rows();
    EigResult r;
    r.values.resize(n);
    r.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r.values(i) = solver.eigenvalues()(n - 1 - i);
        r.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return r;
}

} // namespace wallbench
