#pragma once

#include "wallbench/rbf.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace wallbench {

struct MdsResult {
    Eigen::MatrixXd embedding;   ///< n x r, columns ordered by eigenvalue
    Eigen::VectorXd eigenvalues; ///< full spectrum, descending
};

/// Classical multidimensional scaling: double-centers the squared distances
/// and embeds along the top r eigenvectors scaled by sqrt(eigenvalue).
/// Fewer than r positive eigenvalues throws DomainError quoting the spectrum.
MdsResult classical_mds(const Eigen::MatrixXd& d, int r);

struct IsomapVariableModel {
    Eigen::MatrixXd train_embedding; ///< n_tr x r
    RbfModel forward_map;            ///< scaled conditions -> latent coordinates
    Eigen::MatrixXd train_snapshots; ///< n_tr x n_p
    Eigen::MatrixXd geodesics;       ///< n_tr x n_tr, kept for dimension scans
    int k_graph = 10;
    int k_back = 7;
    int r = 3;
    /// latent distance below this returns the stored snapshot unchanged
    double zero_dist_tol = 1e-9;
};

/// Neighbor graph over snapshot rows, geodesic distances, MDS embedding, and
/// a forward map fitted from scaled conditions to the embedding.
IsomapVariableModel isomap_fit(const Eigen::MatrixXd& scaled_params,
                               const Eigen::MatrixXd& snapshots, int r, int k_graph, int k_back,
                               RbfKernel kernel, double reg);

/// Embedding residual ||D_G - D_Z||_F per latent dimension 1..r_max, capped
/// at the number of positive eigenvalues.
std::vector<std::pair<int, double>> isomap_dim_scan(const Eigen::MatrixXd& geodesics, int r_max);

/// Maps the condition through the forward RBF and inverse-distance averages
/// the k_back nearest training snapshots in latent space.
Eigen::VectorXd isomap_predict(const IsomapVariableModel& model, const Eigen::VectorXd& p_scaled);

} // namespace wallbench
