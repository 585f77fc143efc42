#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace wallbench {

/// Undirected weighted graph; every edge is stored in both adjacency lists.
struct NeighborGraph {
    Eigen::Index n = 0;
    std::vector<std::vector<std::pair<Eigen::Index, double>>> adjacency;
};

/// Connects each row of points to its k Euclidean nearest neighbors (ties
/// broken by lower index) and symmetrizes by union. A disconnected result
/// throws ValidationError naming the component count.
NeighborGraph knn_graph(const Eigen::MatrixXd& points, int k);

/// All-pairs shortest path lengths by Dijkstra from every source.
Eigen::MatrixXd geodesic_distances(const NeighborGraph& g);

} // namespace wallbench
