#include "wallbench/graph.hpp"

#include "wallbench/error.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

namespace wallbench {

NeighborGraph knn_graph(const Eigen::MatrixXd& points, int k) {
    const Eigen::Index n = points.rows();
    if (k < 1) throw ValidationError("knn_graph: k must be at least 1");
    if (k >= n) throw ValidationError("knn_graph: k must be smaller than the point count");
    if (!points.allFinite()) throw ValidationError("knn_graph: non-finite coordinates");

    std::vector<std::set<Eigen::Index>> neighbor_sets(static_cast<std::size_t>(n));
    std::vector<std::pair<double, Eigen::Index>> cand(static_cast<std::size_t>(n) - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            cand[m++] = {(points.row(i) - points.row(j)).norm(), j};
        }
        // sorting (distance, index) pairs implements the lower-index tie rule
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (int q = 0; q < k; ++q) {
            const Eigen::Index j = cand[static_cast<std::size_t>(q)].second;
            neighbor_sets[static_cast<std::size_t>(i)].insert(j);
            neighbor_sets[static_cast<std::size_t>(j)].insert(i); // union symmetrization
        }
    }

    NeighborGraph g;
    g.n = n;
    g.adjacency.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j : neighbor_sets[static_cast<std::size_t>(i)]) {
            g.adjacency[static_cast<std::size_t>(i)].emplace_back(
                j, (points.row(i) - points.row(j)).norm());
        }
    }

    // connectivity check: breadth-first sweep counting components
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    Eigen::Index components = 0;
    for (Eigen::Index start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        ++components;
        std::vector<Eigen::Index> stack = {start};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            const Eigen::Index v = stack.back();
            stack.pop_back();
            for (const auto& [w, len] : g.adjacency[static_cast<std::size_t>(v)]) {
                (void)len;
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    if (components > 1) {
        throw ValidationError("knn_graph: graph is disconnected (" + std::to_string(components) +
                              " components); increase k");
    }
    return g;
}

Eigen::MatrixXd geodesic_distances(const NeighborGraph& g) {
    const Eigen::Index n = g.n;
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd d(n, n);

    std::vector<double> dist(static_cast<std::size_t>(n));
    using Item = std::pair<double, Eigen::Index>;
    for (Eigen::Index src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), inf);
        dist[static_cast<std::size_t>(src)] = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        heap.push({0.0, src});
        while (!heap.empty()) {
            const auto [dv, v] = heap.top();
            heap.pop();
            if (dv > dist[static_cast<std::size_t>(v)]) continue;
            for (const auto& [w, len] : g.adjacency[static_cast<std::size_t>(v)]) {
                const double cand = dv + len;
                if (cand < dist[static_cast<std::size_t>(w)]) {
                    dist[static_cast<std::size_t>(w)] = cand;
                    heap.push({cand, w});
                }
            }
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            d(src, j) = dist[static_cast<std::size_t>(j)];
            if (!std::isfinite(d(src, j))) {
                throw ValidationError("geodesic_distances: graph is disconnected");
            }
        }
    }

    // floating-point addition order can differ per direction; enforce symmetry
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double m = std::min(d(i, j), d(j, i));
            d(i, j) = m;
            d(j, i) = m;
        }
    }
    return d;
}

} // namespace wallbench
