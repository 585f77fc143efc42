#include <doctest.h>

#include "wallbench/error.hpp"
#include "wallbench/graph.hpp"
#include "wallbench/linalg.hpp"
#include "wallbench/rbf.hpp"
#include "wallbench/rng.hpp"

#include <cmath>

using namespace wallbench;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

} // namespace

TEST_CASE("svd closed-form cases") {
    const SvdResult id3 = svd(Eigen::MatrixXd::Identity(3, 3));
    CHECK(id3.sigma.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(id3.sigma(i) == doctest::Approx(1.0).epsilon(1e-14));

    Eigen::MatrixXd d(2, 2);
    d << 3, 0, 0, 2;
    const SvdResult r = svd(d);
    CHECK(r.sigma(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(r.sigma(1) == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(svd(Eigen::MatrixXd::Constant(2, 2, std::nan(""))), DomainError);
}

TEST_CASE("svd reconstruction and orthonormality on 100 seeded matrices") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng.index(9));
        const Eigen::Index m = 3 + static_cast<Eigen::Index>(rng.index(8));
        const Eigen::MatrixXd a = random_matrix(n, m, rng);
        const SvdResult r = svd(a);

        const Eigen::Index k = std::min(n, m);
        REQUIRE(r.sigma.size() == k);
        for (Eigen::Index i = 1; i < k; ++i) CHECK(r.sigma(i) <= r.sigma(i - 1));
        CHECK(r.sigma.minCoeff() >= 0.0);

        const double recon =
            (a - r.u * r.sigma.asDiagonal() * r.vt).norm() / (a.norm() > 0 ? a.norm() : 1.0);
        CHECK(recon <= 1e-10);
        CHECK((r.u.transpose() * r.u - Eigen::MatrixXd::Identity(k, k)).norm() <= 1e-10);
        CHECK((r.vt * r.vt.transpose() - Eigen::MatrixXd::Identity(k, k)).norm() <= 1e-10);
    }
}

TEST_CASE("sym_eig closed-form cases and rejection") {
    Eigen::MatrixXd d(2, 2);
    d << 5, 0, 0, 1;
    const EigResult r1 = sym_eig(d);
    CHECK(r1.values(0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(r1.values(1) == doctest::Approx(1.0).epsilon(1e-14));

    Eigen::MatrixXd flip(2, 2);
    flip << 0, 1, 1, 0;
    const EigResult r2 = sym_eig(flip);
    CHECK(r2.values(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r2.values(1) == doctest::Approx(-1.0).epsilon(1e-14));

    Eigen::MatrixXd asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS(sym_eig(asym), DomainError);
}

TEST_CASE("sym_eig reconstruction on 100 seeded matrices") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(1000 + seed);
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.index(10));
        const Eigen::MatrixXd a = random_matrix(n, n, rng);
        const Eigen::MatrixXd b = 0.5 * (a + a.transpose());
        const EigResult r = sym_eig(b);

        const double scale = b.norm() > 0 ? b.norm() : 1.0;
        CHECK((b * r.vectors - r.vectors * r.values.asDiagonal()).norm() <= 1e-9 * scale);
        CHECK((r.vectors * r.values.asDiagonal() * r.vectors.transpose() - b).norm() <=
              1e-9 * scale);
        for (Eigen::Index i = 1; i < n; ++i) CHECK(r.values(i) <= r.values(i - 1));
    }
}

TEST_CASE("knn graph on collinear points forms the expected path") {
    Eigen::MatrixXd pts(4, 1);
    pts << 0, 1, 2, 3;
    const NeighborGraph g = knn_graph(pts, 1);
    REQUIRE(g.n == 4);
    // union symmetrization turns the nearest-neighbor picks into a path
    CHECK(g.adjacency[0].size() == 1);
    CHECK(g.adjacency[1].size() == 2);
    CHECK(g.adjacency[2].size() == 2);
    CHECK(g.adjacency[3].size() == 1);
    for (const auto& adj : g.adjacency) {
        for (const auto& [j, len] : adj) {
            (void)j;
            CHECK(len == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("disconnected knn graphs are rejected with the component count") {
    Eigen::MatrixXd pts(4, 1);
    pts << 0, 1, 100, 101;
    CHECK_THROWS_WITH_AS(knn_graph(pts, 1), doctest::Contains("2 components"), ValidationError);
    CHECK_NOTHROW(knn_graph(pts, 2));
    CHECK_THROWS_AS(knn_graph(pts, 4), ValidationError);
    CHECK_THROWS_AS(knn_graph(pts, 0), ValidationError);
}

TEST_CASE("every node has degree at least k after union symmetrization") {
    // grid spacing keeps small-k graphs connected so the degree bound is observable
    Eigen::MatrixXd pts(40, 1);
    for (int i = 0; i < 40; ++i) pts(i, 0) = static_cast<double>(i);
    for (int k : {1, 3, 6}) {
        const NeighborGraph g = knn_graph(pts, k);
        for (const auto& adj : g.adjacency) {
            CHECK(adj.size() >= static_cast<std::size_t>(k));
        }
    }
}

TEST_CASE("geodesic distances on a hand path") {
    Eigen::MatrixXd pts(3, 1);
    pts << 0, 1, 3;
    const NeighborGraph g = knn_graph(pts, 1);
    const Eigen::MatrixXd d = geodesic_distances(g);
    CHECK(d(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d(1, 2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d(0, 2) == doctest::Approx(3.0).epsilon(1e-14));
    for (int i = 0; i < 3; ++i) CHECK(d(i, i) == 0.0);
    CHECK(d == d.transpose());
}

TEST_CASE("geodesics dominate Euclidean distances and match them on a line") {
    Rng rng(17);
    const Eigen::MatrixXd pts = random_matrix(30, 3, rng);
    const NeighborGraph g = knn_graph(pts, 6);
    const Eigen::MatrixXd d = geodesic_distances(g);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        for (Eigen::Index j = 0; j < pts.rows(); ++j) {
            CHECK(d(i, j) >= (pts.row(i) - pts.row(j)).norm() - 1e-12);
        }
    }

    // straight-line configuration: geodesic equals chord distance
    Eigen::MatrixXd line(12, 2);
    for (int i = 0; i < 12; ++i) {
        const double arc = 0.3 * i;
        line(i, 0) = 2.0 * arc;
        line(i, 1) = -arc; // direction (2,-1)/sqrt(5)
    }
    const Eigen::MatrixXd dl = geodesic_distances(knn_graph(line, 2));
    for (Eigen::Index i = 0; i < 12; ++i) {
        for (Eigen::Index j = 0; j < 12; ++j) {
            CHECK(std::abs(dl(i, j) - (line.row(i) - line.row(j)).norm()) <= 1e-9);
        }
    }
}

TEST_CASE("rbf reproduces constants and affine maps through the polynomial tail") {
    Rng rng(3);
    const Eigen::MatrixXd x = random_matrix(15, 2, rng);
    const Eigen::MatrixXd queries = 3.0 * random_matrix(8, 2, rng);

    const Eigen::MatrixXd z_const = Eigen::MatrixXd::Constant(15, 1, 4.25);
    const RbfModel mc = rbf_fit(x, z_const, RbfKernel::gaussian, 1.3, 0.0);
    const Eigen::MatrixXd pc = rbf_predict(mc, queries);
    for (Eigen::Index i = 0; i < pc.rows(); ++i) {
        CHECK(pc(i, 0) == doctest::Approx(4.25).epsilon(1e-10));
    }

    Eigen::MatrixXd z_affine = 2.0 * x.col(0) - 0.7 * x.col(1);
    z_affine.array() += 1.5;
    const RbfModel ma = rbf_fit(x, z_affine, RbfKernel::multiquadric, 0.8, 0.0);
    const Eigen::MatrixXd pa = rbf_predict(ma, queries);
    for (Eigen::Index i = 0; i < pa.rows(); ++i) {
        const double want = 2.0 * queries(i, 0) - 0.7 * queries(i, 1) + 1.5;
        CHECK(pa(i, 0) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("rbf interpolates training data with reg = 0") {
    Rng rng(11);
    const Eigen::MatrixXd x = random_matrix(20, 3, rng);
    const Eigen::MatrixXd z = random_matrix(20, 2, rng);
    for (RbfKernel kernel : {RbfKernel::gaussian, RbfKernel::multiquadric}) {
        const RbfModel m = rbf_fit(x, z, kernel, 1.0, 0.0);
        const Eigen::MatrixXd back = rbf_predict(m, x);
        CHECK((back - z).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, z.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("validated shape recovers sin(x) to 1e-3 on the interior") {
    const double pi = 3.14159265358979323846;
    Eigen::MatrixXd x(20, 1), z(20, 1);
    for (int i = 0; i < 20; ++i) {
        x(i, 0) = pi * i / 19.0;
        z(i, 0) = std::sin(x(i, 0));
    }
    const RbfModel m = rbf_fit_auto(x, z, RbfKernel::gaussian, {}, 0.0);

    double max_err = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double q = 0.1 + (pi - 0.2) * i / 399.0;
        Eigen::MatrixXd qm(1, 1);
        qm(0, 0) = q;
        max_err = std::max(max_err, std::abs(rbf_predict(m, qm)(0, 0) - std::sin(q)));
    }
    CHECK(max_err <= 1e-3);
}

TEST_CASE("singular interpolation systems suggest regularization") {
    Eigen::MatrixXd x(6, 1);
    x << 0, 1, 2, 3, 3, 4; // duplicate center
    Eigen::MatrixXd z(6, 1);
    z << 0, 1, 2, 3, 5, 4; // contradictory values at the duplicate
    CHECK_THROWS_WITH_AS(rbf_fit(x, z, RbfKernel::gaussian, 1.0, 0.0),
                         doctest::Contains("reg"), TrainingError);
    CHECK_NOTHROW(rbf_fit(x, z, RbfKernel::gaussian, 1.0, 1e-6));
}

TEST_CASE("interpolation error at centers decreases monotonically as reg shrinks") {
    Rng rng(23);
    const Eigen::MatrixXd x = random_matrix(18, 2, rng);
    const Eigen::MatrixXd z = random_matrix(18, 1, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double reg : {1e-1, 1e-3, 1e-5, 0.0}) {
        const RbfModel m = rbf_fit(x, z, RbfKernel::gaussian, 1.0, reg);
        const double err = (rbf_predict(m, x) - z).cwiseAbs().maxCoeff();
        CHECK(err <= prev + 1e-12);
        prev = err;
    }
    CHECK(prev <= 1e-8);
}

TEST_CASE("rbf precondition violations are rejected") {
    Eigen::MatrixXd x(3, 2);
    x << 0, 0, 1, 0, 0, 1;
    const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 1);
    CHECK_THROWS_AS(rbf_fit(x, z, RbfKernel::gaussian, 1.0, 0.0), ValidationError); // m < d+2
    Eigen::MatrixXd x5(5, 2), z5 = Eigen::MatrixXd::Zero(5, 1);
    x5 << 0, 0, 1, 0, 0, 1, 1, 1, 2, 0;
    CHECK_THROWS_AS(rbf_fit(x5, z5, RbfKernel::gaussian, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(rbf_fit(x5, z5, RbfKernel::gaussian, 1.0, -1.0), ValidationError);
    CHECK_THROWS_AS(rbf_fit(x5, Eigen::MatrixXd::Zero(4, 1), RbfKernel::gaussian, 1.0, 0.0),
                    ValidationError);
}

TEST_CASE("rbf kernel names round-trip") {
    CHECK(rbf_kernel_from_string("gaussian") == RbfKernel::gaussian);
    CHECK(rbf_kernel_from_string("multiquadric") == RbfKernel::multiquadric);
    CHECK(to_string(RbfKernel::gaussian) == "gaussian");
    CHECK_THROWS_AS(rbf_kernel_from_string("cubic"), ValidationError);
}
