#include "currentlab/john_geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace currentlab;

namespace {

NormBall circle_ball(int m)
{
    Eigen::MatrixXd G(m, 2);
    for (int i = 0; i < m; ++i) {
        const double a = 2 * std::numbers::pi * i / m;
        G.row(i) << std::cos(a), std::sin(a);
    }
    return NormBall(G);
}

NormBall random_ball(std::mt19937_64& rng, int n, int pairs)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXd G(2 * pairs, n);
    for (int i = 0; i < pairs; ++i) {
        for (int d = 0; d < n; ++d)
            G(2 * i, d) = g(rng);
        G.row(2 * i + 1) = -G.row(2 * i);
    }
    return NormBall(G);
}

void check_sandwich(const NormBall& ball, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    const int n = ball.dim();
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd v(n);
        for (int d = 0; d < n; ++d)
            v(d) = g(rng);
        const double nv = norm_eval(ball, v);
        const double nj = std::sqrt(v.dot(ball.john_Q() * v));
        CHECK(nj / std::sqrt(double(n)) <= nv * (1 + 1e-6));
        CHECK(nv <= nj * (1 + 1e-6));

        const double dv = dual_norm_eval(ball, v);
        const double dj = std::sqrt(v.dot(ball.dual_P() * v));
        CHECK(dj / std::sqrt(double(n)) <= dv * (1 + 1e-6));
        CHECK(dv <= dj * (1 + 1e-6));
    }
}

}  // namespace

TEST_CASE("square and cross-polytope John matrices")
{
    const auto square = linf_ball(2);
    CHECK((square.john_Q() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-6);
    const auto cross = l1_ball(2);
    CHECK((cross.john_Q() - 2 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-6);

    // KKT check for the cross-polytope: the contact points are the edge
    // midpoints (+-1/2, +-1/2), which lie on the ellipsoid and on the facets,
    // and the John decomposition sum c_i u_i u_i^T = I holds with c_i = 1/2
    // for the unit contact directions u_i.
    Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            const Eigen::Vector2d p(0.5 * sx, 0.5 * sy);
            CHECK(p.dot(cross.john_Q() * p) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(norm_eval(cross, p) == doctest::Approx(1.0));
            const Eigen::Vector2d unit = p.normalized();
            sum += 0.5 * unit * unit.transpose();
        }
    CHECK((sum - Eigen::Matrix2d::Identity()).norm() <= 1e-12);
}

TEST_CASE("Euclidean ball sample gives the identity")
{
    const auto ball = circle_ball(256);
    CHECK((ball.john_Q() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("inscribed ellipsoid stays inside the hull")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto ball = random_ball(rng, 2 + trial % 2, 4);
        const Eigen::LLT<Eigen::MatrixXd> llt(ball.john_Q());
        std::normal_distribution<double> g;
        for (int s = 0; s < 200; ++s) {
            Eigen::VectorXd w(ball.dim());
            for (int d = 0; d < ball.dim(); ++d)
                w(d) = g(rng);
            w.normalize();
            // Boundary point x with x^T Q x = 1.
            const Eigen::VectorXd x = llt.matrixU().solve(w);
            CHECK(norm_eval(ball, x) <= 1 + 1e-7);
        }
    }
}

TEST_CASE("norm evaluation")
{
    const auto square = linf_ball(2);
    CHECK(norm_eval(square, Eigen::Vector2d(1, 1)) == doctest::Approx(1.0));
    CHECK(dual_norm_eval(square, Eigen::Vector2d(1, 1)) == doctest::Approx(2.0));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const auto ball = random_ball(rng, 3, 5);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector3d v(g(rng), g(rng), g(rng));
        const Eigen::Vector3d xi(g(rng), g(rng), g(rng));
        CHECK(norm_eval(ball, 2 * v) == doctest::Approx(2 * norm_eval(ball, v)).epsilon(1e-12));
        CHECK(norm_eval(ball, v) * dual_norm_eval(ball, xi) >= xi.dot(v) - 1e-12);
    }
}

TEST_CASE("invalid balls are rejected")
{
    Eigen::MatrixXd notsym(2, 2);
    notsym << 1, 0, 0, 1;
    CHECK_THROWS_AS(NormBall{notsym}, Error);
    Eigen::MatrixXd flat(2, 2);
    flat << 1, 1, -1, -1;
    CHECK_THROWS_WITH_AS(NormBall{flat}, doctest::Contains("degenerate hull"), Error);
}

TEST_CASE("John sandwich on many balls")
{
    std::mt19937_64 rng(6);
    check_sandwich(linf_ball(2), rng);
    check_sandwich(l1_ball(2), rng);
    check_sandwich(linf_ball(3), rng);
    check_sandwich(l1_ball(3), rng);
    check_sandwich(circle_ball(64), rng);
    for (int i = 0; i < 5; ++i)
        check_sandwich(random_ball(rng, 2 + i % 2, 3 + i), rng);
}

TEST_CASE("uniqueness proxy: random Khachiyan starts agree")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        const auto ball = random_ball(rng, 2 + trial % 2, 5);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            MveeOptions opts;
            opts.random_start = seed;
            CHECK((john_matrix(ball, opts) - ball.john_Q()).norm() <= 1e-6);
        }
    }
}

TEST_CASE("norms sidecar")
{
    std::istringstream in(R"({"linf": {"dim": 2, "generators": [[1,1],[1,-1],[-1,1],[-1,-1]]}})");
    const auto norms = read_norms(in);
    REQUIRE(norms.count("linf") == 1);
    CHECK((norms.at("linf").john_Q() - Eigen::Matrix2d::Identity()).norm() <= 1e-6);
    std::istringstream bad(R"({"x": {"dim": 2, "generators": [[1,1,0]]}})");
    CHECK_THROWS_AS(read_norms(bad), Error);
}
