#include "currentlab/flat_norm.hpp"
#include "currentlab/meshes.hpp"
#include "currentlab/simplex_lp.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace currentlab;
using currentlab::testing::enumerate_basic_solutions;
using currentlab::testing::random_grid_chain;

namespace {

SimplicialCurrent segment(double x0, double y0, double x1, double y1)
{
    Vertices V(2, 2);
    V << x0, y0, x1, y1;
    Cells C(1, 2);
    C << 0, 1;
    return SimplicialCurrent(V, 1, C, Multiplicities::Ones(1));
}

}  // namespace

TEST_CASE("grid complex counts and incidence")
{
    const auto C = grid_complex({{0, 1}, {0, 1}}, {1}, 1);
    CHECK(C.k1_cells.rows() == 2);
    CHECK(C.k_cells.rows() == 5);
    CHECK(C.vertices.rows() == 4);

    const auto C3 = grid_complex({{0, 1}, {0, 1}, {0, 1}}, {4}, 1);
    const auto C3lower = grid_complex({{0, 1}, {0, 1}, {0, 1}}, {4}, 0);
    // Compose edge -> vertex incidence with triangle -> edge incidence.
    Eigen::SparseMatrix<int> d1(C3lower.k_cells.rows(), C3.k_cells.rows());
    std::vector<Eigen::Triplet<int>> trip;
    for (Eigen::Index e = 0; e < C3.k_cells.rows(); ++e) {
        trip.emplace_back(C3.k_cells(e, 1), static_cast<int>(e), 1);
        trip.emplace_back(C3.k_cells(e, 0), static_cast<int>(e), -1);
    }
    d1.setFromTriplets(trip.begin(), trip.end());
    const Eigen::SparseMatrix<int> dd = d1 * C3.incidence;
    CHECK(Eigen::MatrixXi(dd).cwiseAbs().maxCoeff() == 0);
    CHECK(C3.k1_cells.rows() > 0);

    CHECK_THROWS_AS(grid_complex({{0, 1}, {0, 1}}, {1}, 2), Error);
    CHECK_THROWS_AS(grid_complex({{0, 1}, {0, 1}}, {0}, 1), Error);
}

TEST_CASE("identical chains are at distance zero")
{
    std::mt19937_64 rng(1);
    const auto T = random_grid_chain(rng, 2, 1, 2);
    const auto C = grid_complex({{0, 1}, {0, 1}}, {2}, 1);
    const auto cert = flat_distance(T, T, C);
    CHECK(cert.value == 0.0);
    CHECK(cert.u.isZero());
    CHECK(cert.v.isZero());
    CHECK(verify_certificate(cert, T, T, C));
}

TEST_CASE("parallel segments: min(2, 3t) against basic-solution enumeration")
{
    for (double t : {0.1, 0.5, 1.0}) {
        CAPTURE(t);
        const auto C = grid_complex({{0, 1}, {0, t}}, {1}, 1);
        const auto T1 = segment(0, 0, 1, 0);
        const auto T2 = segment(0, t, 1, t);
        const auto cert = flat_distance(T1, T2, C);
        CHECK(std::abs(cert.value - std::min(2.0, 3 * t)) <= 1e-6);
        CHECK(verify_certificate(cert, T1, T2, C));
        CHECK_FALSE(cert.fractional);
        CHECK(cert.rounded_value == doctest::Approx(cert.value).epsilon(1e-12));

        // The oracle sees only the raw LP data: 5 rows, 14 split variables.
        const Eigen::Index m = C.k_cells.rows(), p = C.k1_cells.rows();
        REQUIRE(m == 5);
        REQUIRE(p == 2);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, 2 * m + 2 * p);
        const Eigen::MatrixXd D = Eigen::MatrixXi(C.incidence).cast<double>();
        A.leftCols(m) = Eigen::MatrixXd::Identity(m, m);
        A.middleCols(m, m) = -Eigen::MatrixXd::Identity(m, m);
        A.middleCols(2 * m, p) = D;
        A.rightCols(p) = -D;
        Eigen::VectorXd c(2 * m + 2 * p);
        c << C.k_volumes, C.k_volumes, C.k1_volumes, C.k1_volumes;
        const Eigen::VectorXd b = (embed_chain(T1, C) - embed_chain(T2, C)).cast<double>();
        CHECK(std::abs(enumerate_basic_solutions(A, b, c) - cert.value) <= 1e-9);

        const auto exact = flat_distance(T1, T2, C, true);
        CHECK(exact.exact);
        CHECK(std::abs(exact.value - cert.value) <= 1e-12);
        CHECK(verify_certificate(exact, T1, T2, C));
    }
}

TEST_CASE("certificate verification")
{
    const auto C = grid_complex({{0, 1}, {0, 0.1}}, {1}, 1);
    const auto T1 = segment(0, 0, 1, 0);
    const auto T2 = segment(0, 0.1, 1, 0.1);
    auto cert = flat_distance(T1, T2, C);
    REQUIRE(verify_certificate(cert, T1, T2, C));

    auto bad = cert;
    bad.v(0) += 1;
    CHECK_FALSE(verify_certificate(bad, T1, T2, C));

    FlatNormCertificate trivial;
    trivial.u = (embed_chain(T1, C) - embed_chain(T2, C)).cast<double>();
    trivial.v = Eigen::VectorXd::Zero(C.k1_cells.rows());
    trivial.value = mass(T1 - T2);
    CHECK(verify_certificate(trivial, T1, T2, C));
    CHECK(trivial.value == doctest::Approx(2.0));
}

TEST_CASE("current outside the complex is reported")
{
    const auto C = grid_complex({{0, 1}, {0, 1}}, {1}, 1);
    const auto off = segment(0, 0, 0.5, 0);
    CHECK_THROWS_WITH_AS(flat_distance(off, off, C), doctest::Contains("not in the complex"), Error);
}

TEST_CASE("polygon versus zero: filling beats keeping")
{
    SUBCASE("8-gon, integer brute force")
    {
        const auto disk = make_disk(8, 1);
        const auto C = complex_from_current(disk);
        const auto loop = make_polygon(8);
        const auto zero = SimplicialCurrent::zero(loop.vertices(), 1);
        const auto cert = flat_distance(loop, zero, C);
        CHECK(verify_certificate(cert, loop, zero, C));

        const Eigen::VectorXi t = embed_chain(loop, C);
        double best = INFINITY;
        Eigen::VectorXi v(8);
        for (int code = 0; code < 390625; ++code) {  // 5^8
            int r = code;
            for (int j = 0; j < 8; ++j, r /= 5)
                v(j) = r % 5 - 2;
            const Eigen::VectorXi u = t - C.incidence * v;
            const double cost = u.cast<double>().cwiseAbs().dot(C.k_volumes) +
                                v.cast<double>().cwiseAbs().dot(C.k1_volumes);
            best = std::min(best, cost);
        }
        CHECK(std::abs(cert.value - best) <= 1e-9);
        CHECK(cert.value == doctest::Approx(mass(disk)).epsilon(1e-12));
        CHECK(cert.value < mass(loop));
    }
    SUBCASE("64-gon approximates the disk area")
    {
        const auto disk = make_disk(64, 2);
        const auto C = complex_from_current(disk);
        const auto loop = make_polygon(64);
        const auto zero = SimplicialCurrent::zero(loop.vertices(), 1);
        const auto cert = flat_distance(loop, zero, C);
        CHECK(verify_certificate(cert, loop, zero, C));
        CHECK(std::abs(cert.value / std::numbers::pi - 1) < 0.02);
        CHECK_FALSE(cert.fractional);
    }
}

TEST_CASE("LP solver agrees in double and rational arithmetic")
{
    using boost::multiprecision::cpp_rational;
    // min x1 + 2 x2 + 3 x3 s.t. x0 + x1 - x2 = 2, x3 + x1 + x2 = 3 (x0, x3 basic)
    LPProblem<cpp_rational> P;
    P.rows = 2;
    P.cols = 4;
    P.A = {1, 1, -1, 0, 0, 1, 1, 1};
    P.b = {2, 3};
    P.c = {0, 1, 2, 3};
    P.basis = {0, 3};
    const auto exact = solve_lp(P);
    LPProblem<double> Q;
    Q.rows = 2;
    Q.cols = 4;
    Q.A = {1, 1, -1, 0, 0, 1, 1, 1};
    Q.b = {2, 3};
    Q.c = {0, 1, 2, 3};
    Q.basis = {0, 3};
    const auto approx = solve_lp(Q);
    // Optimum at x1 = 5/2, x2 = 1/2 with cost 7/2.
    Eigen::MatrixXd A(2, 4);
    A << 1, 1, -1, 0, 0, 1, 1, 1;
    const double oracle = enumerate_basic_solutions(A, Eigen::Vector2d(2, 3), Eigen::Vector4d(0, 1, 2, 3));
    CHECK(exact.objective == cpp_rational(7, 2));
    CHECK(static_cast<double>(exact.objective) == doctest::Approx(oracle));
    CHECK(approx.objective == doctest::Approx(oracle));
}

TEST_CASE("property: flat distance is bounded by the mass of the difference")
{
    std::mt19937_64 rng(42);
    const auto C = grid_complex({{0, 1}, {0, 1}}, {2}, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto A = random_grid_chain(rng, 2, 1, 2);
        const auto B = random_grid_chain(rng, 2, 1, 2);
        const auto cert = flat_distance(A, B, C);
        CHECK(cert.value <= mass(A - B) + 1e-9);
        CHECK(verify_certificate(cert, A, B, C));
        CHECK(cert.rounded_value >= cert.value - 1e-9);
    }
}

TEST_CASE("property: metric axioms on a fixed complex")
{
    std::mt19937_64 rng(43);
    const auto C = grid_complex({{0, 1}, {0, 1}}, {2}, 1);
    for (int trial = 0; trial < 40; ++trial) {
        const auto T1 = random_grid_chain(rng, 2, 1, 2);
        const auto T2 = random_grid_chain(rng, 2, 1, 2);
        const auto T3 = random_grid_chain(rng, 2, 1, 2);
        CHECK(flat_distance(T1, T1, C).value == 0.0);
        const double d12 = flat_distance(T1, T2, C).value;
        const double d21 = flat_distance(T2, T1, C).value;
        const double d23 = flat_distance(T2, T3, C).value;
        const double d13 = flat_distance(T1, T3, C).value;
        CHECK(std::abs(d12 - d21) <= 1e-9);
        CHECK(d13 <= d12 + d23 + 1e-9);
        CHECK((d12 > 0) == !same_chain(T1, T2));
    }
}

TEST_CASE("property: mass is lower semicontinuous along converging chains")
{
    // S_i = S + (a chain that is eventually zero); coefficientwise convergence.
    std::mt19937_64 rng(44);
    const auto C = grid_complex({{0, 1}, {0, 1}}, {2}, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto S = random_grid_chain(rng, 2, 1, 2);
        double liminf = INFINITY;
        for (int i = 0; i < 6; ++i) {
            const auto noise = i < 3 ? random_grid_chain(rng, 2, 1, 2) : SimplicialCurrent::zero(S.vertices(), 1);
            const auto Si = S + noise;
            if (i >= 3)
                liminf = std::min(liminf, mass(Si));
            CHECK(flat_distance(Si, S, C).value <= mass(noise) + 1e-9);
        }
        CHECK(mass(S) <= liminf + 1e-12);
    }
}
