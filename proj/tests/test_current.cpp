#include "currentlab/current.hpp"
#include "currentlab/meshes.hpp"
#include "currentlab/scm_io.hpp"
#include "currentlab/slicing.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace currentlab;
using currentlab::testing::random_grid_chain;
using currentlab::testing::unit_square;

namespace {

SimplicialCurrent single_cell(const Vertices& V, std::vector<int> cell, int mult = 1)
{
    const int k = static_cast<int>(cell.size()) - 1;
    Cells C(1, k + 1);
    for (int j = 0; j <= k; ++j)
        C(0, j) = cell[j];
    return SimplicialCurrent(V, k, C, Multiplicities::Constant(1, mult));
}

double coefficient(const SimplicialCurrent& T, std::vector<int> sorted_cell)
{
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        bool eq = true;
        for (int j = 0; j <= T.dim(); ++j)
            eq = eq && T.cells()(c, j) == sorted_cell[j];
        if (eq)
            return T.mults()(c);
    }
    return 0;
}

}  // namespace

TEST_CASE("canonical form folds orientation into the multiplicity")
{
    Vertices V(3, 2);
    V << 0, 0, 1, 0, 0, 1;
    Cells C(2, 3);
    C << 1, 0, 2,  // odd permutation of (0,1,2)
        2, 0, 1;   // even permutation
    Multiplicities M(2);
    M << 3, 2;
    const SimplicialCurrent T(V, 2, C, M);
    REQUIRE(T.num_cells() == 1);
    CHECK(T.mults()(0) == -1);
    CHECK(T.cells()(0, 0) == 0);
    CHECK(T.cells()(0, 2) == 2);
}

TEST_CASE("cancelling orientations produce the zero current")
{
    Vertices V(3, 2);
    V << 0, 0, 1, 0, 0, 1;
    Cells C(2, 3);
    C << 0, 1, 2, 1, 0, 2;
    const SimplicialCurrent T(V, 2, C, Multiplicities::Ones(2));
    CHECK(T.is_zero());
    CHECK(mass(T) == 0.0);
}

TEST_CASE("degenerate or malformed cells are rejected")
{
    Vertices V(3, 2);
    V << 0, 0, 1, 0, 2, 0;
    CHECK_THROWS_AS(single_cell(V, {0, 1, 2}), Error);
    CHECK_THROWS_AS(single_cell(V, {0, 0}), Error);
    CHECK_THROWS_AS(single_cell(V, {0, 3}), Error);
    Vertices bad = V;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(single_cell(bad, {0, 1}), Error);
}

TEST_CASE("boundary of a triangle")
{
    Vertices V(3, 2);
    V << 0, 0, 1, 0, 0, 1;
    const auto dT = boundary(single_cell(V, {0, 1, 2}));
    REQUIRE(dT.num_cells() == 3);
    CHECK(coefficient(dT, {1, 2}) == 1);
    CHECK(coefficient(dT, {0, 2}) == -1);
    CHECK(coefficient(dT, {0, 1}) == 1);
}

TEST_CASE("boundary of a segment and of a 0-current")
{
    Vertices V(2, 1);
    V << 0, 1;
    const auto S = single_cell(V, {0, 1});
    const auto dS = boundary(S);
    CHECK(coefficient(dS, {1}) == 1);
    CHECK(coefficient(dS, {0}) == -1);
    CHECK_THROWS_WITH_AS(boundary(dS), "no boundary for 0-currents", Error);
}

TEST_CASE("boundary of boundary of the unit square vanishes")
{
    CHECK(boundary(boundary(unit_square())).is_zero());
}

TEST_CASE("mass examples")
{
    CHECK(mass(unit_square()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mass(make_polygon(6)) == doctest::Approx(6.0).epsilon(1e-12));
    Vertices V(2, 1);
    V << 0, 2;
    CHECK(mass(single_cell(V, {0, 1}, 3)) == doctest::Approx(6.0));
    CHECK(mass(SimplicialCurrent::zero(V, 1)) == 0.0);
}

TEST_CASE("chain arithmetic")
{
    const auto T = unit_square();
    CHECK((T + scale(T, -1)).is_zero());
    CHECK((T - T).is_zero());

    Vertices V(2, 1);
    V << 0, 1;
    const auto two = single_cell(V, {0, 1}, 2);
    const auto minus_one = single_cell(V, {0, 1}, -1);
    const auto sum = two + minus_one;
    REQUIRE(sum.num_cells() == 1);
    CHECK(sum.mults()(0) == 1);

    // Disjoint supports with separately stored vertex sets.
    Vertices W(2, 1);
    W << 5, 7;
    const auto far = single_cell(W, {0, 1});
    CHECK(mass(two + far) == doctest::Approx(mass(two) + mass(far)));
    CHECK((two + far).num_vertices() == 4);

    CHECK_THROWS_AS(T + two, Error);
}

TEST_CASE("vertex identity across currents uses coordinates")
{
    Vertices A(2, 1), B(2, 1);
    A << 0, 1;
    B << 1, 0;  // same points, reversed storage order
    const auto S = single_cell(A, {0, 1});
    const auto R = single_cell(B, {1, 0});
    CHECK(same_chain(S, R));
    CHECK((S + R).num_vertices() == 2);
}

TEST_CASE("push-forward examples")
{
    const auto T = unit_square();
    const auto id = push_forward_affine(T, Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
    CHECK(id.dropped_cells == 0);
    CHECK(same_chain(id.current, T));

    for (double s : {0.5, 2.0, 3.0}) {
        const auto S = push_forward_affine(T, s * Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
        CHECK(mass(S.current) == doctest::Approx(s * s * mass(T)).epsilon(1e-12));
    }

    // Reflection across the y-axis commutes with the boundary.
    Vertices V(3, 2);
    V << 0.2, 0.1, 1.3, 0.4, 0.5, 1.1;
    const auto tri = single_cell(V, {0, 1, 2});
    Eigen::Matrix2d R;
    R << -1, 0, 0, 1;
    const auto pushed = push_forward_affine(tri, R, Eigen::Vector2d(0.3, 0.0)).current;
    const auto pushed_boundary = push_forward_affine(boundary(tri), R, Eigen::Vector2d(0.3, 0.0)).current;
    CHECK(same_chain(boundary(pushed), pushed_boundary));
    // Reflection reverses the orientation relative to the ambient plane.
    const Eigen::MatrixXd P = pushed.cell_points(0);
    CHECK(pushed.mults()(0) * edge_matrix(P).determinant() < 0);

    // Projection onto a line collapses the triangle.
    Eigen::MatrixXd flat(2, 2);
    flat << 1, 0, 0, 0;
    const auto collapsed = push_forward_affine(tri, flat, Eigen::Vector2d::Zero());
    CHECK(collapsed.dropped_cells == 1);
    CHECK(collapsed.current.is_zero());
}

TEST_CASE("staircase clipping tiles the simplex")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int k = 1; k <= 4; ++k)
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::MatrixXd P(k + 1, k);
            for (int i = 0; i <= k; ++i)
                for (int d = 0; d < k; ++d)
                    P(i, d) = g(rng);
            Eigen::VectorXd a(k + 1);
            for (int i = 0; i <= k; ++i)
                a(i) = g(rng);
            // Volume of both sides adds up to the simplex and no piece is flat;
            // orientation is fixed afterwards by the caller.
            double total = 0.0;
            for (const Eigen::VectorXd& vals : {a, Eigen::VectorXd(-a)}) {
                for (const auto& piece : clip_below(vals)) {
                    Eigen::MatrixXd Q(k + 1, k);
                    for (int r = 0; r <= k; ++r) {
                        const auto [i, j] = piece[r];
                        const double s = i == j ? 0.0 : vals(i) / (vals(i) - vals(j));
                        Q.row(r) = P.row(i) + s * (P.row(j) - P.row(i));
                    }
                    total += simplex_volume(Q);
                    CHECK(std::abs(relative_orientation(P, Q)) == 1);
                    CHECK_FALSE(is_degenerate(Q));
                }
            }
            CHECK(total == doctest::Approx(simplex_volume(P)).epsilon(1e-9));
            // Positive part integrals are consistent with the linear integral
            // through the identity  int l+ - int (-l)+ = int l = vol * mean(a).
            const double lhs = integral_positive_part(P, a) - integral_positive_part(P, -a);
            CHECK(lhs == doctest::Approx(simplex_volume(P) * a.mean()).epsilon(1e-9).scale(1.0));
        }
}

TEST_CASE("positive part integral matches quadrature on a triangle")
{
    Eigen::MatrixXd P(3, 2);
    P << 0, 0, 1, 0, 0, 1;
    Eigen::Vector3d a(-0.3, 0.7, 0.2);  // l(x, y) = -0.3 + x + 0.5 y
    const int n = 1000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) {
            const double x = (i + 1.0 / 3) / n, y = (j + 1.0 / 3) / n;
            sum += std::max(0.0, -0.3 + x + 0.5 * y) * 0.5 / (n * n);
            if (i + j + 1 < n) {
                const double x2 = (i + 2.0 / 3) / n, y2 = (j + 2.0 / 3) / n;
                sum += std::max(0.0, -0.3 + x2 + 0.5 * y2) * 0.5 / (n * n);
            }
        }
    CHECK(integral_positive_part(P, a) == doctest::Approx(sum).epsilon(1e-4));
}

TEST_CASE("slice of the unit square at x = 1/2")
{
    const auto T = unit_square();
    AffineFunctional w{Eigen::Vector2d(1, 0), 0.0};
    const auto S = slice_by_affine(T, w, 0.5);
    CHECK(S.dim() == 1);
    CHECK(mass(S) == doctest::Approx(1.0).epsilon(1e-14));
    for (Eigen::Index i = 0; i < S.num_vertices(); ++i)
        CHECK(S.vertices()(i, 0) == doctest::Approx(0.5));

    // Expected orientation: the segment runs upward, from (1/2,0) to (1/2,1).
    Vertices E(2, 2);
    E << 0.5, 0, 0.5, 1;
    CHECK(same_chain(boundary(S), boundary(single_cell(E, {0, 1}))));

    // The defining identity, with the restriction computed cell by cell.
    const auto lhs = boundary(restrict_below(T, w, 0.5));
    const auto rhs = S + restrict_below(boundary(T), w, 0.5);
    CHECK(same_chain(lhs, rhs));

    CHECK(slice_by_affine(T, w, 1.5).is_zero());
    CHECK(slice_by_affine(T, w, -0.5).is_zero());
    CHECK_THROWS_WITH_AS(slice_by_affine(T, w, 1.0), doctest::Contains("slice through vertex"), Error);
    CHECK_THROWS_AS(slice_by_affine(boundary(boundary(T)), w, 0.5), Error);
}

TEST_CASE("coarea on the unit square")
{
    const auto T = unit_square();
    AffineFunctional w{Eigen::Vector2d(1, 0), 0.0};
    const int n = 1000;
    double integral = 0.0;
    for (int i = 0; i < n; ++i)
        integral += mass(slice_by_affine(T, w, (i + 0.5) / n)) / n;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("revolution surfaces")
{
    SUBCASE("cylinder area")
    {
        const auto C = make_revolution_surface({{0.0, 1.0}, {1.0, 1.0}}, 512);
        CHECK(std::abs(mass(C) / (2 * std::numbers::pi) - 1) < 1e-3);
    }
    SUBCASE("sphere area and outward orientation")
    {
        std::vector<std::pair<double, double>> profile;
        const int n = 256;
        for (int i = 0; i <= n; ++i) {
            const double x = -std::cos(std::numbers::pi * i / n);
            profile.emplace_back(x, i == 0 || i == n ? 0.0 : std::sqrt(std::max(0.0, 1 - x * x)));
        }
        const auto S = make_revolution_surface(profile, 512);
        CHECK(std::abs(mass(S) / (4 * std::numbers::pi) - 1) < 5e-3);
        CHECK(boundary(S).is_zero());
        double enclosed = 0.0;
        for (Eigen::Index c = 0; c < S.num_cells(); ++c) {
            Eigen::Matrix3d P = S.cell_points(c);
            enclosed += S.mults()(c) * P.determinant() / 6.0;
        }
        CHECK(enclosed > 4.0);  // 4/3 pi, positive for outward orientation
    }
    SUBCASE("coarse cylinder boundary is two triangle loops")
    {
        const auto C = make_revolution_surface({{0.0, 1.0}, {1.0, 1.0}}, 3);
        const auto dC = boundary(C);
        CHECK(dC.num_cells() == 6);
        AffineFunctional w{Eigen::Vector3d(1, 0, 0), 0.0};
        const auto left = restrict_below(dC, w, 0.5);
        CHECK(left.num_cells() == 3);
        CHECK(boundary(left).is_zero());
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(make_revolution_surface({{0.0, 1.0}}, 8), Error);
        CHECK_THROWS_AS(make_revolution_surface({{0.0, 1.0}, {1.0, 1.0}}, 2), Error);
        CHECK_THROWS_AS(make_revolution_surface({{1.0, 1.0}, {0.0, 1.0}}, 8), Error);
        CHECK_THROWS_AS(make_revolution_surface({{0.0, -1.0}, {1.0, 1.0}}, 8), Error);
    }
}

TEST_CASE("icosphere")
{
    const auto S = make_icosphere(2);
    CHECK(S.num_cells() == 320);
    CHECK(boundary(S).is_zero());
    CHECK(mass(S) < 4 * std::numbers::pi);
    CHECK(mass(S) > 0.97 * 4 * std::numbers::pi);
}

TEST_CASE("SCM round trip and parse errors")
{
    const auto T = unit_square();
    std::stringstream ss;
    write_scm(T, ss);
    const auto R = read_scm(ss);
    CHECK(same_chain(R, T));
    CHECK((R.vertices() - T.vertices()).cwiseAbs().maxCoeff() <= 1e-12);

    const std::string good =
        "SCM 1\n# comment\nambient 2\ndim 1\nvertices 2\n0 0\n1 0  # trailing\n"
        "simplices 1\n2 0 1 norm linf\n";
    std::istringstream in(good);
    const auto S = read_scm(in);
    CHECK(S.mults()(0) == 2);
    CHECK(S.tag(0) == "linf");

    auto error_line = [](const std::string& text) {
        std::istringstream is(text);
        try {
            read_scm(is);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(error_line("SCM 1\nambient 2\ndim 1\nvertices 2\n0 0\n1 0\nsimplices 1\n0 0 1\n") == 8);
    CHECK(error_line("SCM 1\nambient 2\ndim 1\nvertices 2\n0 0\n1 0\nsimplices 1\n1 0 2\n") == 8);
    CHECK(error_line("SCM 2\n") == 1);
    CHECK(error_line("SCM 1\nambient 2\ndimension 1\n") == 3);
    CHECK(error_line("SCM 1\nambient 2\ndim 1\nvertices 1\n0 x\n") == 5);
}

TEST_CASE("property: boundary of boundary is zero on random grid chains")
{
    std::mt19937_64 rng(20240601);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 1 + trial % 3;
        const int N = k == 1 ? 2 : 3;
        const auto T = random_grid_chain(rng, N, k, 2);
        if (k >= 2)
            CHECK(boundary(boundary(T)).is_zero());
        else
            CHECK(boundary(T).mults().sum() == 0);  // total degree of a 0-boundary
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("property: mass is subadditive and additive on disjoint cells")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto A = random_grid_chain(rng, 2, 1, 3);
        const auto B = random_grid_chain(rng, 2, 1, 3);
        CHECK(mass(A + B) <= mass(A) + mass(B) + 1e-12);
        // Restricting B to the cells A does not use makes the sum additive.
        const auto onlyB = (A + B) - A;
        std::vector<int> keep;
        for (Eigen::Index c = 0; c < onlyB.num_cells(); ++c)
            keep.push_back(static_cast<int>(c));
        SimplicialCurrent disjoint = SimplicialCurrent::zero(A.vertices(), 1);
        for (Eigen::Index c = 0; c < B.num_cells(); ++c) {
            bool shared = false;
            for (Eigen::Index a = 0; a < A.num_cells() && !shared; ++a)
                shared = A.cells().row(a) == B.cells().row(c);
            if (!shared) {
                Cells C = B.cells().row(c);
                disjoint = disjoint + SimplicialCurrent(B.vertices(), 1, C,
                                                        Multiplicities::Constant(1, B.mults()(c)));
            }
        }
        CHECK(mass(A + disjoint) == doctest::Approx(mass(A) + mass(disjoint)).epsilon(1e-12));
    }
}

TEST_CASE("property: scaling multiplies mass by s^k")
{
    std::mt19937_64 rng(3);
    for (int k = 1; k <= 3; ++k) {
        const auto T = random_grid_chain(rng, 3, k, 2);
        for (double s : {0.5, 2.0, 3.0}) {
            const auto S = push_forward_affine(T, s * Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero());
            CHECK(std::abs(mass(S.current) - std::pow(s, k) * mass(T)) <= 1e-9 * std::max(1.0, mass(T)));
        }
    }
}

TEST_CASE("property: slicing commutes with the boundary up to sign")
{
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.2, 0.8);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 2 + trial % 2;
        const auto T = random_grid_chain(rng, 3, k, 2, 3, 0.5);
        AffineFunctional w{Eigen::Vector3d(g(rng), g(rng), g(rng)), 0.0};
        w.gradient.normalize();
        const double t = w(Eigen::RowVector3d(u(rng), u(rng), u(rng)));
        const auto S = slice_by_affine(T, w, t);
        CHECK((boundary(S) + slice_by_affine(boundary(T), w, t)).is_zero());
        CHECK(same_chain(boundary(restrict_below(T, w, t)), S + restrict_below(boundary(T), w, t)));

        if (k == 3) {
            // Two successive slices: the signs compose to (-1)^2.
            AffineFunctional w2{Eigen::Vector3d(g(rng), g(rng), g(rng)), 0.0};
            const double t2 = w2(Eigen::RowVector3d(u(rng), u(rng), u(rng)));
            const auto twice = slice_by_affine(S, w2, t2);
            const auto twice_boundary = slice_by_affine(slice_by_affine(boundary(T), w, t), w2, t2);
            CHECK(same_chain(twice_boundary, boundary(twice)));
        }
    }
}

TEST_CASE("property: Monte Carlo coarea bound")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        const auto T = random_grid_chain(rng, 3, 2, 2, 3, 0.5);
        AffineFunctional w{Eigen::Vector3d(g(rng), g(rng), g(rng)), 0.0};
        w.gradient.normalize();
        double lo = 1e300, hi = -1e300;
        for (Eigen::Index i = 0; i < T.num_vertices(); ++i) {
            lo = std::min(lo, w(T.vertices().row(i)));
            hi = std::max(hi, w(T.vertices().row(i)));
        }
        std::uniform_real_distribution<double> level(lo, hi);
        const int S = 400;
        double avg = 0.0;
        for (int s = 0; s < S; ++s)
            avg += mass(slice_by_affine(T, w, level(rng))) / S;
        CHECK(avg * (hi - lo) <= mass(T) * (1 + 1e-3) + 1e-12);
    }
}
