#include "currentlab/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace currentlab;

TEST_CASE("spline profile has three regimes")
{
    const double eps = 0.1;
    const auto p = spline_profile(eps, 64);
    CHECK(p.size() == 64);
    CHECK(p.front().first == doctest::Approx(-2.0));
    CHECK(p.front().second == 0.0);
    CHECK(p.back().first == doctest::Approx(2.0));
    CHECK(p.back().second == 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        CHECK(p[i].first > p[i - 1].first);
        const double x = p[i].first, h = p[i].second;
        if (x <= -eps)
            CHECK(h == doctest::Approx(std::sqrt(std::max(0.0, 1 - (x + 1) * (x + 1)))));
        else if (x >= eps && x <= 2 - eps)
            CHECK(h == doctest::Approx(eps));
        if (x > -1 && i + 1 < p.size())
            CHECK(p[i + 1].second <= h + 1e-15);
    }
    CHECK_THROWS_WITH_AS(spline_profile(0.6, 64), doctest::Contains("degenerate profile"), Error);
    CHECK_THROWS_AS(spline_profile(0.1, 8), Error);
    CHECK_THROWS_AS(build_spline(0.1, 64, 8), Error);
}

TEST_CASE("spline test function has mean zero and the right shape")
{
    const auto S = build_spline(0.1, 64, 64);
    CHECK(std::abs(integrate(S.surface, S.f)) <= 1e-12 * mass(S.surface));
    CHECK(S.c > 0);
    for (Eigen::Index i = 0; i < S.f.size(); ++i) {
        const double x = S.surface.vertices()(i, 0);
        if (x <= -0.1)
            CHECK(S.f(i) == doctest::Approx(-S.c));
        else if (x >= 0.1 && x <= 1.9)
            CHECK(S.f(i) == doctest::Approx(std::sin(std::numbers::pi * x / 4)));
    }
}

TEST_CASE("spline experiment reproduces the jump up")
{
    SplineOptions opts;
    const auto report = run_spline_experiment(opts);
    REQUIRE(report["records"].size() == 3);
    CHECK(report["parameters"]["profile_resolution"] == 128);
    CHECK(report["parameters"]["angular_resolution"] == 256);
    double prev_gap = INFINITY;
    for (const auto& r : report["records"]) {
        CHECK(r["lambda1"].get<double>() <= r["rayleigh_quotient"].get<double>() + 1e-8);
        CHECK(r["mass_relative_gap"].get<double>() < prev_gap);
        prev_gap = r["mass_relative_gap"].get<double>();
    }
    const auto& last = report["records"][2];
    CHECK(last["eps"] == 0.05);
    CHECK(last["rayleigh_quotient"].get<double>() <= std::pow(std::numbers::pi / 4, 2) + 0.02);
    CHECK(last["mass_relative_gap"].get<double>() <= 0.08);
    CHECK(report["sphere"]["lambda1"].get<double>() >= 1.9);
}

TEST_CASE("cancellation meshes")
{
    CHECK_THROWS_WITH_AS(build_cancellation(1, 0), doctest::Contains("too coarse"), Error);

    const auto C = build_cancellation(1, 2);
    CHECK(C.hole_level == 1);
    // j = 1: the holes merge into [-3/4, 3/4]^2, leaving a square frame of
    // area 4 - 9/4 and thickness 1/2.
    CHECK(mass(C.filling) == doctest::Approx((4 - 2.25) * 0.5));
    // Sheet faces 2 * 1.75, minus two contact patches 2 * 1, plus outer
    // walls 2 * 2 * 0.5, plus hole walls 4 * 1.5 * 0.5.
    CHECK(mass(C.sheet_surface) - mass(C.cubes_surface) == doctest::Approx(6.5));
    CHECK(mass(C.cubes_surface) == doctest::Approx(48.0));
    CHECK(boundary(C.sheet_surface).is_zero());
}

TEST_CASE("cancellation experiment")
{
    CancellationOptions opts;
    const auto report = run_cancellation_experiment(opts);
    CHECK(report["limit"]["lambda1"].get<double>() <= 1e-8);
    REQUIRE(report["records"].size() == 2);
    CHECK(report["records"][0]["lambda1"].get<double>() >= 0.02);
    for (const auto& r : report["records"])
        CHECK(r["mass_gap"].get<double>() >= 1.0);
    const auto& first = report["records"][0];
    CHECK(first["flat_witness"] == "shared complex LP");
    CHECK(first["flat_distance"].get<double>() == doctest::Approx(0.875).epsilon(1e-9));
    CHECK(first["flat_distance"].get<double>() <= first["flat_upper_bound"].get<double>() + 1e-9);
    CHECK(report["parameters"]["tunnel_resolution"] == 2);
}

TEST_CASE("sweep families")
{
    SweepOptions bad;
    bad.family = "nope";
    CHECK_THROWS_WITH_AS(run_semicontinuity_sweep(bad), doctest::Contains("unknown family"), Error);

    SweepOptions t;
    t.family = "translated-chains-in-complex";
    t.K = 2;
    const auto tr = run_semicontinuity_sweep(t);
    CHECK(tr["verdict"] == "PASS");
    for (const auto& row : tr["table"])
        CHECK(row["flat_distance"].get<double>() == doctest::Approx(2 * row["shift"].get<double>()).epsilon(1e-9));

    SweepOptions c;
    c.family = "cancellation";
    const auto cr = run_semicontinuity_sweep(c);
    CHECK(cr["expected"] == "FAIL");
    CHECK(cr["verdict"] == "FAIL");
    for (const auto& row : cr["table"])
        CHECK(row["mass_gap"].get<double>() >= 1.0);

    SweepOptions s;
    s.family = "refined-sphere";
    s.K = 4;
    s.slack_rel = 0.01;
    s.slack_abs = 0.0;
    const auto sr = run_semicontinuity_sweep(s);
    CHECK(sr["verdict"] == "PASS");
    CHECK(sr["parameters"]["burn_in"] == 2);
}

TEST_CASE("property: verdicts are monotone in slack")
{
    const std::vector<std::vector<double>> seq{{2.3, 6.5}, {2.1, 6.2}, {2.01, 6.05}};
    const std::vector<double> limit{2.0, 6.0};
    for (int burn = 0; burn < 3; ++burn) {
        std::vector<bool> prev(2, false);
        for (double slack = 0.0; slack <= 0.3; slack += 0.005) {
            const auto v = sweep_verdicts(seq, limit, slack, 0.0, burn);
            for (int k = 0; k < 2; ++k) {
                if (prev[k])
                    CHECK(v[k].pass);
                prev[k] = v[k].pass;
            }
        }
        for (bool p : prev)
            CHECK(p);
    }
}

TEST_CASE("property: reports are deterministic")
{
    SweepOptions t;
    t.family = "translated-chains-in-complex";
    CHECK(run_semicontinuity_sweep(t).dump() == run_semicontinuity_sweep(t).dump());
    CancellationOptions c;
    c.j = {1};
    CHECK(run_cancellation_experiment(c).dump() == run_cancellation_experiment(c).dump());
}
