#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "climctl/model.hpp"

using namespace climctl;

TEST_CASE("shortwave coefficients match direct arithmetic") {
    const ModelParams p;
    const ShortwaveCoeffs sw = shortwave_coefficients(p);
    // (1-0.25)*0.241*(1+0.759*0.132)*342 and (1-0.25)*0.759*0.868*342
    CHECK(sw.s_a == doctest::Approx(68.0).epsilon(0.01));
    CHECK(sw.s_s == doctest::Approx(169.0).epsilon(0.01));
}

TEST_CASE("no atmospheric absorption gives zero atmospheric shortwave") {
    ModelParams p;
    p.a = 0.0;  // outside validate()'s range, but the coefficient map is total
    const ShortwaveCoeffs sw = shortwave_coefficients(p);
    CHECK(sw.s_a == 0.0);
}

TEST_CASE("published equilibria are fixed points to within rounding") {
    SUBCASE("base parameterization") {
        const ModelParams p;
        const NetFluxes f = net_fluxes({270.2, 288.0}, {}, p);
        CHECK(std::fabs(f.f_a) < 0.5);
        CHECK(std::fabs(f.f_s) < 0.5);
    }
    SUBCASE("warmed parameterization") {
        const NetFluxes f = net_fluxes({271.56, 290.34}, {}, warmed_params());
        CHECK(std::fabs(f.f_a) < 0.5);
        CHECK(std::fabs(f.f_s) < 0.5);
    }
}

TEST_CASE("control dependence is exactly linear with slope -s/C") {
    const ModelParams p;
    const ShortwaveCoeffs sw = shortwave_coefficients(p);
    const ClimateState states[] = {{270.2, 288.0}, {274.0, 292.0}, {260.0, 300.0}};
    for (const ClimateState& x : states) {
        const StateRate r0 = rhs(x, {0.0}, p);
        const StateRate r1 = rhs(x, {0.03}, p);
        CHECK((r1.d_t_a - r0.d_t_a) / 0.03 == doctest::Approx(-sw.s_a / p.c_a).epsilon(1e-12));
        CHECK((r1.d_t_s - r0.d_t_s) / 0.03 == doctest::Approx(-sw.s_s / p.c_s).epsilon(1e-12));
        // larger u always cools, both boxes
        CHECK(r1.d_t_a < r0.d_t_a);
        CHECK(r1.d_t_s < r0.d_t_s);
    }
}

TEST_CASE("rhs rejects non-finite state") {
    const ModelParams p;
    CHECK_THROWS_AS(rhs({std::nan(""), 288.0}, {}, p), ModelError);
}

TEST_CASE("equilibrium anchors") {
    SUBCASE("eps = 0.812") {
        const ClimateState eq = equilibrium(ModelParams{});
        CHECK(eq.t_a == doctest::Approx(270.2).epsilon(0.1 / 270.2));
        CHECK(std::fabs(eq.t_a - 270.2) < 0.1);
        CHECK(std::fabs(eq.t_s - 288.0) < 0.1);
    }
    SUBCASE("eps = 0.8408") {
        const ClimateState eq = equilibrium(warmed_params());
        CHECK(std::fabs(eq.t_a - 271.56) < 0.05);
        CHECK(std::fabs(eq.t_s - 290.34) < 0.05);
    }
    SUBCASE("eps = 0.8408, full control") {
        // Frozen from an independent root find on the net fluxes at u = 0.03.
        const ClimateState eq = equilibrium(warmed_params(), {0.03});
        CHECK(std::fabs(eq.t_a - 269.5573) < 5e-3);
        CHECK(std::fabs(eq.t_s - 287.9834) < 5e-3);
    }
}

TEST_CASE("equilibrium residual is below the solver tolerance") {
    for (const ModelParams& p : {ModelParams{}, warmed_params()}) {
        const ClimateState eq = equilibrium(p);
        const NetFluxes f = net_fluxes(eq, {}, p);
        CHECK(std::fabs(f.f_a) < 1e-6);
        CHECK(std::fabs(f.f_s) < 1e-6);
    }
}

TEST_CASE("steady-state surface temperature decreases monotonically in u") {
    const ModelParams p = warmed_params();
    double prev = 1e9;
    for (double u : {0.0, 0.01, 0.02, 0.03}) {
        const ClimateState eq = equilibrium(p, {u});
        CHECK(eq.t_s < prev);
        prev = eq.t_s;
    }
}

TEST_CASE("parameter validation names the offending field") {
    ModelParams p;
    p.q = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("q"), ModelError);
    p = ModelParams{};
    p.eps = 1.5;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("eps"), ModelError);
}

TEST_CASE("finite-difference jacobian is exact on a linear map") {
    // rhs is quartic, so instead check against the analytic partials of the
    // flux form at a reference state.
    const ModelParams p;
    const ClimateState x{275.0, 289.0};
    const Matrix2 j = jacobian(x, {}, p);
    const double ta3 = x.t_a * x.t_a * x.t_a;
    const double ts3 = x.t_s * x.t_s * x.t_s;
    const double j00 = (-8.0 * p.eps * p.delta * ta3 - p.h) / p.c_a;
    const double j01 = (4.0 * p.eps * p.delta * ts3 + p.h) / p.c_a;
    const double j10 = ((16.0 / 3.0) * p.eps * p.delta * ta3 + p.h) / p.c_s;
    const double j11 = (-4.0 * p.delta * ts3 - p.h) / p.c_s;
    CHECK(j[0][0] == doctest::Approx(j00).epsilon(1e-6));
    CHECK(j[0][1] == doctest::Approx(j01).epsilon(1e-6));
    CHECK(j[1][0] == doctest::Approx(j10).epsilon(1e-6));
    CHECK(j[1][1] == doctest::Approx(j11).epsilon(1e-6));
    // warmer surface heats the atmosphere and vice versa
    CHECK(j[0][1] > 0.0);
    CHECK(j[1][0] > 0.0);
}

TEST_CASE("both equilibria are stable nodes") {
    for (const ModelParams& p : {ModelParams{}, warmed_params()}) {
        const ClimateState eq = equilibrium(p);
        const auto eig = eigenvalue_real_parts(jacobian(eq, {}, p));
        CHECK(eig[0] < 0.0);
        CHECK(eig[1] < 0.0);
    }
}

TEST_CASE("state plausibility window") {
    CHECK(state_plausible({270.0, 288.0}));
    CHECK_FALSE(state_plausible({100.0, 288.0}));
    CHECK_FALSE(state_plausible({270.0, 500.0}));
    CHECK_THROWS_AS(require_plausible({0.0, 0.0}, "test"), ModelError);
}
