#include "wavectl/semilinear.hpp"

#include "support/oracles.hpp"
#include "wavectl/simulate.hpp"

#include <doctest.h>

using namespace wavectl;

namespace {

const double pi = oracles::pi();

GridFunction compat_profile(int n, double amp) {
    // y(0) = 0 and y'(1) = 0: compatible with both closures
    return GridFunction::from_function(
        n, [&](double x) { return amp * std::sin(0.5 * pi * x); });
}

}  // namespace

TEST_CASE("exact reduction to the characteristic solver") {
    const int n = 64;
    const double T = 3.0;
    const GridFunction y0 = compat_profile(n, 1.0);
    const auto y1 = GridFunction::from_function(
        n, [](double x) { return 0.3 * std::sin(pi * x); });
    SemilinearOptions opts;
    opts.cfl = 1.0;
    const Trajectory fd =
        simulate_semilinear(Nonlinearity::none(), Disturbance::none(), y0, y1, T, opts);
    const Trajectory ref = simulate_linear(y0, y1, NeumannFeedback{1.0, std::nullopt}, T);
    REQUIRE(fd.levels() == ref.levels());
    CHECK((fd.y - ref.y).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("second-order convergence with an active nonlinearity") {
    const double w = 0.02;
    const double T = 2.0;
    SemilinearOptions opts;
    opts.cfl = 0.5;
    // data compatible with the closures to second order, so the solution is
    // smooth enough for the scheme's full rate
    const auto y0f = [](double x) { return 0.5 * std::sin(0.5 * pi * x); };
    const auto y1f = [](double x) {
        const double s = x - 1.0;
        return (pi * pi / 8.0) * (s + s * s);
    };
    const auto run = [&](int n) {
        return simulate_semilinear(Nonlinearity::constant(w), Disturbance::none(),
                                   GridFunction::from_function(n, y0f),
                                   GridFunction::from_function(n, y1f), T, opts);
    };
    const Trajectory coarse = run(64);
    const Trajectory mid = run(128);
    const Trajectory fine = run(512);

    // compare terminal snapshots on the coarse nodes
    const auto err = [&](const Trajectory& tr, int factor) {
        double e = 0.0;
        const int rows = tr.levels() - 1;
        const int frows = fine.levels() - 1;
        for (int i = 0; i <= 64; ++i)
            e = std::max(e, std::abs(tr.y(rows, i * factor) - fine.y(frows, i * 8)));
        return e;
    };
    const double e_coarse = err(coarse, 1);
    const double e_mid = err(mid, 2);
    CHECK(e_coarse / e_mid >= 3.0);
}

TEST_CASE("sup-norm decay beats the claimed rate") {
    SemilinearOptions opts;
    opts.cfl = 0.5;
    const int n = 200;
    const double T = 16.0;
    for (double w : {1.0 / 80.0, 1.0 / 40.0, 1.0 / 30.0}) {
        const Trajectory tr =
            simulate_semilinear(Nonlinearity::constant(w), Disturbance::none(),
                                compat_profile(n, 0.1), GridFunction::zero(n), T, opts);
        const SupDecayFit fit = fit_supnorm_decay(tr, 2.0, T);
        const double mu = std::abs(std::log(20.0 * w));
        CHECK(fit.rate >= 0.9 * mu);
    }
}

TEST_CASE("disturbance response and limited memory") {
    const int n = 400;
    SemilinearOptions opts;
    opts.cfl = 0.5;
    SUBCASE("zero disturbance gives the zero trajectory") {
        const Trajectory tr = disturbance_response(Disturbance::none(), 4.0, 32, opts);
        CHECK(tr.y.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("responses agree when the disturbances agree on (t-4, t)") {
        // common late part, different early part that is silent after t0 - 4
        const double t0 = 10.0;
        const auto common = [](double t, double x) {
            return (t < 1.0) ? std::sin(pi * x) : 0.0;
        };
        const auto early_extra = [](double t, double x) {
            if (t >= 5.0) return 0.0;
            const double win = std::sin(pi * t / 5.0);
            return 0.8 * win * win * std::sin(pi * x);
        };
        Disturbance d1{[&](double t, double x) { return common(t, x); }, 1.0};
        Disturbance d2{[&](double t, double x) { return common(t, x) + early_extra(t, x); },
                       2.0};
        const Trajectory r1 = disturbance_response(d1, t0, n, opts);
        const Trajectory r2 = disturbance_response(d2, t0, n, opts);
        const int last = r1.levels() - 1;
        const double diff = (r1.y.row(last) - r2.y.row(last)).cwiseAbs().maxCoeff();
        CHECK(diff <= 1e-6);
    }
}

TEST_CASE("sup-norm windows") {
    const int n = 128;
    const GridFunction y0 = compat_profile(n, 4.0);
    SUBCASE("free oscillation attains the initial amplitude") {
        const Trajectory tr =
            simulate_linear(y0, GridFunction::zero(n), NeumannFeedback{0.0, std::nullopt}, 2.0);
        CHECK(std::abs(supnorm_window(tr, 0.0, 2.0) - 4.0) < 1e-6);
    }
    SUBCASE("after full absorption the window is empty of energy") {
        const Trajectory tr =
            simulate_linear(y0, GridFunction::zero(n), NeumannFeedback{1.0, std::nullopt}, 4.0);
        CHECK(supnorm_window(tr, 2.0, 4.0) < 1e-12);
    }
    SUBCASE("window validation") {
        const Trajectory tr =
            simulate_linear(y0, GridFunction::zero(n), NeumannFeedback{0.0, std::nullopt}, 2.0);
        CHECK_THROWS_AS(supnorm_window(tr, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(supnorm_window(tr, 0.0, 3.0), std::invalid_argument);
    }
}

TEST_CASE("iss robustness estimate") {
    SUBCASE("coefficients at w = 1/40, k = 1") {
        // geometric factor 20w = 1/2 and sum coefficient (1-q)/(1-q) = 1
        const double q = 20.0 / 40.0;
        CHECK(q == 0.5);
        CHECK((1.0 - q) / (1.0 - q) == 1.0);
    }
    SUBCASE("margins are positive for a persistent disturbance") {
        const int n = 200;
        const double w = 1.0 / 40.0;
        SemilinearOptions opts;
        opts.cfl = 0.5;
        Disturbance dist{[](double, double x) { return 0.01 * std::sin(pi * x); }, 0.01};
        const Trajectory y_tr =
            simulate_semilinear(Nonlinearity::constant(w), dist, compat_profile(n, 0.1),
                                GridFunction::zero(n), 12.0, opts);
        const Trajectory d_tr = disturbance_response(dist, 12.0, n, opts);
        const IssReport rep = iss_check(y_tr, d_tr, w, 5);
        CHECK(rep.pass);
        REQUIRE(rep.bounds.size() == 5);
        for (const auto& b : rep.bounds) CHECK(b.margin >= 0.0);
    }
    SUBCASE("hypothesis validation") {
        const Trajectory tr = disturbance_response(Disturbance::none(), 4.0, 16, {});
        CHECK_THROWS_AS(iss_check(tr, tr, 0.06, 1), std::invalid_argument);
    }
}

TEST_CASE("runtime guards") {
    const int n = 64;
    SUBCASE("nonlinearity beyond its declared bound") {
        Nonlinearity lying{[](double, double) { return 1.0; }, 0.01};
        CHECK_THROWS_AS(simulate_semilinear(lying, Disturbance::none(), compat_profile(n, 0.1),
                                            GridFunction::zero(n), 1.0, {}),
                        std::runtime_error);
    }
    SUBCASE("blow-up detection") {
        // strong anti-damping overwhelms the boundary absorption
        Nonlinearity strong = Nonlinearity::constant(2.5);
        CHECK_THROWS_AS(simulate_semilinear(strong, Disturbance::none(), compat_profile(n, 100.0),
                                            GridFunction::zero(n), 40.0, {}),
                        std::runtime_error);
    }
    SUBCASE("cfl validation") {
        SemilinearOptions opts;
        opts.cfl = 1.5;
        CHECK_THROWS_AS(simulate_semilinear(Nonlinearity::none(), Disturbance::none(),
                                            compat_profile(n, 1.0), GridFunction::zero(n), 1.0,
                                            opts),
                        std::invalid_argument);
    }
}
