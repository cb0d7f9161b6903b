#include <cmath>
#include <random>

#include <doctest.h>

#include "netecon/equilibrium.hpp"
#include "oracles.hpp"

using namespace netecon;
using namespace netecon::equilibrium;
using demand::CongestionKind;
using demand::DemandParams;

namespace {

GameSpec linear_game(double ps = 0.0) {
    GameSpec spec;
    spec.demand.d_max = 12.0;
    spec.demand.d_sens = 1.0;
    spec.demand.g_kind = CongestionKind::None;
    spec.side_payment = ps;
    return spec;
}

// curvature a = (1-0)/(B-0) = 1/B
GameSpec concave_game(double a, double d_max = 12.0, double d_sens = 1.0) {
    GameSpec spec;
    spec.demand.d_max = d_max;
    spec.demand.d_sens = d_sens;
    spec.demand.bandwidth = 1.0 / a;
    spec.demand.lambda = 0.0;
    spec.demand.g_kind = CongestionKind::Linear;
    return spec;
}

GameSpec mm1_game() {
    GameSpec spec;
    spec.demand.d_max = 12.0;
    spec.demand.d_sens = 1.0;
    spec.demand.bandwidth = 20.0;
    spec.demand.lambda = 2.0;
    spec.demand.g_kind = CongestionKind::MM1;
    return spec;
}

}  // namespace

TEST_CASE("utilities: symmetric linear point") {
    auto spec = linear_game();
    CHECK(utility_isp(4.0, 4.0, spec) == doctest::Approx(16.0));
    CHECK(utility_cp(4.0, 4.0, spec) == doctest::Approx(16.0));
}

TEST_CASE("utilities: side payment moves revenue between players") {
    auto spec = linear_game(2.0);
    // D(8) = 4: ISP earns (3+2)*4, CP earns (5-2)*4
    CHECK(utility_isp(3.0, 5.0, spec) == doctest::Approx(20.0));
    CHECK(utility_cp(3.0, 5.0, spec) == doctest::Approx(12.0));
}

TEST_CASE("utilities: scale zero removes the side payment") {
    auto spec = linear_game(5.0);
    spec.side_payment_scale = 0.0;
    spec.fixed_cost_isp = 2.0;
    CHECK(utility_isp(4.0, 4.0, spec) == doctest::Approx(4.0 * 4.0 - 2.0));
}

TEST_CASE("utilities: zero gross revenue at p1 = -s") {
    auto spec = linear_game(1.0);
    spec.fixed_cost_isp = 3.0;
    CHECK(utility_isp(-1.0, 5.0, spec) == doctest::Approx(-3.0));
    CHECK(utility_cp(3.0, 1.0, spec) == doctest::Approx(0.0));
}

TEST_CASE("utilities: total price out of range") {
    auto spec = linear_game();
    CHECK_THROWS_AS(utility_isp(8.0, 8.0, spec), PriceOutOfRange);
    CHECK_THROWS_AS(utility_cp(-1.0, 0.5, spec), PriceOutOfRange);
}

TEST_CASE("nash_linear: symmetric equilibrium") {
    auto eq = nash_linear(linear_game());
    CHECK(eq.p1 == doctest::Approx(4.0));
    CHECK(eq.p2 == doctest::Approx(4.0));
    CHECK(eq.u1 == 16.0);
    CHECK(eq.u2 == 16.0);
    CHECK(eq.demand_at_eq == doctest::Approx(4.0));
    CHECK(eq.valid_interior);
    CHECK(eq.method == Method::ClosedFormLinear);
}

TEST_CASE("nash_linear: side payment shifts the split only") {
    auto eq = nash_linear(linear_game(1.0));
    CHECK(eq.p1 == doctest::Approx(3.0));
    CHECK(eq.p2 == doctest::Approx(5.0));
    CHECK(eq.u1 == 16.0);
    CHECK(eq.u2 == 16.0);

    auto brute = oracles::brute_force_linear_nash(12.0, 1.0, 1.0);
    CHECK(std::abs(brute.p1 - eq.p1) < 1e-5);
    CHECK(std::abs(brute.p2 - eq.p2) < 1e-5);
}

TEST_CASE("nash_linear: utilities are exactly symmetric for any valid side payment") {
    std::mt19937 rng(321);
    std::uniform_real_distribution<double> ps(-3.9, 3.9);
    for (int trial = 0; trial < 50; ++trial) {
        auto eq = nash_linear(linear_game(ps(rng)));
        CHECK(eq.u1 == eq.u2);
        CHECK(eq.u1 == 12.0 * 12.0 / 9.0);
    }
}

TEST_CASE("nash_linear: fixed cost reduces the ISP utility only") {
    auto spec = linear_game();
    spec.fixed_cost_isp = 5.0;
    auto eq = nash_linear(spec);
    CHECK(eq.u1 == doctest::Approx(11.0));
    CHECK(eq.u2 == doctest::Approx(16.0));
}

TEST_CASE("nash_linear: boundary side payments are rejected") {
    CHECK_THROWS_AS(nash_linear(linear_game(4.0)), SidePaymentTooLarge);
    CHECK_THROWS_AS(nash_linear(linear_game(-4.0)), SidePaymentTooLarge);
    try {
        nash_linear(linear_game(4.0));
    } catch (const SidePaymentTooLarge& e) {
        CHECK(e.bound == doctest::Approx(4.0));
        CHECK(e.side_payment == doctest::Approx(4.0));
    }
}

TEST_CASE("nash_linear: refuses curved demand") {
    CHECK_THROWS_AS(nash_linear(concave_game(1.0)), DomainError);
}

TEST_CASE("nash_concave_closed: reference value at a = 1") {
    auto eq = nash_concave_closed(concave_game(1.0));
    double expected = (51.0 - std::sqrt(105.0)) / 4.0;  // root of 2p^2 - 51p + 312
    CHECK(std::abs(eq.p_total - expected) < 1e-12);
    CHECK(eq.p1 == doctest::Approx(expected / 2.0));
    CHECK(eq.valid_interior);
    CHECK(eq.foc_residual < 1e-9);
}

TEST_CASE("nash_concave_closed: vanishing curvature approaches the linear total") {
    auto eq = nash_concave_closed(concave_game(1e-9));
    CHECK(std::abs(eq.p_total - 8.0) < 1e-6);
}

TEST_CASE("nash_concave_closed: negative side payment flips the split") {
    auto spec = concave_game(1.0);
    spec.side_payment = -1.0;
    auto eq = nash_concave_closed(spec);
    CHECK(eq.p1 == doctest::Approx(eq.p_total / 2.0 + 1.0));
    CHECK(eq.p2 == doctest::Approx(eq.p_total / 2.0 - 1.0));
}

TEST_CASE("nash_concave_closed: validity bound uses the scaled payment") {
    auto spec = concave_game(1.0);  // p* ~ 10.19, bound ~ 5.09
    spec.side_payment = 6.0;
    CHECK_THROWS_AS(nash_concave_closed(spec), SidePaymentTooLarge);
    spec.side_payment_scale = 0.5;  // scaled payment 3.0 is interior again
    CHECK(nash_concave_closed(spec).valid_interior);
    CHECK_THROWS_AS(nash_concave_closed(mm1_game()), DomainError);
}

TEST_CASE("nash_numeric_foc: agrees with the closed form") {
    for (double a : {1e-6, 0.01, 0.1, 1.0, 10.0}) {
        for (double d_max : {1.0, 12.0, 100.0}) {
            auto spec = concave_game(a, d_max, 1.0);
            auto closed = nash_concave_closed(spec);
            auto numeric = nash_numeric_foc(spec);
            CHECK(std::abs(closed.p_total - numeric.p_total) <= 1e-8);
        }
    }
}

TEST_CASE("nash_numeric_foc: linear demand gives two thirds of p_max") {
    auto eq = nash_numeric_foc(linear_game());
    CHECK(std::abs(eq.p_total - 8.0) < 1e-9);
    CHECK(eq.method == Method::NumericFoc);
}

TEST_CASE("nash_numeric_foc: recovers the linear theorem as curvature vanishes") {
    auto foc = nash_numeric_foc(concave_game(1e-9));
    auto linear = nash_linear(linear_game());
    CHECK(std::abs(foc.p_total - linear.p_total) < 1e-4);
    CHECK(std::abs(foc.u1 - linear.u1) < 1e-4);
}

TEST_CASE("nash_numeric_foc: MM1 demand solves and is a Nash point") {
    auto eq = nash_numeric_foc(mm1_game());
    CHECK(eq.valid_interior);
    CHECK(eq.p_total > 0.0);
    CHECK(eq.p_total < 12.0);
    CHECK(eq.foc_residual < 1e-8);
    auto report = verify_nash(eq, mm1_game(), 1000);
    CHECK(report.passed);
}

TEST_CASE("nash_numeric_foc: bracket without a sign change") {
    CHECK_THROWS_AS(nash_numeric_foc(linear_game(), {0.01, 0.02}), NoSignChange);
}

TEST_CASE("best_response: analytic linear replies") {
    CHECK(best_response(1, 4.0, linear_game()).price == doctest::Approx(4.0).epsilon(1e-6));
    // (12 - 5)/2 - 1/2 = 3
    CHECK(best_response(1, 5.0, linear_game(1.0)).price == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("best_response: degenerate at the price ceiling") {
    auto r = best_response(2, 12.0, linear_game());
    CHECK(r.degenerate);
    CHECK(r.price == 0.0);
}

TEST_CASE("best_response: player index validated") {
    CHECK_THROWS_AS(best_response(3, 1.0, linear_game()), DomainError);
    CHECK_THROWS_AS(best_response(1, -1.0, linear_game()), PriceOutOfRange);
}

TEST_CASE("best responses fix every computed equilibrium") {
    auto check_fixed_point = [](const GameSpec& spec, const Equilibrium& eq) {
        CHECK(std::abs(best_response(1, eq.p2, spec).price - eq.p1) < 1e-6);
        CHECK(std::abs(best_response(2, eq.p1, spec).price - eq.p2) < 1e-6);
    };
    check_fixed_point(linear_game(1.0), nash_linear(linear_game(1.0)));
    check_fixed_point(concave_game(1.0), nash_concave_closed(concave_game(1.0)));
    check_fixed_point(mm1_game(), nash_numeric_foc(mm1_game()));
}

TEST_CASE("side-payment neutrality of totals and ISP revenue") {
    for (double ps : {0.0, 1.0, 2.0, -2.0, 4.0}) {
        auto spec = concave_game(1.0);
        spec.side_payment = ps;
        auto eq = nash_concave_closed(spec);
        auto base = nash_concave_closed(concave_game(1.0));
        CHECK(std::abs(eq.p_total - base.p_total) < 1e-12);
        CHECK(std::abs(eq.u1 - base.u1) < 1e-9);
        CHECK(std::abs(eq.demand_at_eq - base.demand_at_eq) < 1e-12);
    }
}

TEST_CASE("best_response_dynamics: a Nash point stays fixed") {
    auto eq = nash_linear(linear_game());
    auto traj = best_response_dynamics(linear_game(), {eq.p1, eq.p2}, 20);
    CHECK(traj.converged);
    for (const auto& pt : traj.points) {
        CHECK(std::abs(pt.p1 - eq.p1) < 1e-6);
        CHECK(std::abs(pt.p2 - eq.p2) < 1e-6);
    }
}

TEST_CASE("best_response_dynamics: converges from the origin") {
    auto traj = best_response_dynamics(linear_game(), {0.0, 0.0}, 100);
    CHECK(traj.converged);
    CHECK(std::abs(traj.points.back().p1 - 4.0) < 1e-6);
    CHECK(std::abs(traj.points.back().p2 - 4.0) < 1e-6);
}

TEST_CASE("best_response_dynamics: converges to the concave closed form") {
    auto spec = concave_game(1.0);
    auto eq = nash_concave_closed(spec);
    for (bool simultaneous : {true, false}) {
        auto traj = best_response_dynamics(spec, {1.0, 1.0}, 200, simultaneous);
        CHECK(traj.converged);
        CHECK(std::abs(traj.points.back().p1 - eq.p1) < 1e-6);
        CHECK(std::abs(traj.points.back().p2 - eq.p2) < 1e-6);
    }
}

TEST_CASE("best_response_dynamics: input validation") {
    CHECK_THROWS_AS(best_response_dynamics(linear_game(), {0.0, 0.0}, 0), DomainError);
    CHECK_THROWS_AS(best_response_dynamics(linear_game(), {-1.0, 0.0}, 5),
                    PriceOutOfRange);
}

TEST_CASE("verify_nash: passes at the equilibrium, fails off it") {
    auto spec = linear_game();
    auto eq = nash_linear(spec);
    auto report = verify_nash(eq, spec, 1000);
    CHECK(report.passed);
    CHECK(report.max_gain_isp <= 1e-9);
    CHECK(report.max_gain_cp <= 1e-9);
    CHECK_FALSE(report.boundary_proximity);

    auto off = eq;
    off.p1 += 0.1;
    off.p_total = off.p1 + off.p2;
    auto bad = verify_nash(off, spec, 1000);
    CHECK_FALSE(bad.passed);
    CHECK(bad.max_gain_isp > 1e-6);
    CHECK(std::abs(bad.best_price_isp - 4.0) < 0.05);
}

TEST_CASE("verify_nash: flags side payments at the validity boundary") {
    auto spec = linear_game(4.0 - 1e-9);
    auto eq = nash_linear(spec);
    auto report = verify_nash(eq, spec, 100);
    CHECK(report.boundary_proximity);
}

TEST_CASE("verify_nash: serial and parallel scans agree exactly") {
    auto spec = mm1_game();
    auto eq = nash_numeric_foc(spec);
    auto par = verify_nash(eq, spec, 777);
    auto ser = verify_nash_serial(eq, spec, 777);
    CHECK(par.passed == ser.passed);
    CHECK(par.max_gain_isp == ser.max_gain_isp);
    CHECK(par.max_gain_cp == ser.max_gain_cp);
    CHECK(par.best_price_isp == ser.best_price_isp);
    CHECK(par.best_price_cp == ser.best_price_cp);
}

TEST_CASE("verify_nash: input validation") {
    auto spec = linear_game();
    auto eq = nash_linear(spec);
    CHECK_THROWS_AS(verify_nash(eq, spec, 0), DomainError);
    eq.valid_interior = false;
    CHECK_THROWS_AS(verify_nash(eq, spec, 10), DomainError);
}

TEST_CASE("GameSpec validation") {
    auto spec = linear_game();
    spec.side_payment_scale = 1.5;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = linear_game();
    spec.fixed_cost_isp = -1.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
}
