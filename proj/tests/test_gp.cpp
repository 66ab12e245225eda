#include <doctest.h>

#include <cmath>

#include "jpa/gp.hpp"

using namespace jpa;

TEST_CASE("monomial and posynomial evaluation")
{
    Eigen::VectorXd x(2);
    x << 2.0, 3.0;
    const Monomial m = Monomial::make(1.5, {{0, 2.0}, {1, -1.0}});
    CHECK(m.eval(x) == doctest::Approx(1.5 * 4.0 / 3.0));
    Posynomial p;
    p.add(1.0, {{0, 1.0}}).add(2.0, {{1, 0.5}});
    CHECK(p.eval(x) == doctest::Approx(2.0 + 2.0 * std::sqrt(3.0)));
    CHECK(p.log_eval(x.array().log().matrix()) == doctest::Approx(std::log(2.0 + 2.0 * std::sqrt(3.0))));
}

TEST_CASE("log_eval survives extreme magnitudes")
{
    Posynomial p;
    p.add(1e-300, {{0, 1.0}}).add(1e-300, {{0, 1.0}});
    Eigen::VectorXd y(1);
    y << -400.0; // x = e^-400, far below the smallest double
    CHECK(p.log_eval(y) == doctest::Approx(std::log(2e-300) - 400.0));
}

TEST_CASE("small GP with a known optimum")
{
    // maximise x subject to x / y <= 1, y / 2 <= 1, 0.5 / x <= 1  ->  x = 2
    GeometricProgram gp;
    gp.n_vars = 2;
    gp.objective_var = 0;
    gp.add_constraint(Posynomial{}.add(1.0, {{0, 1.0}, {1, -1.0}}), "x<=y");
    gp.add_constraint(Posynomial{}.add(0.5, {{1, 1.0}}), "y<=2");
    gp.add_constraint(Posynomial{}.add(0.5, {{0, -1.0}}), "x>=0.5");
    const GpResult r = solve_gp(gp, Eigen::VectorXd::Zero(2));
    REQUIRE(r.status == GpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(max_log_constraint(gp, r.log_x) <= 1e-9);
    CHECK(r.multipliers.size() == 3);
    CHECK(r.multipliers[2] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("posynomial constraint with several terms")
{
    // maximise x subject to x + x^2 <= 6 (x = 2)
    GeometricProgram gp;
    gp.n_vars = 1;
    gp.objective_var = 0;
    gp.add_constraint(Posynomial{}.add(1.0 / 6.0, {{0, 1.0}}).add(1.0 / 6.0, {{0, 2.0}}), "quad");
    const GpResult r = solve_gp(gp, Eigen::VectorXd::Constant(1, -5.0));
    REQUIRE(r.status == GpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("infeasible GP is certified by phase I")
{
    // y <= 1 and 2 / y <= 1 cannot both hold
    GeometricProgram gp;
    gp.n_vars = 2;
    gp.objective_var = 0;
    gp.add_constraint(Posynomial{}.add(1.0, {{1, 1.0}}), "y<=1");
    gp.add_constraint(Posynomial{}.add(2.0, {{1, -1.0}}), "y>=2");
    gp.add_constraint(Posynomial{}.add(1.0, {{0, 1.0}}), "x<=1");
    const GpResult r = solve_gp(gp, Eigen::VectorXd::Zero(2));
    CHECK(r.status == GpStatus::Infeasible);
    CHECK(r.phase1_slack == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-4));
}

TEST_CASE("iteration cap reports max-iter with the best point")
{
    GeometricProgram gp;
    gp.n_vars = 2;
    gp.objective_var = 0;
    gp.add_constraint(Posynomial{}.add(1.0, {{0, 1.0}, {1, -1.0}}), "x<=y");
    gp.add_constraint(Posynomial{}.add(0.5, {{1, 1.0}}), "y<=2");
    GpOptions opts;
    opts.max_iter = 3;
    const GpResult r = solve_gp(gp, Eigen::VectorXd::Constant(2, -20.0), opts);
    CHECK(r.status == GpStatus::MaxIter);
    CHECK(r.log_x.size() == 2);
}

TEST_CASE("solution is invariant to the starting point")
{
    GeometricProgram gp;
    gp.n_vars = 3;
    gp.objective_var = 2;
    // z <= x y, x + y <= 1  ->  x = y = 1/2, z = 1/4
    gp.add_constraint(Posynomial{}.add(1.0, {{2, 1.0}, {0, -1.0}, {1, -1.0}}), "z<=xy");
    gp.add_constraint(Posynomial{}.add(1.0, {{0, 1.0}}).add(1.0, {{1, 1.0}}), "x+y<=1");
    for (double start : {-30.0, -3.0, 0.0, 4.0})
    {
        const GpResult r = solve_gp(gp, Eigen::VectorXd::Constant(3, start));
        REQUIRE(r.status == GpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(std::exp(r.log_x[0]) == doctest::Approx(0.5).epsilon(1e-6));
    }
}
