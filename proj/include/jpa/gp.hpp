// SPDX-License-Identifier: Apache-2.0
//
// Small dense geometric-program solver.
//
// A GP "maximize x_obj s.t. posynomial_i(x) <= 1" becomes convex after the
// change of variables x = exp(y): each constraint turns into
// log-sum-exp(A_i y + b_i) <= 0 and the objective into minimize -y_obj.
// That convex program is solved with a primal-dual interior-point method
// (phase I: minimise a common slack s over f_i(y) <= s inside a box around
// the initial guess; phase II: the actual objective). Coefficients live in
// the log domain throughout, so inputs spanning many decades (1e-13 W noise
// against 20 J budgets) stay well conditioned.
// ------------------------------------------------------------------------

#ifndef JPA_GP_HPP
#define JPA_GP_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace jpa
{

// coeff * prod_j x_j^{exponent_j}; coefficient stored as log(coeff).
struct Monomial
{
    double log_coeff = 0.0;
    std::vector<std::pair<std::size_t, double>> exponents; // sparse (variable, power)

    static Monomial make(double coeff, std::vector<std::pair<std::size_t, double>> exps = {});
    double eval(const Eigen::VectorXd& x) const; // x in the linear domain
};

struct Posynomial
{
    std::vector<Monomial> terms;

    Posynomial& add(double coeff, std::vector<std::pair<std::size_t, double>> exps = {});
    double eval(const Eigen::VectorXd& x) const;
    // log of eval(exp(y)), computed stably from log-domain values
    double log_eval(const Eigen::VectorXd& y) const;
};

struct GeometricProgram
{
    std::size_t n_vars = 0;
    std::size_t objective_var = 0;             // maximise this variable
    std::vector<Posynomial> constraints;       // each posynomial <= 1
    std::vector<std::string> labels;           // one per constraint

    void add_constraint(Posynomial p, std::string label);
};

enum class GpStatus
{
    Optimal,
    Infeasible,
    MaxIter
};

const char* to_string(GpStatus s);

struct GpOptions
{
    double gap_tol = 1e-11;       // surrogate duality gap on log(objective)
    double feas_tol = 1e-9;       // dual residual norm
    double infeasible_slack = 1e-8; // phase-I slack above this declares infeasibility
    double phase1_target = -1e-2; // stop phase I once every constraint has this log-slack
    double box_radius = 60.0;     // phase-I box around the initial guess, log units
    int max_iter = 300;           // per phase
    double mu = 10.0;             // barrier parameter growth
};

struct GpResult
{
    GpStatus status = GpStatus::MaxIter;
    Eigen::VectorXd log_x;        // solution in log domain (best found for MaxIter)
    double objective = 0.0;       // x_obj = exp(log_x[objective_var])
    double gap = 0.0;             // final surrogate gap
    double dual_residual = 0.0;   // KKT stationarity residual
    double phase1_slack = 0.0;    // minimal common log-slack found in phase I
    std::vector<double> multipliers; // dual variable per constraint
    int iterations = 0;           // total Newton steps, both phases
};

// `initial_log_x` only needs to be a reasonable scale guess, not feasible.
GpResult solve_gp(const GeometricProgram& gp, const Eigen::VectorXd& initial_log_x,
                  const GpOptions& opts = {});

// max_i log posynomial_i(exp(y)); <= 0 means feasible.
double max_log_constraint(const GeometricProgram& gp, const Eigen::VectorXd& log_x);

} // namespace jpa

#endif
