// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jpa
{

Monomial Monomial::make(double coeff, std::vector<std::pair<std::size_t, double>> exps)
{
    return Monomial{std::log(coeff), std::move(exps)};
}

double Monomial::eval(const Eigen::VectorXd& x) const
{
    double v = std::exp(log_coeff);
    for (const auto& [j, e] : exponents)
        v *= std::pow(x[static_cast<Eigen::Index>(j)], e);
    return v;
}

Posynomial& Posynomial::add(double coeff, std::vector<std::pair<std::size_t, double>> exps)
{
    terms.push_back(Monomial::make(coeff, std::move(exps)));
    return *this;
}

double Posynomial::eval(const Eigen::VectorXd& x) const
{
    double v = 0.0;
    for (const auto& t : terms)
        v += t.eval(x);
    return v;
}

double Posynomial::log_eval(const Eigen::VectorXd& y) const
{
    double vmax = -std::numeric_limits<double>::infinity();
    std::vector<double> v(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
    {
        v[i] = terms[i].log_coeff;
        for (const auto& [j, e] : terms[i].exponents)
            v[i] += e * y[static_cast<Eigen::Index>(j)];
        vmax = std::max(vmax, v[i]);
    }
    double s = 0.0;
    for (double vi : v)
        s += std::exp(vi - vmax);
    return vmax + std::log(s);
}

void GeometricProgram::add_constraint(Posynomial p, std::string label)
{
    constraints.push_back(std::move(p));
    labels.push_back(std::move(label));
}

const char* to_string(GpStatus s)
{
    switch (s)
    {
    case GpStatus::Optimal: return "optimal";
    case GpStatus::Infeasible: return "infeasible";
    case GpStatus::MaxIter: return "max-iter";
    }
    return "unknown";
}

double max_log_constraint(const GeometricProgram& gp, const Eigen::VectorXd& log_x)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& p : gp.constraints)
        worst = std::max(worst, p.log_eval(log_x));
    return worst;
}

namespace
{

// log-sum-exp(A z + b) <= 0
struct LseConstraint
{
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

// minimize c^T z  s.t.  every LseConstraint < 0
struct ConvexProblem
{
    Eigen::VectorXd c;
    std::vector<LseConstraint> cons;
};

struct Eval
{
    Eigen::VectorXd f;             // constraint values
    Eigen::MatrixXd grad;          // m x n, row i = grad f_i
    std::vector<Eigen::MatrixXd> hess;
};

double lse_value(const LseConstraint& g, const Eigen::VectorXd& z)
{
    const Eigen::VectorXd v = g.A * z + g.b;
    const double vmax = v.maxCoeff();
    return vmax + std::log((v.array() - vmax).exp().sum());
}

Eigen::VectorXd values(const ConvexProblem& P, const Eigen::VectorXd& z)
{
    Eigen::VectorXd f(static_cast<Eigen::Index>(P.cons.size()));
    for (std::size_t i = 0; i < P.cons.size(); ++i)
        f[static_cast<Eigen::Index>(i)] = lse_value(P.cons[i], z);
    return f;
}

Eval evaluate(const ConvexProblem& P, const Eigen::VectorXd& z, bool with_hessian)
{
    const auto m = static_cast<Eigen::Index>(P.cons.size());
    const auto n = z.size();
    Eval e;
    e.f.resize(m);
    e.grad.resize(m, n);
    if (with_hessian)
        e.hess.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i)
    {
        const auto& g = P.cons[static_cast<std::size_t>(i)];
        const Eigen::VectorXd v = g.A * z + g.b;
        const double vmax = v.maxCoeff();
        Eigen::VectorXd p = (v.array() - vmax).exp();
        const double s = p.sum();
        p /= s;
        e.f[i] = vmax + std::log(s);
        const Eigen::VectorXd gi = g.A.transpose() * p;
        e.grad.row(i) = gi.transpose();
        if (with_hessian)
            e.hess[static_cast<std::size_t>(i)] =
                g.A.transpose() * p.asDiagonal() * g.A - gi * gi.transpose();
    }
    return e;
}

double residual_norm(const ConvexProblem& P, const Eigen::VectorXd& z, const Eigen::VectorXd& mu, double t)
{
    const Eval e = evaluate(P, z, false);
    const Eigen::VectorXd r_dual = P.c + e.grad.transpose() * mu;
    const Eigen::VectorXd r_cent = -(mu.array() * e.f.array()) - 1.0 / t;
    return std::sqrt(r_dual.squaredNorm() + r_cent.squaredNorm());
}

struct PdOutcome
{
    Eigen::VectorXd z, mu;
    double gap = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool stopped_early = false;
};

template <class StopFn>
PdOutcome primal_dual(const ConvexProblem& P, Eigen::VectorXd z, const GpOptions& opts, StopFn stop_early)
{
    const auto m = static_cast<Eigen::Index>(P.cons.size());
    const auto n = z.size();

    PdOutcome out;
    Eigen::VectorXd f = values(P, z);
    Eigen::VectorXd mu = (1.0 / (static_cast<double>(m) * (-f).array())).matrix();

    for (int it = 0; it < opts.max_iter; ++it)
    {
        out.iterations = it;
        const Eval e = evaluate(P, z, true);
        const double gap = -(e.f.dot(mu));
        const Eigen::VectorXd r_dual = P.c + e.grad.transpose() * mu;
        out.z = z;
        out.mu = mu;
        out.gap = gap;
        out.dual_residual = r_dual.norm();

        if (stop_early(z))
        {
            out.stopped_early = true;
            return out;
        }
        if (out.dual_residual <= opts.feas_tol && gap <= opts.gap_tol)
        {
            out.converged = true;
            return out;
        }

        const double t = opts.mu * static_cast<double>(m) / gap;

        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs = -P.c;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            const double neg_f = -e.f[i];
            const Eigen::VectorXd gi = e.grad.row(i).transpose();
            H += mu[i] * e.hess[static_cast<std::size_t>(i)] + (mu[i] / neg_f) * gi * gi.transpose();
            rhs -= gi / (t * neg_f);
        }

        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        Eigen::VectorXd dz = ldlt.solve(rhs);
        if (ldlt.info() != Eigen::Success || !dz.allFinite())
        {
            const double reg = 1e-12 * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
            H.diagonal().array() += reg;
            dz = H.llt().solve(rhs);
            if (!dz.allFinite())
                return out;
        }

        const Eigen::VectorXd gdz = e.grad * dz;
        Eigen::VectorXd dmu(m);
        for (Eigen::Index i = 0; i < m; ++i)
            dmu[i] = -(mu[i] / e.f[i]) * gdz[i] - mu[i] - 1.0 / (t * e.f[i]);

        double s_max = 1.0;
        for (Eigen::Index i = 0; i < m; ++i)
            if (dmu[i] < 0.0)
                s_max = std::min(s_max, -mu[i] / dmu[i]);
        double s = 0.99 * s_max;

        // keep the primal iterate strictly feasible
        while (s > 1e-16 && values(P, z + s * dz).maxCoeff() >= 0.0)
            s *= 0.5;

        const double r0 = residual_norm(P, z, mu, t);
        while (s > 1e-16 && residual_norm(P, z + s * dz, mu + s * dmu, t) > (1.0 - 0.01 * s) * r0)
            s *= 0.5;

        if (s <= 1e-16)
        {
            // no progress possible in double precision; accept if already tight
            out.converged = out.dual_residual <= 10.0 * opts.feas_tol && gap <= 10.0 * opts.gap_tol;
            return out;
        }

        z += s * dz;
        mu += s * dmu;
    }
    out.iterations = opts.max_iter;
    return out;
}

LseConstraint to_lse(const Posynomial& p, std::size_t n_cols)
{
    LseConstraint g;
    const auto T = static_cast<Eigen::Index>(p.terms.size());
    g.A = Eigen::MatrixXd::Zero(T, static_cast<Eigen::Index>(n_cols));
    g.b.resize(T);
    for (Eigen::Index r = 0; r < T; ++r)
    {
        const auto& term = p.terms[static_cast<std::size_t>(r)];
        g.b[r] = term.log_coeff;
        for (const auto& [j, ex] : term.exponents)
            g.A(r, static_cast<Eigen::Index>(j)) += ex;
    }
    return g;
}

} // namespace

GpResult solve_gp(const GeometricProgram& gp, const Eigen::VectorXd& initial_log_x, const GpOptions& opts)
{
    const auto n = static_cast<Eigen::Index>(gp.n_vars);
    GpResult res;
    res.log_x = initial_log_x;

    // Phase I over (y, s): minimize s s.t. f_i(y) - s <= 0 and a box around y0.
    ConvexProblem p1;
    p1.c = Eigen::VectorXd::Zero(n + 1);
    p1.c[n] = 1.0;
    for (const auto& p : gp.constraints)
    {
        LseConstraint g = to_lse(p, gp.n_vars + 1);
        g.A.col(n).setConstant(-1.0);
        p1.cons.push_back(std::move(g));
    }
    for (Eigen::Index j = 0; j < n; ++j)
    {
        LseConstraint up, lo;
        up.A = Eigen::MatrixXd::Zero(1, n + 1);
        up.A(0, j) = 1.0;
        up.b = Eigen::VectorXd::Constant(1, -(initial_log_x[j] + opts.box_radius));
        lo.A = Eigen::MatrixXd::Zero(1, n + 1);
        lo.A(0, j) = -1.0;
        lo.b = Eigen::VectorXd::Constant(1, initial_log_x[j] - opts.box_radius);
        p1.cons.push_back(std::move(up));
        p1.cons.push_back(std::move(lo));
    }

    Eigen::VectorXd z0(n + 1);
    z0.head(n) = initial_log_x;
    z0[n] = max_log_constraint(gp, initial_log_x) + 1.0;

    const PdOutcome ph1 = primal_dual(p1, z0, opts, [&](const Eigen::VectorXd& z) { return z[n] <= opts.phase1_target; });
    res.iterations = ph1.iterations;
    res.phase1_slack = ph1.z[n];
    res.log_x = ph1.z.head(n);

    double shift = 0.0;
    if (res.phase1_slack >= 0.0)
    {
        if (!ph1.converged)
        {
            res.status = GpStatus::MaxIter;
            return res;
        }
        // slack above tolerance: no point satisfies the constraints
        const double lower_bound = res.phase1_slack - ph1.gap;
        if (lower_bound > opts.infeasible_slack || res.phase1_slack > opts.infeasible_slack)
        {
            res.status = GpStatus::Infeasible;
            return res;
        }
        // feasible only up to the tolerance: relax by that amount
        shift = res.phase1_slack + 1e-12;
    }

    // Phase II: minimize -y_obj.
    ConvexProblem p2;
    p2.c = Eigen::VectorXd::Zero(n);
    p2.c[static_cast<Eigen::Index>(gp.objective_var)] = -1.0;
    for (const auto& p : gp.constraints)
    {
        LseConstraint g = to_lse(p, gp.n_vars);
        g.b.array() -= shift;
        p2.cons.push_back(std::move(g));
    }

    const PdOutcome ph2 = primal_dual(p2, ph1.z.head(n), opts, [](const Eigen::VectorXd&) { return false; });
    res.iterations += ph2.iterations;
    res.log_x = ph2.z;
    res.gap = ph2.gap;
    res.dual_residual = ph2.dual_residual;
    res.multipliers.assign(ph2.mu.data(), ph2.mu.data() + ph2.mu.size());
    res.objective = std::exp(res.log_x[static_cast<Eigen::Index>(gp.objective_var)]);
    res.status = ph2.converged ? GpStatus::Optimal : GpStatus::MaxIter;
    return res;
}

} // namespace jpa
