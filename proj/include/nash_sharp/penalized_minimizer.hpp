#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <boost/math/tools/roots.hpp>

#include "constants.hpp"
#include "errors.hpp"
#include "extremal_profile.hpp"
#include "manifold_grid.hpp"

namespace nash_sharp {

using Vec = Eigen::VectorXd;

struct MinimizerOptions {
    int max_iter = 5000;
    double tol = 1e-8;
    int gradient_iters = 300;    // preconditioned gradient steps before the Newton polish
    bool newton_polish = true;
    double tail_threshold = 1e-8;  // relative to max u; below this a node is treated as dead core
    bool keep_trace = false;
};

// Relative objective noise tolerated when the Newton polish accepts a residual-reducing step.
inline constexpr double roundoff = 1e-13;

struct MinimizerState {
    std::vector<double> u;
    double alpha = 0.0;
    double alpha0 = 0.0;
    double eps_alpha = 0.0;
    double A_alpha = 0.0;
    double B_alpha = 0.0;
    double k_alpha = 0.0;
    double mu_alpha = 0.0;
    double dirichlet = 0.0;  // int |grad u|^2
    double l1eps = 0.0;      // int u^{1+eps}
    double residual = 0.0;
    std::size_t x_max_index = 0;
    int iterations = 0;
    int gradient_iterations = 0;
    int newton_iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;
};

namespace detail {

struct Functional {
    const ManifoldGrid& g;
    double beta, eps, n;

    double P(const Vec& u) const
    {
        double s = 0;
        for (Eigen::Index i = 0; i < u.size(); ++i) s += g.weights[i] * std::pow(std::abs(u[i]), 1 + eps);
        return s;
    }
    double Q(const Vec& u) const
    {
        double s = 0;
        for (Eigen::Index i = 0; i < u.size(); ++i) s += g.weights[i] * u[i] * u[i];
        return s;
    }
    double exponent() const { return 4 / (n * (1 + eps)); }

    double value(const Vec& u) const
    {
        const double q = Q(u);
        if (!(q > 0)) throw DegenerateInput("I_alpha: zero L2 norm");
        const double G = g.dirichlet(u) + beta * q;
        return G * std::pow(P(u), exponent()) / std::pow(q, 1 + 2 / n);
    }

    double upow(double x) const { return x > 0 ? std::pow(x, eps) : 0.0; }
};

inline void normalize(Vec& u, const ManifoldGrid& g)
{
    double q = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) q += g.weights[i] * u[i] * u[i];
    if (!(q > 0)) throw DegenerateInput("minimize: iterate collapsed to zero");
    u /= std::sqrt(q);
}

struct Coefficients {
    double D, P, A, B, k, mu;
};

// Coefficients of the Euler equation at a normalized u.
inline Coefficients coefficients(const Functional& f, const Vec& u)
{
    Coefficients c;
    c.D = f.g.dirichlet(u);
    c.P = f.P(u);
    const double e = f.exponent();
    c.A = std::pow(c.P, e);
    c.B = (c.D + f.beta) * std::pow(c.P, e - 1);
    c.mu = (c.D + f.beta) * c.A;
    c.k = 4 / f.n * c.mu + 2 * c.D * c.A;
    return c;
}

// F = 2A Delta u + (4/n) B u^eps - k u; equals W^{-1} grad I at normalized u.
inline Vec euler_residual(const Functional& f, const Vec& u, const Coefficients& c)
{
    Vec F = 2 * c.A * f.g.apply_laplacian(u);
    for (Eigen::Index i = 0; i < u.size(); ++i) F[i] += 4 / f.n * c.B * f.upow(u[i]) - c.k * u[i];
    return F;
}

inline double weighted_norm(const ManifoldGrid& g, const Vec& F)
{
    double s = 0;
    for (Eigen::Index i = 0; i < F.size(); ++i) s += g.weights[i] * F[i] * F[i];
    return std::sqrt(s);
}

// Dead-core nodes: solve the nodal Euler equation for u_i with neighbours frozen,
// taking the smallest root in log space. Gauss-Seidel forward then backward.
inline void tail_solve(const Functional& f, Vec& u, const Coefficients& c, double rel_thr)
{
    const auto& L = f.g.laplacian;
    const double thr = rel_thr * u.maxCoeff();
    const double zlo = -745.0, zhi = std::log(thr);
    auto node = [&](Eigen::Index i) {
        if (u[i] >= thr) return;
        double d = 0, s = 0;
        for (SparseMat::InnerIterator it(L, i); it; ++it) {
            if (it.row() == i) d = it.value();
            else s -= it.value() * u[it.row()];
        }
        const double w = f.g.weights[i];
        auto F = [&](double z) {
            const double x = std::exp(z);
            return 2 * c.A * (d * x - s) / w + 4 / f.n * c.B * std::exp(f.eps * z) - c.k * x;
        };
        if (F(zlo) > 0) {
            u[i] = 0.0;
            return;
        }
        if (F(zhi) < 0) {
            u[i] = thr;
            return;
        }
        double a = zlo, fa = F(zlo);
        for (double b = zlo + 1; ; b = std::min(b + 1, zhi)) {
            const double fb = F(b);
            if (fb >= 0) {
                if (fb == 0) {
                    u[i] = std::exp(b);
                    return;
                }
                boost::uintmax_t it = 100;
                auto [lo, hi] = boost::math::tools::toms748_solve(
                    F, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(50), it);
                u[i] = std::exp(0.5 * (lo + hi));
                return;
            }
            a = b;
            fa = fb;
            if (b == zhi) break;
        }
        u[i] = thr;
    };
    for (Eigen::Index i = 0; i < u.size(); ++i) node(i);
    for (Eigen::Index i = u.size() - 1; i >= 0; --i) node(i);
}

inline std::size_t argmax_first(const Vec& u)
{
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < u.size(); ++i)
        if (u[i] > u[Eigen::Index(best)]) best = std::size_t(i);
    return best;
}

class Minimizer {
public:
    Minimizer(const ManifoldGrid& g, double alpha, double alpha0, double eps, const MinimizerOptions& opt)
        : g_(g), f_{g, alpha0 - alpha, eps, double(g.model.dim)}, opt_(opt), alpha_(alpha), alpha0_(alpha0)
    {
    }

    MinimizerState run(const std::vector<double>& init)
    {
        require(init.size() == g_.size(), "minimize: init size does not match grid");
        Vec u(Eigen::Index(init.size()));
        bool nonzero = false;
        for (std::size_t i = 0; i < init.size(); ++i) {
            require(std::isfinite(init[i]) && init[i] >= 0, "minimize: init must be finite and nonnegative");
            u[Eigen::Index(i)] = init[i];
            nonzero = nonzero || init[i] > 0;
        }
        if (!nonzero) throw DegenerateInput("minimize: init is identically zero");
        normalize(u, g_);

        double I = f_.value(u);
        trace(I);
        Coefficients c = coefficients(f_, u);
        Vec F = euler_residual(f_, u, c);
        double res = weighted_norm(g_, F);

        int it = 0, git = 0, nit = 0;
        if (res > opt_.tol) gradient_phase(u, I, c, F, res, it, git);
        if (res > opt_.tol && opt_.newton_polish) newton_phase(u, I, c, F, res, it, nit);

        MinimizerState s;
        s.u.assign(u.data(), u.data() + u.size());
        s.alpha = alpha_;
        s.alpha0 = alpha0_;
        s.eps_alpha = f_.eps;
        s.A_alpha = c.A;
        s.B_alpha = c.B;
        s.k_alpha = c.k;
        s.mu_alpha = f_.value(u);
        s.dirichlet = c.D;
        s.l1eps = c.P;
        s.residual = res;
        s.x_max_index = argmax_first(u);
        s.iterations = it;
        s.gradient_iterations = git;
        s.newton_iterations = nit;
        s.converged = res <= opt_.tol;
        s.objective_trace = std::move(trace_);
        return s;
    }

private:
    void trace(double I)
    {
        if (opt_.keep_trace) trace_.push_back(I);
    }

    void refresh(const Vec& u, Coefficients& c, Vec& F, double& res)
    {
        c = coefficients(f_, u);
        F = euler_residual(f_, u, c);
        res = weighted_norm(g_, F);
    }

    // H^1-preconditioned projected gradient with Armijo backtracking.
    void gradient_phase(Vec& u, double& I, Coefficients& c, Vec& F, double& res, int& it, int& git)
    {
        const double vol = g_.model.volume, n = g_.model.dim;
        const double sigma = 10 * std::pow(vol, -2 / n);
        SparseMat M = g_.laplacian;
        for (Eigen::Index i = 0; i < M.rows(); ++i) M.coeffRef(i, i) += sigma * g_.weights[i];
        Eigen::SimplicialLDLT<SparseMat> pre(M);
        if (pre.info() != Eigen::Success) throw Error("minimize: preconditioner factorization failed");

        double t = 1.0;
        double I_ref = I;
        while (it < opt_.max_iter && git < opt_.gradient_iters && res > opt_.tol) {
            Vec WF(F.size());
            for (Eigen::Index i = 0; i < F.size(); ++i) WF[i] = g_.weights[i] * F[i];
            Vec p = pre.solve(WF);
            double pu = 0;
            for (Eigen::Index i = 0; i < u.size(); ++i) pu += g_.weights[i] * p[i] * u[i];
            p -= pu * u;
            const double slope = WF.dot(p);
            if (!(slope > 0)) break;

            bool accepted = false;
            t = std::min(1e6, 4 * t);
            for (int k = 0; k < 60; ++k, t *= 0.5) {
                Vec v = (u - t * p).cwiseMax(0.0);
                if (!(v.maxCoeff() > 0)) continue;
                normalize(v, g_);
                const double Iv = f_.value(v);
                if (Iv <= I - 1e-4 * t * slope) {
                    u = std::move(v);
                    I = Iv;
                    accepted = true;
                    break;
                }
            }
            ++it;
            ++git;
            if (!accepted) {
                if (!opt_.newton_polish)
                    throw StepSizeFailure("minimize: no decrease along the preconditioned gradient (residual " +
                                          std::to_string(res) + ")");
                break;
            }
            trace(I);
            refresh(u, c, F, res);
            if (git % 20 == 0) {
                if (I_ref - I <= 1e-13 * std::abs(I)) break;
                I_ref = I;
            }
        }
    }

    // Damped Newton on the positive set, bordered by the linearized constraint,
    // multiplicative update, nodal solve on the dead core.
    void newton_phase(Vec& u, double& I, Coefficients& c, Vec& F, double& res, int& it, int& nit)
    {
        const double n = f_.n, eps = f_.eps, beta = f_.beta, m = 1 + 2 / n;
        const double e = f_.exponent();
        double lm = 0.0;
        int stalls = 0;

        {
            Vec v = u;
            tail_solve(f_, v, c, opt_.tail_threshold);
            normalize(v, g_);
            const double Iv = f_.value(v);
            if (Iv <= I) {
                u = std::move(v);
                I = Iv;
                refresh(u, c, F, res);
            }
        }

        while (it < opt_.max_iter && res > opt_.tol) {
            const double thr = opt_.tail_threshold * u.maxCoeff();
            std::vector<int> bulk, pos(std::size_t(u.size()), -1);
            for (Eigen::Index i = 0; i < u.size(); ++i)
                if (u[i] >= thr) {
                    pos[std::size_t(i)] = int(bulk.size());
                    bulk.push_back(int(i));
                }
            const int nb = int(bulk.size());

            // gradient pieces at normalized u (Q = 1)
            const double G = c.D + beta, A = c.A, Pp = c.P;
            Vec Lu = g_.laplacian * u;
            Vec gG(nb), gA(nb), gQ(nb), grad(nb), cw(nb), sdiag(nb);
            const double cA = 4 / n * std::pow(Pp, e - 1);
            for (int b = 0; b < nb; ++b) {
                const int i = bulk[std::size_t(b)];
                const double w = g_.weights[std::size_t(i)], ui = u[i];
                gG[b] = 2 * Lu[i] + 2 * beta * w * ui;
                gA[b] = cA * w * std::pow(ui, eps);
                gQ[b] = 2 * w * ui;
                grad[b] = w * F[i];
                cw[b] = w * ui;
                sdiag[b] = 2 * A * beta * w - 2 * m * G * A * w + G * cA * eps * w * std::pow(ui, eps - 1);
            }
            Eigen::Matrix3d Mlr;
            const double mAA = G * (n / 4) * (e - 1) * (1 + eps) / A;
            Mlr << 0, 1, -m * A, 1, mAA, -m * G, -m * A, -m * G, m * (m + 1) * G * A;
            Eigen::MatrixXd V(nb, 3);
            V.col(0) = gG;
            V.col(1) = gA;
            V.col(2) = gQ;

            std::vector<Eigen::Triplet<double>> trip;
            for (int b = 0; b < nb; ++b) {
                const int i = bulk[std::size_t(b)];
                for (SparseMat::InnerIterator itL(g_.laplacian, i); itL; ++itL) {
                    const int j = pos[std::size_t(itL.row())];
                    if (j >= 0) trip.emplace_back(j, b, 2 * A * itL.value());
                }
                trip.emplace_back(b, b, sdiag[b]);
            }
            SparseMat S(nb, nb);
            S.setFromTriplets(trip.begin(), trip.end());
            S.makeCompressed();
            Vec hdiag = S.diagonal();
            for (int b = 0; b < nb; ++b) hdiag[b] += V.row(b) * Mlr * V.row(b).transpose();
            hdiag = hdiag.cwiseAbs();

            bool accepted = false;
            for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
                Vec du;
                if (!solve_bordered(S, hdiag, lm, V, Mlr, cw, grad, du) || !(grad.dot(du) < 0)) {
                    lm = std::max(2 * lm, 1e-6);
                    continue;
                }
                const double slope = grad.dot(du);
                for (double t = 1.0; t >= 1e-4; t *= 0.5) {
                    Vec v = u;
                    for (int b = 0; b < nb; ++b) {
                        const int i = bulk[std::size_t(b)];
                        v[i] = u[i] * std::exp(std::clamp(t * du[b] / u[i], -40.0, 3.0));
                    }
                    Coefficients cv = c;
                    normalize(v, g_);
                    cv = coefficients(f_, v);
                    tail_solve(f_, v, cv, opt_.tail_threshold);
                    normalize(v, g_);
                    const double Iv = f_.value(v);
                    // near the optimum I is flat to roundoff; fall back to residual decrease
                    bool ok = Iv <= I + 1e-4 * t * slope;
                    if (!ok && Iv <= I + roundoff * std::abs(I)) {
                        const auto cv2 = coefficients(f_, v);
                        ok = weighted_norm(g_, euler_residual(f_, v, cv2)) <= 0.5 * res;
                    }
                    if (ok) {
                        u = std::move(v);
                        I = Iv;
                        accepted = true;
                        if (t == 1.0) lm = lm / 4 <= 1e-8 ? 0.0 : lm / 4;
                        break;
                    }
                }
                if (!accepted) lm = std::max(2 * lm, 1e-6);
            }
            ++it;
            ++nit;
            if (!accepted) {
                if (++stalls >= 3)
                    throw StepSizeFailure("minimize: objective did not decrease in a full backtracking sweep "
                                          "(residual " + std::to_string(res) + ")");
                continue;
            }
            stalls = 0;
            trace(I);
            refresh(u, c, F, res);
        }
    }

    // [S + lm D + V M V^T, c; c^T, 0] [x; nu] = [-g; 0] via Woodbury on the rank-4 border.
    static bool solve_bordered(const SparseMat& S, const Vec& D, double lm, const Eigen::MatrixXd& V,
                               const Eigen::Matrix3d& M, const Vec& cw, const Vec& grad, Vec& x)
    {
        SparseMat K = S;
        if (lm > 0)
            for (Eigen::Index i = 0; i < K.rows(); ++i) K.coeffRef(i, i) += lm * D[i];
        Eigen::SparseLU<SparseMat> lu;
        lu.compute(K);
        if (lu.info() != Eigen::Success) return false;
        const Eigen::Index nb = S.rows();
        Eigen::MatrixXd R(nb, 5);
        R.col(0) = -grad;
        R.middleCols(1, 3) = V;
        R.col(4) = cw;
        Eigen::MatrixXd Z = lu.solve(R);
        if (lu.info() != Eigen::Success || !Z.allFinite()) return false;
        // unknowns y = V^T x (3) and nu:  x = Z0 - Zv M y - Zc nu
        Eigen::Matrix4d T;
        Eigen::Vector4d rhs;
        const Eigen::MatrixXd VtZv = V.transpose() * Z.middleCols(1, 3);
        T.topLeftCorner<3, 3>() = Eigen::Matrix3d::Identity() + VtZv * M;
        T.topRightCorner<3, 1>() = V.transpose() * Z.col(4);
        T.bottomLeftCorner<1, 3>() = cw.transpose() * Z.middleCols(1, 3) * M;
        T(3, 3) = cw.dot(Z.col(4));
        rhs.head<3>() = V.transpose() * Z.col(0);
        rhs(3) = cw.dot(Z.col(0));
        const Eigen::Vector4d sol = T.fullPivLu().solve(rhs);
        if (!sol.allFinite()) return false;
        x = Z.col(0) - Z.middleCols(1, 3) * (M * sol.head<3>()) - Z.col(4) * sol(3);
        return x.allFinite();
    }

    const ManifoldGrid& g_;
    Functional f_;
    MinimizerOptions opt_;
    double alpha_, alpha0_;
    std::vector<double> trace_;
};

}  // namespace detail

inline double evaluate_I_alpha(const std::vector<double>& u, const ManifoldGrid& g, double alpha, double alpha0,
                               double eps_alpha)
{
    require(u.size() == g.size(), "evaluate_I_alpha: size mismatch");
    detail::Functional f{g, alpha0 - alpha, eps_alpha, double(g.model.dim)};
    return f.value(Eigen::Map<const Vec>(u.data(), Eigen::Index(u.size())));
}

inline MinimizerState minimize(const ManifoldGrid& g, double alpha, double alpha0, double eps_alpha,
                               const std::vector<double>& init, const MinimizerOptions& opt = {})
{
    require(alpha > 0, "minimize: alpha must be positive");
    require(eps_alpha >= 0, "minimize: eps_alpha must be nonnegative");
    require(opt.tol > 0 && opt.max_iter >= 1, "minimize: invalid tolerance or iteration cap");
    return detail::Minimizer(g, alpha, alpha0, eps_alpha, opt).run(init);
}

inline MinimizerState minimize(const ManifoldGrid& g, double alpha, double alpha0, double eps_alpha,
                               const std::vector<double>& init, int max_iter, double tol)
{
    MinimizerOptions opt;
    opt.max_iter = max_iter;
    opt.tol = tol;
    return minimize(g, alpha, alpha0, eps_alpha, init, opt);
}

inline std::vector<double> constant_init(const ManifoldGrid& g) { return std::vector<double>(g.size(), 1.0); }

// Normalized-later bump exp(-(d/width)^2) around node 0 (the pole on the sphere).
inline std::vector<double> bump_init(const ManifoldGrid& g, double width)
{
    require(width > 0, "bump_init: width must be positive");
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = g.distance(i, 0) / width;
        u[i] = std::exp(-d * d);
    }
    return u;
}

struct ConcentrationReport {
    std::map<double, double> mass_in_ball;
    std::map<double, double> l2_mass_in_ball;
    double decay_sup = 0.0;
    double a_alpha = 0.0;
    RadialFunction rescaled_profile;
    double profile_deviation = 0.0;
};

inline ConcentrationReport concentration_diagnostics(const MinimizerState& s, const ManifoldGrid& g,
                                                     const RadialFunction& reference,
                                                     const std::vector<double>& deltas)
{
    require(s.u.size() == g.size(), "concentration_diagnostics: size mismatch");
    const std::size_t x = s.x_max_index, N = g.size();
    const double n = g.model.dim, a = std::sqrt(s.A_alpha);
    const double umax = s.u[x];
    require(umax > 0, "concentration_diagnostics: zero state");

    std::vector<double> d(N);
    for (std::size_t i = 0; i < N; ++i) d[i] = g.distance(i, x);

    ConcentrationReport rep;
    rep.a_alpha = a;
    double P = 0, Q = 0;
    for (std::size_t i = 0; i < N; ++i) {
        P += g.weights[i] * std::pow(s.u[i], 1 + s.eps_alpha);
        Q += g.weights[i] * s.u[i] * s.u[i];
        rep.decay_sup = std::max(rep.decay_sup, s.u[i] * std::pow(d[i], n / 2));
    }
    for (double delta : deltas) {
        double p = 0, q = 0;
        for (std::size_t i = 0; i < N; ++i)
            if (d[i] <= delta * a) {
                p += g.weights[i] * std::pow(s.u[i], 1 + s.eps_alpha);
                q += g.weights[i] * s.u[i] * s.u[i];
            }
        rep.mass_in_ball[delta] = std::min(1.0, p / P);
        rep.l2_mass_in_ball[delta] = std::min(1.0, q / Q);
    }

    // radial ray from x_alpha
    std::vector<std::size_t> ray;
    const int R = g.resolution;
    switch (g.model.kind) {
    case ModelKind::circle:
        for (int j = 0; j <= R / 2; ++j) ray.push_back((x + std::size_t(j)) % N);
        break;
    case ModelKind::round_sphere:
        if (x <= std::size_t(R) / 2)
            for (std::size_t i = x; i <= std::size_t(R); ++i) ray.push_back(i);
        else
            for (std::size_t i = x + 1; i-- > 0;) ray.push_back(i);
        break;
    case ModelKind::flat_torus: {
        const std::size_t base = x - x % std::size_t(R);
        for (int j = 0; j <= R / 2; ++j) ray.push_back(base + (x % std::size_t(R) + std::size_t(j)) % std::size_t(R));
        break;
    }
    }
    std::vector<double> rho, val;
    for (std::size_t i : ray) {
        rho.push_back(d[i] / a);
        val.push_back(s.u[i] / umax);
    }
    rep.rescaled_profile = RadialFunction(g.model.dim, rho, val);
    const double ref0 = reference.values.front();
    require(ref0 != 0, "concentration_diagnostics: reference vanishes at 0");
    for (std::size_t j = 0; j < rho.size(); ++j)
        rep.profile_deviation = std::max(rep.profile_deviation, std::abs(val[j] - reference(rho[j]) / ref0));
    return rep;
}

struct SweepEntry {
    MinimizerState state;
    ConcentrationReport report;
    double r1 = 0.0;  // A_alpha * int |grad u|^2
    double r2 = 0.0;  // B_alpha * int u^{1+eps}
    double r3 = 0.0;  // k_alpha
};

struct SweepOptions {
    MinimizerOptions minimizer;
    std::vector<double> deltas{1, 2, 4, 8};
    bool warm_start = true;
    int threads = 1;  // used only without warm start
};

inline SweepEntry make_entry(MinimizerState s, const ManifoldGrid& g, const RadialFunction& reference,
                             const std::vector<double>& deltas)
{
    SweepEntry e;
    e.report = concentration_diagnostics(s, g, reference, deltas);
    e.r1 = s.A_alpha * s.dirichlet;
    e.r2 = s.B_alpha * s.l1eps;
    e.r3 = s.k_alpha;
    e.state = std::move(s);
    return e;
}

inline std::vector<SweepEntry> alpha_sweep(const ManifoldGrid& g, const std::vector<double>& alphas, double alpha0,
                                           const std::function<double(double)>& eps_schedule,
                                           const std::vector<double>& init, const RadialFunction& reference,
                                           const SweepOptions& opt = {})
{
    require(!alphas.empty(), "alpha_sweep: no alphas");
    for (std::size_t i = 1; i < alphas.size(); ++i)
        require(alphas[i] < alphas[i - 1], "alpha_sweep: alphas must be strictly decreasing");

    std::vector<SweepEntry> out(alphas.size());
    if (opt.warm_start) {
        std::vector<double> start = init;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            auto s = minimize(g, alphas[i], alpha0, eps_schedule(alphas[i]), start, opt.minimizer);
            start = s.u;
            out[i] = make_entry(std::move(s), g, reference, opt.deltas);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(alphas.size());
    auto work = [&] {
        for (std::size_t i = next++; i < alphas.size(); i = next++) {
            try {
                auto s = minimize(g, alphas[i], alpha0, eps_schedule(alphas[i]), init, opt.minimizer);
                out[i] = make_entry(std::move(s), g, reference, opt.deltas);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(opt.threads, int(alphas.size())));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < nt; ++t) pool.emplace_back(work);
        work();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace nash_sharp
