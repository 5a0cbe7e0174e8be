#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nash_sharp/penalized_minimizer.hpp"

using namespace nash_sharp;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> random_init(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 eng(seed);
    std::vector<double> u(n);
    for (auto& x : u) x = double(eng() >> 11) * 0x1.0p-53;
    return u;
}

double l2(const ManifoldGrid& g, const std::vector<double>& u)
{
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += g.weights[i] * u[i] * u[i];
    return s;
}

void expect_state_invariants(const MinimizerState& s, const ManifoldGrid& g)
{
    const double n = g.model.dim;
    EXPECT_NEAR(l2(g, s.u), 1.0, 1e-10);
    for (double x : s.u) ASSERT_GE(x, 0.0);
    double P = 0;
    for (std::size_t i = 0; i < s.u.size(); ++i) P += g.weights[i] * std::pow(s.u[i], 1 + s.eps_alpha);
    EXPECT_NEAR(std::pow(P, 4 / (n * (1 + s.eps_alpha))), s.A_alpha, 1e-12 * s.A_alpha);
    const Eigen::Map<const Eigen::VectorXd> u(s.u.data(), Eigen::Index(s.u.size()));
    const double D = g.dirichlet(u);
    EXPECT_NEAR(s.k_alpha, 4 / n * s.mu_alpha + 2 * D * s.A_alpha, 1e-10 * std::max(1.0, std::abs(s.k_alpha)));
    EXPECT_EQ(s.u[s.x_max_index], *std::max_element(s.u.begin(), s.u.end()));
    for (std::size_t i = 0; i < s.x_max_index; ++i) EXPECT_LT(s.u[i], s.u[s.x_max_index]);
}

}  // namespace

TEST(IAlpha, ConstantAtPenaltyLevelIsZero)
{
    const auto g = build_grid(make_circle(2 * pi), 64);
    EXPECT_EQ(evaluate_I_alpha(constant_init(g), g, 0.3, 0.3, 0.0), 0.0);
}

TEST(IAlpha, ConstantClosedForm)
{
    for (const auto& m : {make_circle(2 * pi), make_round_sphere(2, 1.5), make_flat_torus(2, 0.7)}) {
        const auto g = build_grid(m, 64);
        const double n = m.dim, vol = m.volume, alpha = 0.2, alpha0 = 1.1, eps = 0.07;
        std::vector<double> u(g.size(), 3.0);  // scale does not matter
        const double I = evaluate_I_alpha(u, g, alpha, alpha0, eps);
        // normalized constant c = vol^{-1/2}: int u^{1+eps} = vol^{(1-eps)/2}
        const double expect = (alpha0 - alpha) * std::pow(vol, (1 - eps) / 2 * 4 / (n * (1 + eps)));
        EXPECT_NEAR(I / expect, 1.0, 1e-8);
    }
}

TEST(IAlpha, ConstantsAreCritical)
{
    const auto g = build_grid(make_round_sphere(2, 1.0), 256);
    std::vector<double> c = constant_init(g);
    const double h = 1e-4;
    std::vector<double> up(c), dn(c);
    for (std::size_t i = 0; i < g.size(); ++i) {
        up[i] = 1 + h * std::cos(g.nodes[i]);
        dn[i] = 1 - h * std::cos(g.nodes[i]);
    }
    const double slope = (evaluate_I_alpha(up, g, 0.5, 2.0, 0.05) - evaluate_I_alpha(dn, g, 0.5, 2.0, 0.05)) / (2 * h);
    EXPECT_LE(std::abs(slope), 1e-6);
}

TEST(IAlpha, ZeroRejected)
{
    const auto g = build_grid(make_circle(1.0), 32);
    EXPECT_THROW(evaluate_I_alpha(std::vector<double>(g.size(), 0.0), g, 0.1, 0.2, 0.1), DegenerateInput);
}

TEST(Minimize, ConstantResidualAtInit)
{
    for (const auto& m : {make_circle(2 * pi), make_round_sphere(2, 1.0), make_flat_torus(2, 1.0)}) {
        const auto g = build_grid(m, 64);
        const auto s = minimize(g, 0.4, 0.4, 0.05, constant_init(g), 1, 1e-8);
        EXPECT_LE(s.residual, 1e-8);
        EXPECT_TRUE(s.converged);
        EXPECT_EQ(s.iterations, 0);
    }
}

TEST(Minimize, CircleConvergesToConstantFromRandom)
{
    const auto c = compute_constants(1);
    const auto m = make_circle(2 * pi);
    const auto g = build_grid(m, 128);
    const double alpha0 = default_alpha0(c, m, 0.0), alpha = 0.01 / c.a0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        MinimizerOptions opt;
        opt.keep_trace = true;
        const auto s = minimize(g, alpha, alpha0, alpha * c.a0, random_init(g.size(), seed), opt);
        EXPECT_TRUE(s.converged);
        EXPECT_LE(s.residual, 1e-8);
        for (double x : s.u) EXPECT_NEAR(x, 1 / std::sqrt(2 * pi), 1e-6);
        expect_state_invariants(s, g);
        for (std::size_t i = 1; i < s.objective_trace.size(); ++i)
            EXPECT_LE(s.objective_trace[i], s.objective_trace[i - 1] * (1 + roundoff));
    }
}

TEST(Minimize, CircleSymmetricInitGivesConstant)
{
    const auto c = compute_constants(1);
    const auto m = make_circle(2 * pi);
    const auto g = build_grid(m, 64);
    std::vector<double> init(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) init[i] = 2 + std::cos(g.nodes[i]);
    const auto s = minimize(g, 0.02, default_alpha0(c, m, 0.0), 0.02 * c.a0, init);
    for (double x : s.u) EXPECT_NEAR(x, 1 / std::sqrt(2 * pi), 1e-6);
}

TEST(Minimize, TorusConvergesToConstant)
{
    const auto c = compute_constants(2);
    const auto m = make_flat_torus(2, 1.0);
    const auto g = build_grid(m, 32);
    const double alpha = 0.05 / c.a0;
    const auto s = minimize(g, alpha, default_alpha0(c, m, 0.0), alpha * c.a0, random_init(g.size(), 5));
    EXPECT_TRUE(s.converged);
    for (double x : s.u) EXPECT_NEAR(x, 1.0, 1e-6);
    expect_state_invariants(s, g);
}

TEST(Minimize, SphereModerateAlphaIsSubcritical)
{
    const auto c = compute_constants(2);
    const auto m = make_round_sphere(2, 1.0);
    const auto g = build_grid(m, 256);
    const double alpha0 = default_alpha0(c, m, 0.0), alpha = 0.5 * alpha0;
    MinimizerOptions opt;
    opt.keep_trace = true;
    const auto s = minimize(g, alpha, alpha0, alpha * c.a0, bump_init(g, 0.3), opt);
    EXPECT_TRUE(s.converged);
    EXPECT_LT(s.mu_alpha, 1 / c.a0);
    expect_state_invariants(s, g);
    for (std::size_t i = 1; i < s.objective_trace.size(); ++i)
        EXPECT_LE(s.objective_trace[i], s.objective_trace[i - 1] * (1 + roundoff));
}

TEST(Minimize, ConcentratedSphereState)
{
    const auto c = compute_constants(2);
    const auto g = build_grid(make_round_sphere(2, 1.0), 256);
    const double alpha = 0.1 / c.a0;
    MinimizerOptions opt;
    opt.keep_trace = true;
    const auto s = minimize(g, alpha, 40.0, alpha * c.a0, bump_init(g, 0.2), opt);
    EXPECT_TRUE(s.converged);
    EXPECT_LE(s.residual, 1e-8);
    EXPECT_EQ(s.x_max_index, 0u);
    expect_state_invariants(s, g);
    for (std::size_t i = 1; i < s.objective_trace.size(); ++i)
        EXPECT_LE(s.objective_trace[i], s.objective_trace[i - 1] * (1 + roundoff));
    // compact support: the far hemisphere is dead
    EXPECT_EQ(s.u.back(), 0.0);
}

TEST(Minimize, RejectsBadInit)
{
    const auto g = build_grid(make_circle(1.0), 32);
    EXPECT_THROW(minimize(g, 0.1, 0.2, 0.1, std::vector<double>(g.size(), 0.0)), DegenerateInput);
    auto neg = constant_init(g);
    neg[3] = -1;
    EXPECT_THROW(minimize(g, 0.1, 0.2, 0.1, neg), InvalidArgument);
    EXPECT_THROW(minimize(g, 0.1, 0.2, 0.1, std::vector<double>(5, 1.0)), InvalidArgument);
}

TEST(Minimize, IterationCapFlagsNonConvergence)
{
    const auto c = compute_constants(2);
    const auto g = build_grid(make_round_sphere(2, 1.0), 128);
    const auto s = minimize(g, 0.1 / c.a0, 40.0, 0.1, bump_init(g, 0.2), 2, 1e-8);
    EXPECT_FALSE(s.converged);
    EXPECT_EQ(s.iterations, 2);
    EXPECT_GT(s.residual, 1e-8);
}

TEST(Diagnostics, ConstantOnCircle)
{
    const auto c = compute_constants(1);
    const auto e = solve_lambda1(1);
    const double L = 2 * pi;
    const auto g = build_grid(make_circle(L), 128);
    const auto s = minimize(g, 0.05, 0.1, 0.05, constant_init(g));
    const auto r = concentration_diagnostics(s, g, build_phi(e, c), {0.5, 1.0, 2.0, 4.0, 100.0});
    const double a = std::sqrt(s.A_alpha), h = L / 128;
    EXPECT_DOUBLE_EQ(r.a_alpha, a);
    for (const auto& [delta, frac] : r.mass_in_ball)
        EXPECT_NEAR(frac, std::min(1.0, 2 * delta * a / L), h / L + 1e-12);
    EXPECT_NEAR(r.decay_sup, 1 / std::sqrt(L) * std::sqrt(L / 2), 1e-12);
}

TEST(Diagnostics, ConcentratedSphere)
{
    const auto c = compute_constants(2);
    const auto e = solve_lambda1(2);
    const auto g = build_grid(make_round_sphere(2, 1.0), 256);
    const auto s = minimize(g, 0.1 / c.a0, 40.0, 0.1, bump_init(g, 0.2));
    const auto r = concentration_diagnostics(s, g, build_phi(e, c), {0.25, 0.5, 1.0, 2.0, 4.0});
    double prev = 0;
    for (const auto& [delta, frac] : r.mass_in_ball) {
        EXPECT_GE(frac, prev);
        EXPECT_LE(frac, 1.0);
        prev = frac;
    }
    prev = 0;
    for (const auto& [delta, frac] : r.l2_mass_in_ball) {
        EXPECT_GE(frac, prev);
        prev = frac;
    }
    EXPECT_NEAR(r.mass_in_ball.at(4.0), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(r.a_alpha, std::sqrt(s.A_alpha));
    EXPECT_EQ(r.rescaled_profile.values.front(), 1.0);
    EXPECT_LT(r.profile_deviation, 0.5);
}

TEST(Sweep, CircleStaysConstant)
{
    const auto c = compute_constants(1);
    const auto e = solve_lambda1(1);
    const auto m = make_circle(2 * pi);
    const auto g = build_grid(m, 64);
    const double A = 1 / c.a0;
    const auto tr = alpha_sweep(g, {0.02 * A, 0.01 * A, 0.005 * A}, default_alpha0(c, m, 0.0),
                                [&](double a) { return a * c.a0; }, random_init(g.size(), 9), build_phi(e, c));
    ASSERT_EQ(tr.size(), 3u);
    for (const auto& t : tr) {
        EXPECT_TRUE(t.state.converged);
        EXPECT_LE(t.r1, 1e-12);
        for (double x : t.state.u) EXPECT_NEAR(x, 1 / std::sqrt(2 * pi), 1e-6);
    }
}

TEST(Sweep, ColdParallelMatchesSequentialCold)
{
    const auto c = compute_constants(2);
    const auto e = solve_lambda1(2);
    const auto g = build_grid(make_round_sphere(2, 1.0), 128);
    const double A = 1 / c.a0;
    SweepOptions one, four;
    one.warm_start = four.warm_start = false;
    four.threads = 4;
    auto eps = [&](double a) { return a * c.a0; };
    const auto a = alpha_sweep(g, {0.3 * A, 0.1 * A}, 40.0, eps, bump_init(g, 0.2), build_phi(e, c), one);
    const auto b = alpha_sweep(g, {0.3 * A, 0.1 * A}, 40.0, eps, bump_init(g, 0.2), build_phi(e, c), four);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].state.u, b[i].state.u);
}

TEST(Sweep, RequiresDecreasingAlphas)
{
    const auto c = compute_constants(1);
    const auto g = build_grid(make_circle(1.0), 32);
    EXPECT_THROW(alpha_sweep(g, {0.1, 0.2}, 1.0, [](double a) { return a; }, constant_init(g),
                             build_phi(solve_lambda1(1), c)),
                 InvalidArgument);
}
