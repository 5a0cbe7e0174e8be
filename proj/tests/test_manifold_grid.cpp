#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "nash_sharp/manifold_grid.hpp"

using namespace nash_sharp;
constexpr double pi = std::numbers::pi;

namespace {

double weight_sum(const ManifoldGrid& g)
{
    double s = 0;
    for (double w : g.weights) s += w;
    return s;
}

Eigen::VectorXd sample(const ManifoldGrid& g, double (*f)(double))
{
    Eigen::VectorXd v(Eigen::Index(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) v[Eigen::Index(i)] = f(g.nodes[i]);
    return v;
}

// first nonzero generalized eigenvalues of L x = mu W x
Eigen::VectorXd spectrum(const ManifoldGrid& g)
{
    const Eigen::MatrixXd L(g.laplacian);
    Eigen::VectorXd w(Eigen::Index(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) w[Eigen::Index(i)] = g.weights[i];
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::MatrixXd(w.asDiagonal()));
    return es.eigenvalues();
}

std::vector<ManifoldGrid> sample_grids()
{
    return {build_grid(make_circle(2 * pi), 64), build_grid(make_circle(3.0), 33),
            build_grid(make_round_sphere(2, 1.0), 128), build_grid(make_round_sphere(3, 2.0), 64),
            build_grid(make_round_sphere(1, 1.5), 64), build_grid(make_flat_torus(2, 1.5), 32),
            build_grid(make_flat_torus(3, 1.0), 32)};
}

}  // namespace

TEST(Grid, WeightsSumToVolume)
{
    EXPECT_NEAR(weight_sum(build_grid(make_circle(2 * pi), 64)), 2 * pi, 1e-12);
    EXPECT_NEAR(weight_sum(build_grid(make_round_sphere(2, 1.0), 128)) / (4 * pi), 1.0, 1e-8);
    for (const auto& g : sample_grids()) EXPECT_NEAR(weight_sum(g) / g.model.volume, 1.0, 1e-8);
}

TEST(Grid, WeightsPositive)
{
    for (const auto& g : sample_grids())
        for (double w : g.weights) ASSERT_GT(w, 0.0);
}

TEST(Grid, LaplacianAnnihilatesConstants)
{
    for (const auto& g : sample_grids()) {
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(Eigen::Index(g.size()));
        EXPECT_LE(g.apply_laplacian(one).norm(), 1e-8);
    }
}

TEST(Grid, LaplacianSymmetricInWeightedProduct)
{
    for (const auto& g : sample_grids()) {
        const SparseMat diff = SparseMat(g.laplacian.transpose()) - g.laplacian;
        EXPECT_EQ(diff.norm(), 0.0);
        Eigen::VectorXd u = Eigen::VectorXd::Random(Eigen::Index(g.size()));
        Eigen::VectorXd v = Eigen::VectorXd::Random(Eigen::Index(g.size()));
        const Eigen::VectorXd du = g.apply_laplacian(u), dv = g.apply_laplacian(v);
        double a = 0, b = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            a += g.weights[i] * du[Eigen::Index(i)] * v[Eigen::Index(i)];
            b += g.weights[i] * u[Eigen::Index(i)] * dv[Eigen::Index(i)];
        }
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST(Grid, PositiveSemidefinite)
{
    for (const auto& g : {build_grid(make_circle(2 * pi), 64), build_grid(make_round_sphere(2, 1.0), 64),
                          build_grid(make_round_sphere(4, 1.0), 64)}) {
        const auto ev = spectrum(g);
        EXPECT_NEAR(ev[0], 0.0, 1e-9);
        EXPECT_GT(ev[1], 0.0);
    }
}

TEST(Grid, ZonalCosineEigenfunction)
{
    double prev = 0;
    for (int res : {64, 128, 256}) {
        const auto g = build_grid(make_round_sphere(2, 1.0), res);
        const Eigen::VectorXd c = sample(g, [](double t) { return std::cos(t); });
        const Eigen::VectorXd lc = g.apply_laplacian(c);
        double err = 0;
        for (Eigen::Index i = 0; i < c.size(); ++i) err = std::max(err, std::abs(lc[i] - 2 * c[i]));
        if (prev > 0) EXPECT_GE(prev / err, 3.5) << res;
        prev = err;
    }
}

TEST(Grid, SphereEigenvalueRefinement)
{
    double prev1 = 0, prev2 = 0;
    for (int res : {32, 64, 128, 256}) {
        const auto ev = spectrum(build_grid(make_round_sphere(2, 1.0), res));
        const double e1 = std::abs(ev[1] - 2), e2 = std::abs(ev[2] - 6);
        if (prev1 > 0) {
            EXPECT_GE(prev1 / e1, 3.5) << res;
            EXPECT_GE(prev2 / e2, 3.5) << res;
        }
        prev1 = e1;
        prev2 = e2;
    }
}

TEST(Grid, CircleSpectrum)
{
    const auto ev = spectrum(build_grid(make_circle(2 * pi), 256));
    EXPECT_NEAR(ev[1], 1.0, 1e-4);
    EXPECT_NEAR(ev[2], 1.0, 1e-4);
    EXPECT_NEAR(ev[3], 4.0, 1e-3);
}

TEST(Grid, TorusSpectrum)
{
    const auto g = build_grid(make_flat_torus(2, 1.0), 32);
    const auto ev = spectrum(g);
    const double k = 2 * pi, h = 1.0 / 32;
    const double discrete = 4 / (h * h) * std::pow(std::sin(k * h / 2), 2);
    for (int i = 1; i <= 4; ++i) EXPECT_NEAR(ev[i], discrete, 1e-8);
    EXPECT_NEAR(ev[1] / (k * k), 1.0, 1e-2);
}

TEST(Grid, Distances)
{
    const auto c = build_grid(make_circle(10.0), 40);
    EXPECT_DOUBLE_EQ(c.distance(0, 39), 0.25);
    EXPECT_DOUBLE_EQ(c.distance(0, 20), 5.0);
    const auto s = build_grid(make_round_sphere(2, 2.0), 64);
    EXPECT_NEAR(s.distance(0, 64), 2 * pi, 1e-12);
    const auto t = build_grid(make_flat_torus(2, 1.0), 32);
    EXPECT_NEAR(t.distance(0, 31 + 32 * 31), std::sqrt(2.0) / 32, 1e-14);
}

TEST(Grid, RejectsCoarseResolution) { EXPECT_THROW(build_grid(make_circle(1.0), 31), InvalidArgument); }
