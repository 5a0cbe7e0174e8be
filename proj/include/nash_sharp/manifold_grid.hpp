#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Sparse>

#include "constants.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

namespace nash_sharp {

using SparseMat = Eigen::SparseMatrix<double>;

// Finite-volume graph discretization. laplacian holds the stiffness matrix L with
// u^T L u = int |grad u|^2; the operator with minus-sign convention is W^{-1} L.
struct ManifoldGrid {
    ManifoldModel model;
    int resolution = 0;
    std::vector<double> nodes;  // arclength (circle), colatitude (sphere), axis-0 coordinate (torus)
    std::vector<double> weights;
    SparseMat laplacian;

    std::size_t size() const { return weights.size(); }

    int axis_points() const { return model.kind == ModelKind::round_sphere ? resolution + 1 : resolution; }

    double distance(std::size_t i, std::size_t j) const
    {
        switch (model.kind) {
        case ModelKind::circle: {
            const double d = std::abs(nodes[i] - nodes[j]);
            return std::min(d, model.size_param - d);
        }
        case ModelKind::round_sphere: return model.size_param * std::abs(nodes[i] - nodes[j]);
        case ModelKind::flat_torus: {
            const double h = model.size_param / resolution;
            double s = 0;
            for (int k = 0; k < model.dim; ++k) {
                const int a = int(i % resolution), b = int(j % resolution);
                i /= resolution;
                j /= resolution;
                const int d = std::abs(a - b);
                const double dk = std::min(d, resolution - d) * h;
                s += dk * dk;
            }
            return std::sqrt(s);
        }
        }
        return 0.0;
    }

    Eigen::VectorXd apply_laplacian(const Eigen::VectorXd& u) const
    {
        Eigen::VectorXd y = laplacian * u;
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] /= weights[i];
        return y;
    }

    double dirichlet(const Eigen::VectorXd& u) const { return u.dot(laplacian * u); }

    double integral(const Eigen::VectorXd& f) const
    {
        double s = 0;
        for (Eigen::Index i = 0; i < f.size(); ++i) s += weights[i] * f[i];
        return s;
    }
};

namespace detail {

inline void periodic_chain(std::vector<Eigen::Triplet<double>>& t, int a, int b, double c)
{
    t.emplace_back(a, a, c);
    t.emplace_back(b, b, c);
    t.emplace_back(a, b, -c);
    t.emplace_back(b, a, -c);
}

}  // namespace detail

inline ManifoldGrid build_grid(const ManifoldModel& model, int resolution)
{
    require(resolution >= 32, "build_grid: resolution must be >= 32");
    ManifoldGrid g;
    g.model = model;
    g.resolution = resolution;
    std::vector<Eigen::Triplet<double>> trip;

    switch (model.kind) {
    case ModelKind::circle: {
        const int N = resolution;
        const double h = model.size_param / N;
        g.nodes.resize(N);
        g.weights.assign(N, h);
        for (int i = 0; i < N; ++i) {
            g.nodes[i] = i * h;
            detail::periodic_chain(trip, i, (i + 1) % N, 1.0 / h);
        }
        break;
    }
    case ModelKind::round_sphere: {
        // zonal reduction: vertex-centered colatitude grid, dual bands clipped to [0, pi]
        const int N = resolution, n = model.dim;
        const double r = model.size_param, h = std::numbers::pi / N;
        const double omega = n * unit_ball_volume(n);  // area of the unit (n-1)-sphere
        auto band = [&](double a, double b) {
            return quad::GL16::integrate([&](double t) { return std::pow(std::sin(t), n - 1); }, a, b);
        };
        g.nodes.resize(N + 1);
        g.weights.resize(N + 1);
        for (int i = 0; i <= N; ++i) {
            g.nodes[i] = i == N ? std::numbers::pi : i * h;
            const double a = std::max(0.0, (i - 0.5) * h), b = std::min(std::numbers::pi, (i + 0.5) * h);
            g.weights[i] = omega * std::pow(r, n) * band(a, b);
        }
        for (int i = 0; i < N; ++i) {
            const double c = omega * std::pow(r, n - 2) * std::pow(std::sin((i + 0.5) * h), n - 1) / h;
            detail::periodic_chain(trip, i, i + 1, c);
        }
        break;
    }
    case ModelKind::flat_torus: {
        const int N = resolution, n = model.dim;
        double total = 1;
        for (int k = 0; k < n; ++k) total *= N;
        require(total <= double(1 << 22), "build_grid: torus grid too large");
        const std::size_t M = std::size_t(total);
        const double h = model.size_param / N;
        const double w = std::pow(h, n), c = std::pow(h, n - 2);
        g.nodes.resize(M);
        g.weights.assign(M, w);
        std::size_t stride = 1;
        for (int k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < M; ++i) {
                const int ik = int((i / stride) % N);
                const std::size_t j = ik + 1 < N ? i + stride : i - stride * (N - 1);
                detail::periodic_chain(trip, int(i), int(j), c);
            }
            stride *= N;
        }
        for (std::size_t i = 0; i < M; ++i) g.nodes[i] = (i % N) * h;
        break;
    }
    }
    g.laplacian.resize(Eigen::Index(g.weights.size()), Eigen::Index(g.weights.size()));
    g.laplacian.setFromTriplets(trip.begin(), trip.end());
    g.laplacian.makeCompressed();
    return g;
}

}  // namespace nash_sharp
