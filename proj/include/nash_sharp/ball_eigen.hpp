#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "errors.hpp"

namespace nash_sharp {

struct RadialEigenSolution {
    int dim = 0;
    double lambda1 = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> slopes;  // u'(r) from the ODE state
    double u_at_1 = 0.0;
    double derivative_at_1 = 0.0;
};

struct ShootResult {
    double u_at_1 = 0.0;
    double derivative_at_1 = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> slopes;
};

namespace detail {

inline constexpr double series_radius = 1e-3;

template <bool Sample>
ShootResult shoot_impl(int dim, double lambda, int grid_size)
{
    require(dim >= 1, "shoot: dim must be >= 1");
    require(lambda > 0 && std::isfinite(lambda), "shoot: lambda must be positive");
    require(grid_size >= 16, "shoot: grid_size must be >= 16");

    const double n = dim, r0 = series_radius;
    using State = std::array<double, 2>;
    State y{1 - lambda * r0 * r0 / (2 * n) + lambda * lambda * std::pow(r0, 4) / (8 * n * (n + 2)),
            -lambda * r0 / n + lambda * lambda * std::pow(r0, 3) / (2 * n * (n + 2))};

    ShootResult out;
    if constexpr (Sample) {
        out.grid.reserve(grid_size + 2);
        out.values.reserve(grid_size + 2);
        out.slopes.reserve(grid_size + 2);
        out.grid = {0.0, r0};
        out.values = {1.0, y[0]};
        out.slopes = {0.0, y[1]};
    }

    auto rhs = [&](const State& s, State& ds, double r) {
        ds[0] = s[1];
        ds[1] = -(n - 1) / r * s[1] - lambda * s[0];
    };
    boost::numeric::odeint::runge_kutta4<State> stepper;
    const double h = (1.0 - r0) / grid_size;
    for (int i = 0; i < grid_size; ++i) {
        const double r = r0 + i * h;
        stepper.do_step(rhs, y, r, h);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
            throw IntegratorInstability("shoot: non-finite state at r=" + std::to_string(r + h) +
                                        " (lambda=" + std::to_string(lambda) + ")");
        if constexpr (Sample) {
            out.grid.push_back(i + 1 == grid_size ? 1.0 : r0 + (i + 1) * h);
            out.values.push_back(y[0]);
            out.slopes.push_back(y[1]);
        }
    }
    out.u_at_1 = y[0];
    out.derivative_at_1 = y[1];
    return out;
}

}  // namespace detail

inline ShootResult shoot(int dim, double lambda, int grid_size = 4096)
{
    return detail::shoot_impl<true>(dim, lambda, grid_size);
}

inline double default_bracket_hi(int dim) { return 4.0 * (dim + 2) * (dim + 2); }

inline RadialEigenSolution solve_lambda1(int dim, std::optional<double> bracket_hi = std::nullopt,
                                         double tol = 1e-10, int grid_size = 4096)
{
    require(dim >= 1, "solve_lambda1: dim must be >= 1");
    require(tol > 0, "solve_lambda1: tol must be positive");
    const double hi = bracket_hi.value_or(default_bracket_hi(dim));
    require(hi > 0, "solve_lambda1: bracket_hi must be positive");

    auto dudr = [&](double lam) { return detail::shoot_impl<false>(dim, lam, grid_size).derivative_at_1; };

    constexpr int samples = 256;
    double lo = 0.0, flo = 0.0, up = 0.0, fup = 0.0;
    bool found = false;
    for (int j = 1; j <= samples; ++j) {
        const double lam = hi * j / samples;
        const double f = dudr(lam);
        if (j > 1 && (f == 0.0 || (f > 0) != (flo > 0))) {
            up = lam;
            fup = f;
            found = true;
            break;
        }
        lo = lam;
        flo = f;
    }
    if (!found)
        throw BracketTooSmall("solve_lambda1: no sign change of u'(1) in (0, " + std::to_string(hi) + "]");

    double root = up;
    if (fup != 0.0) {
        auto stop = [&](double a, double b) { return std::abs(b - a) <= tol; };
        auto [a, b] = boost::math::tools::bisect(dudr, lo, up, stop);
        root = 0.5 * (a + b);
    }

    ShootResult s = shoot(dim, root, grid_size);
    RadialEigenSolution sol;
    sol.dim = dim;
    sol.lambda1 = root;
    sol.grid = std::move(s.grid);
    sol.values = std::move(s.values);
    sol.slopes = std::move(s.slopes);
    sol.u_at_1 = s.u_at_1;
    sol.derivative_at_1 = s.derivative_at_1;
    return sol;
}

inline int sign_changes(const std::vector<double>& v)
{
    int count = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if ((v[i] < 0) != (v[i - 1] < 0)) ++count;
    return count;
}

}  // namespace nash_sharp
