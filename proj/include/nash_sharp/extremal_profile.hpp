#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "ball_eigen.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

namespace nash_sharp {

// Radial function on R^n, zero beyond support_radius. Cubic Hermite between samples.
struct RadialFunction {
    int dim = 1;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> slopes;
    double support_radius = 0.0;

    RadialFunction() = default;
    RadialFunction(int d, std::vector<double> r, std::vector<double> v, std::vector<double> dv = {})
        : dim(d), grid(std::move(r)), values(std::move(v)), slopes(std::move(dv))
    {
        require(dim >= 1, "RadialFunction: dim must be >= 1");
        require(grid.size() >= 2 && grid.size() == values.size(), "RadialFunction: grid/values size mismatch");
        require(grid.front() == 0.0, "RadialFunction: grid must start at 0");
        for (std::size_t i = 1; i < grid.size(); ++i)
            require(grid[i] > grid[i - 1], "RadialFunction: grid must be strictly increasing");
        for (double x : values) require(std::isfinite(x), "RadialFunction: non-finite value");
        if (slopes.empty()) slopes = quad::fd_slopes(grid, values);
        require(slopes.size() == grid.size(), "RadialFunction: slopes size mismatch");
        support_radius = grid.back();
    }

    double operator()(double r) const
    {
        if (r < 0 || r > support_radius) return 0.0;
        auto it = std::upper_bound(grid.begin(), grid.end(), r);
        std::size_t i = it == grid.end() ? grid.size() - 2 : std::size_t(it - grid.begin()) - 1;
        const double h = grid[i + 1] - grid[i];
        return quad::hermite((r - grid[i]) / h, h, values[i], values[i + 1], slopes[i], slopes[i + 1]);
    }

    RadialFunction scaled(double c) const
    {
        RadialFunction f = *this;
        for (auto& x : f.values) x *= c;
        for (auto& x : f.slopes) x *= c;
        return f;
    }

    // r -> f(r / s)
    RadialFunction dilated(double s) const
    {
        RadialFunction f = *this;
        for (auto& x : f.grid) x *= s;
        for (auto& x : f.slopes) x /= s;
        f.support_radius *= s;
        return f;
    }
};

// n|B| int g(f, f', r) r^{n-1} dr over the support.
template <class G>
double radial_integral(const RadialFunction& f, G&& g)
{
    const int n = f.dim;
    const double w = n * unit_ball_volume(n);
    return w * quad::integrate_cells(f.grid, f.values, f.slopes, [&](double y, double dy, double r) {
               double rw = 1.0;
               for (int k = 1; k < n; ++k) rw *= r;
               return g(y, dy) * rw;
           });
}

inline double integrate(const RadialFunction& f, double power)
{
    if (power == 1.0) return radial_integral(f, [](double y, double) { return std::abs(y); });
    if (power == 2.0) return radial_integral(f, [](double y, double) { return y * y; });
    return radial_integral(f, [power](double y, double) { return std::pow(std::abs(y), power); });
}

inline double integrate_signed(const RadialFunction& f)
{
    return radial_integral(f, [](double y, double) { return y; });
}

inline double dirichlet_energy(const RadialFunction& f)
{
    return radial_integral(f, [](double, double dy) { return dy * dy; });
}

inline RadialFunction eigenfunction(const RadialEigenSolution& eig)
{
    return RadialFunction(eig.dim, eig.grid, eig.values, eig.slopes);
}

inline RadialFunction build_v(const RadialEigenSolution& eig)
{
    require(eig.grid.size() >= 2 && eig.grid.back() == 1.0, "build_v: eigen grid must end at 1");
    std::vector<double> v(eig.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eig.values[i] - eig.u_at_1;
    v.back() = 0.0;
    return RadialFunction(eig.dim, eig.grid, std::move(v), eig.slopes);
}

inline RadialFunction build_phi(const RadialEigenSolution& eig, const NashConstants& c, double k = 1.0)
{
    require(eig.dim == c.dim, "build_phi: dimension mismatch");
    require(k > 0, "build_phi: k must be positive");
    RadialFunction v = build_v(eig);
    std::vector<double> r(v.grid.size()), y(v.grid.size()), dy(v.grid.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = v.grid[i] / c.lambda0;
        y[i] = k * v.values[i];
        dy[i] = k * c.lambda0 * v.slopes[i];
    }
    r.back() = 1.0 / c.lambda0;
    return RadialFunction(eig.dim, std::move(r), std::move(y), std::move(dy));
}

inline void write_csv(std::ostream& os, const RadialFunction& f, int samples = 0)
{
    const auto old = os.precision(17);
    os << "r,value\n";
    if (samples <= 0) {
        for (std::size_t i = 0; i < f.grid.size(); ++i) os << f.grid[i] << ',' << f.values[i] << '\n';
    } else {
        for (int i = 0; i < samples; ++i) {
            const double r = samples == 1 ? 0.0 : f.support_radius * i / (samples - 1);
            os << r << ',' << f(r) << '\n';
        }
    }
    os.precision(old);
}

}  // namespace nash_sharp
