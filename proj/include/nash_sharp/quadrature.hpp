#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace nash_sharp::quad {

using GL16 = boost::math::quadrature::gauss<double, 16>;

// Cubic Hermite on a cell of width h, t in [0,1].
inline double hermite(double t, double h, double y0, double y1, double d0, double d1)
{
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
}

inline double hermite_slope(double t, double h, double y0, double y1, double d0, double d1)
{
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * (y0 - y1)) / h + (3 * t2 - 4 * t + 1) * d0 + (3 * t2 - 2 * t) * d1;
}

// Second-order slopes on a nonuniform grid; one-sided three-point at the ends.
inline std::vector<double> fd_slopes(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t m = x.size();
    std::vector<double> d(m, 0.0);
    if (m < 2) return d;
    if (m == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return d;
    }
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
        d[i] = (hl * hl * (y[i + 1] - y[i]) + hr * hr * (y[i] - y[i - 1])) / (hl * hr * (hl + hr));
    }
    auto one_sided = [](double h1, double h2, double y0, double y1, double y2) {
        // derivative at x0 of the quadratic through (0,y0),(h1,y1),(h1+h2,y2)
        const double s = h1 + h2;
        return -(2 * h1 + h2) / (h1 * s) * y0 + s / (h1 * h2) * y1 - h1 / (h2 * s) * y2;
    };
    d[0] = one_sided(x[1] - x[0], x[2] - x[1], y[0], y[1], y[2]);
    d[m - 1] = -one_sided(x[m - 1] - x[m - 2], x[m - 2] - x[m - 3], y[m - 1], y[m - 2], y[m - 3]);
    return d;
}

// sum over cells of  int g(f(r), f'(r), r) dr  with f the Hermite interpolant.
template <class G>
double integrate_cells(const std::vector<double>& x, const std::vector<double>& y,
                       const std::vector<double>& d, G&& g)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i], h = x[i + 1] - a;
        const double y0 = y[i], y1 = y[i + 1], d0 = d[i], d1 = d[i + 1];
        total += GL16::integrate(
            [&](double r) {
                const double t = (r - a) / h;
                return g(hermite(t, h, y0, y1, d0, d1), hermite_slope(t, h, y0, y1, d0, d1), r);
            },
            a, a + h);
    }
    return total;
}

}  // namespace nash_sharp::quad
