#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ball_eigen.hpp"
#include "errors.hpp"

namespace nash_sharp {

struct NashConstants {
    int dim = 0;
    double vol_unit_ball = 0.0;
    double lambda1 = 0.0;
    double a0 = 0.0;
    double lambda0 = 0.0;
    double threshold_coeff = 0.0;
};

enum class ModelKind { circle, round_sphere, flat_torus };

inline std::string to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::circle: return "circle";
    case ModelKind::round_sphere: return "round_sphere";
    case ModelKind::flat_torus: return "flat_torus";
    }
    return "?";
}

struct ManifoldModel {
    ModelKind kind = ModelKind::circle;
    int dim = 1;
    double size_param = 1.0;
    double volume = 1.0;
    double max_scalar_curvature = 0.0;
};

inline double unit_ball_volume(int dim)
{
    require(dim >= 1, "unit_ball_volume: dim must be >= 1");
    double v = (dim % 2) ? 2.0 : std::numbers::pi;
    for (int k = (dim % 2) ? 3 : 4; k <= dim; k += 2) v *= 2 * std::numbers::pi / k;
    return v;
}

// Area of the unit n-sphere in R^{n+1}.
inline double unit_sphere_area(int n) { return (n + 1) * unit_ball_volume(n + 1); }

inline NashConstants compute_constants(int dim, const RadialEigenSolution& eig)
{
    require(eig.dim == dim, "compute_constants: eigen solution dim mismatch");
    const double n = dim, b = unit_ball_volume(dim), l1 = eig.lambda1;
    NashConstants c;
    c.dim = dim;
    c.vol_unit_ball = b;
    c.lambda1 = l1;
    c.a0 = std::pow(n + 2, (n + 2) / n) / (std::pow(2.0, 2 / n) * n * l1 * std::pow(b, 2 / n));
    c.lambda0 = std::sqrt(std::pow((n + 2) / 2, -2 / n) * std::pow(b, 2 / n));
    c.threshold_coeff = std::pow(b, -2 / n) / (6 * n) * (2 / (n + 2) + (n - 2) / l1) *
                        std::pow((n + 2) / 2, 2 / n);
    return c;
}

inline NashConstants compute_constants(int dim) { return compute_constants(dim, solve_lambda1(dim)); }

inline ManifoldModel make_circle(double length)
{
    require(length > 0, "circle: length must be positive");
    return {ModelKind::circle, 1, length, length, 0.0};
}

inline ManifoldModel make_round_sphere(int dim, double radius)
{
    require(dim >= 1, "sphere: dim must be >= 1");
    require(radius > 0, "sphere: radius must be positive");
    return {ModelKind::round_sphere, dim, radius, std::pow(radius, dim) * unit_sphere_area(dim),
            dim * (dim - 1) / (radius * radius)};
}

inline ManifoldModel make_flat_torus(int dim, double side)
{
    require(dim >= 1, "torus: dim must be >= 1");
    require(side > 0, "torus: side must be positive");
    return {ModelKind::flat_torus, dim, side, std::pow(side, dim), 0.0};
}

inline double threshold(int dim, const NashConstants& c, const ManifoldModel& m)
{
    require(m.dim == dim && c.dim == dim, "threshold: dimension mismatch");
    return c.threshold_coeff * m.max_scalar_curvature;
}

struct CorollaryVerdict {
    bool holds = false;
    double margin = 0.0;
};

inline CorollaryVerdict corollary_check(const NashConstants& c, const ManifoldModel& m)
{
    const double lhs = std::pow(m.volume, -2.0 / m.dim);
    const double margin = lhs - threshold(m.dim, c, m);
    return {margin > 0, margin};
}

// Lower bound for B from Vol and T, plus margin, expressed as B/A0.
inline double default_alpha0(const NashConstants& c, const ManifoldModel& m, double margin)
{
    const double b = std::max(std::pow(m.volume, -2.0 / m.dim), threshold(m.dim, c, m)) + margin;
    return b / c.a0;
}

}  // namespace nash_sharp
