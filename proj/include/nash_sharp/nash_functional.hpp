#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ball_eigen.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "extremal_profile.hpp"

namespace nash_sharp {

struct NashReport {
    double value = 0.0;
    double normalized = 0.0;
    double gradient_term = 0.0;
    double l1_term = 0.0;
    double l2_term = 0.0;
};

inline NashReport evaluate(const RadialFunction& u, const NashConstants& c)
{
    require(u.dim == c.dim, "evaluate: dimension mismatch");
    const double n = u.dim;
    NashReport r;
    r.gradient_term = dirichlet_energy(u);
    r.l1_term = integrate(u, 1.0);
    r.l2_term = integrate(u, 2.0);
    if (!(r.l2_term > 0)) throw DegenerateInput("evaluate: zero L2 norm");
    r.value = r.gradient_term * std::pow(r.l1_term, 4 / n) / std::pow(r.l2_term, 1 + 2 / n);
    r.normalized = r.value * c.a0;
    return r;
}

enum class Family { gaussian, tent, polynomial, spline, phi_perturbation };
inline constexpr int family_count = 5;

inline std::string to_string(Family f)
{
    switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::tent: return "tent";
    case Family::polynomial: return "polynomial";
    case Family::spline: return "spline";
    case Family::phi_perturbation: return "phi_perturbation";
    }
    return "?";
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Portable uniform in [lo, hi); std distributions are implementation-defined.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t s) : eng(s) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * double(eng() >> 11) * 0x1.0p-53; }
    int integer(int lo, int hi) { return lo + int(eng() % std::uint64_t(hi - lo + 1)); }
};

inline std::vector<double> linspace(double a, double b, int cells)
{
    std::vector<double> x(cells + 1);
    for (int i = 0; i <= cells; ++i) x[i] = a + (b - a) * i / cells;
    x.back() = b;
    return x;
}

}  // namespace detail

// Bump (1 - ((r-c)/w)^2)^2 on |r-c| < w, C^1.
inline RadialFunction perturb(const RadialFunction& base, double s, double center, double width)
{
    RadialFunction f = base;
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        const double z = (f.grid[i] - center) / width;
        if (std::abs(z) >= 1) continue;
        f.values[i] += s * (1 - z * z) * (1 - z * z);
        f.slopes[i] += s * (-4 * z * (1 - z * z)) / width;
    }
    return f;
}

inline RadialFunction sample_family(Family fam, int dim, detail::Rng& rng, const RadialFunction& phi)
{
    using detail::linspace;
    switch (fam) {
    case Family::gaussian: {
        const double sigma = rng.uniform(0.2, 5.0);
        auto r = linspace(0, 6 * sigma, 512);
        std::vector<double> y(r.size()), dy(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            y[i] = std::exp(-r[i] * r[i] / (sigma * sigma));
            dy[i] = -2 * r[i] / (sigma * sigma) * y[i];
        }
        return RadialFunction(dim, std::move(r), std::move(y), std::move(dy));
    }
    case Family::tent: {
        const double R = rng.uniform(0.5, 5.0), p = rng.uniform(1.0, 4.0);
        auto r = linspace(0, R, 256);
        std::vector<double> y(r.size()), dy(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double t = std::max(0.0, 1 - r[i] / R);
            y[i] = std::pow(t, p);
            dy[i] = -p / R * std::pow(t, p - 1);
        }
        return RadialFunction(dim, std::move(r), std::move(y), std::move(dy));
    }
    case Family::polynomial: {
        const double R = rng.uniform(0.5, 5.0);
        const int m = rng.integer(1, 6);
        auto r = linspace(0, R, 256);
        std::vector<double> y(r.size()), dy(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double q = r[i] / R, t = 1 - q * q;
            y[i] = std::pow(t, m);
            dy[i] = -2.0 * m * q / R * std::pow(t, m - 1);
        }
        return RadialFunction(dim, std::move(r), std::move(y), std::move(dy));
    }
    case Family::spline: {
        const double R = rng.uniform(0.5, 5.0);
        const int knots = rng.integer(3, 10);
        auto r = linspace(0, R, knots);
        std::vector<double> y(r.size()), dy(r.size(), 0.0);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) y[i] = rng.uniform(0.05, 1.0);
        y.back() = 0.0;
        return RadialFunction(dim, std::move(r), std::move(y), std::move(dy));
    }
    case Family::phi_perturbation: {
        const double R = phi.support_radius;
        const double s = rng.uniform(-0.1, 0.1) * phi.values.front();
        // keep the bump inside the support so the sample stays continuous at R
        const double c = rng.uniform(0.1, 0.9) * R;
        const double w = std::min({rng.uniform(0.05, 0.3) * R, c, R - c});
        return perturb(phi, s, c, w);
    }
    }
    throw InvalidArgument("sample_family: unknown family");
}

struct SuiteReport {
    int dim = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double min_normalized = std::numeric_limits<double>::infinity();
    int failures = 0;
    std::string argmin_family;
    double max_homogeneity_error = 0.0;
    double max_dilation_error = 0.0;
    int homogeneity_failures = 0;
    int dilation_failures = 0;
};

inline constexpr double suite_bound_tol = 1e-6;
inline constexpr double homogeneity_tol = 1e-10;
inline constexpr double dilation_tol = 1e-6;

inline SuiteReport property_suite(int dim, const NashConstants& c, int trials, std::uint64_t seed,
                                  int threads = 1)
{
    require(trials >= 1, "property_suite: trials must be >= 1");
    require(c.dim == dim, "property_suite: dimension mismatch");
    // A coarser eigen grid keeps the phi family cheap; 1024 RK4 steps is still far below 1e-6.
    const auto eig = solve_lambda1(dim, std::nullopt, 1e-12, 1024);
    const RadialFunction phi = build_phi(eig, c, 1.0);

    struct Trial {
        double normalized, hom_err, dil_err;
        int family;
    };
    std::vector<Trial> out(trials);

    auto run_trial = [&](int i) {
        detail::Rng rng(detail::splitmix64(seed ^ detail::splitmix64(std::uint64_t(i))));
        const auto fam = Family(i % family_count);
        const RadialFunction u = sample_family(fam, dim, rng, phi);
        const double base = evaluate(u, c).value;
        double hom = 0.0, dil = 0.0;
        for (double k : {0.5, 3.0, 100.0})
            hom = std::max(hom, std::abs(evaluate(u.scaled(k), c).value - base) / base);
        for (double s : {0.5, 2.0}) dil = std::max(dil, std::abs(evaluate(u.dilated(s), c).value - base) / base);
        out[i] = {base * c.a0, hom, dil, int(fam)};
    };

    const int nt = std::max(1, std::min(threads, trials));
    if (nt == 1) {
        for (int i = 0; i < trials; ++i) run_trial(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&] {
                for (int i = next++; i < trials; i = next++) run_trial(i);
            });
    }

    SuiteReport rep;
    rep.dim = dim;
    rep.trials = trials;
    rep.seed = seed;
    for (const auto& t : out) {
        if (t.normalized < rep.min_normalized) {
            rep.min_normalized = t.normalized;
            rep.argmin_family = to_string(Family(t.family));
        }
        if (t.normalized < 1 - suite_bound_tol) ++rep.failures;
        rep.max_homogeneity_error = std::max(rep.max_homogeneity_error, t.hom_err);
        rep.max_dilation_error = std::max(rep.max_dilation_error, t.dil_err);
        if (t.hom_err > homogeneity_tol) ++rep.homogeneity_failures;
        if (t.dil_err > dilation_tol) ++rep.dilation_failures;
    }
    return rep;
}

}  // namespace nash_sharp
