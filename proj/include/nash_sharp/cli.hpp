#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "json_io.hpp"
#include "nash_sharp.hpp"

namespace nash_sharp::cli {

struct RunConfig {
    std::string command;
    int dim = 1;
    // model
    std::string model = "sphere";
    std::optional<double> radius, length, side;
    // eigen
    double tol = 1e-10;
    int grid = 4096;
    // profile
    double k = 1.0;
    int samples = 0;
    std::string csv;
    // verify
    int trials = 1000;
    std::uint64_t seed = 0;
    // minimize / sweep
    double alpha = 0.0;
    std::vector<double> alphas;
    bool relative = false;  // alphas given in units of 1/A0
    std::optional<double> alpha0;
    double alpha0_margin = 0.0;
    std::optional<double> eps;
    int resolution = 512;
    std::string init = "bump";
    double bump_width = 0.2;
    int max_iter = 5000;
    double residual_tol = 1e-8;
    bool cold = false;
    std::string output_path;
};

inline json to_json(const RunConfig& c)
{
    json j{{"command", c.command}, {"dim", c.dim}};
    auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
    if (c.command == "eigen") {
        j["tol"] = c.tol;
        j["grid"] = c.grid;
    } else if (c.command == "profile") {
        j["k"] = c.k;
        j["samples"] = c.samples;
        j["csv"] = c.csv;
    } else if (c.command == "verify") {
        j["trials"] = c.trials;
        j["seed"] = c.seed;
    } else if (c.command == "threshold" || c.command == "minimize" || c.command == "sweep") {
        j["model"] = c.model;
        j["radius"] = opt(c.radius);
        j["length"] = opt(c.length);
        j["side"] = opt(c.side);
    }
    if (c.command == "minimize" || c.command == "sweep") {
        if (c.command == "minimize") j["alpha"] = c.alpha;
        else j["alphas"] = c.alphas;
        j["relative"] = c.relative;
        j["alpha0"] = opt(c.alpha0);
        j["alpha0_margin"] = c.alpha0_margin;
        j["eps"] = opt(c.eps);
        j["resolution"] = c.resolution;
        j["init"] = c.init;
        j["bump_width"] = c.bump_width;
        j["max_iter"] = c.max_iter;
        j["residual_tol"] = c.residual_tol;
        j["csv"] = c.csv;
        if (c.command == "sweep") j["cold"] = c.cold;
    }
    return j;
}

inline RunConfig from_json(const json& j)
{
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key) && !j[key].is_null()) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    auto get_opt = [&](const char* key, std::optional<double>& field) {
        if (j.contains(key) && !j[key].is_null()) field = j[key].get<double>();
    };
    get("dim", c.dim);
    get("model", c.model);
    get_opt("radius", c.radius);
    get_opt("length", c.length);
    get_opt("side", c.side);
    get("tol", c.tol);
    get("grid", c.grid);
    get("k", c.k);
    get("samples", c.samples);
    get("csv", c.csv);
    get("trials", c.trials);
    get("seed", c.seed);
    get("alpha", c.alpha);
    get("alphas", c.alphas);
    get("relative", c.relative);
    get_opt("alpha0", c.alpha0);
    get("alpha0_margin", c.alpha0_margin);
    get_opt("eps", c.eps);
    get("resolution", c.resolution);
    get("init", c.init);
    get("bump_width", c.bump_width);
    get("max_iter", c.max_iter);
    get("residual_tol", c.residual_tol);
    get("cold", c.cold);
    get("output_path", c.output_path);
    return c;
}

inline void validate(const RunConfig& c)
{
    static const std::vector<std::string> commands{"constants", "eigen",    "profile", "verify",
                                                   "threshold", "minimize", "sweep"};
    require(std::find(commands.begin(), commands.end(), c.command) != commands.end(),
            "unknown command '" + c.command + "'");
    require(c.dim >= 1, "--dim must be >= 1");
    require(c.tol > 0, "--tol must be positive");
    require(c.grid >= 16, "--grid must be >= 16");
    require(c.k > 0, "--k must be positive");
    require(c.samples >= 0, "--samples must be nonnegative");
    require(c.trials >= 1, "--trials must be >= 1");
    require(c.model == "circle" || c.model == "sphere" || c.model == "torus", "--model must be circle|sphere|torus");
    for (const auto& p : {c.radius, c.length, c.side}) require(!p || *p > 0, "model size must be positive");
    require(c.resolution >= 32, "--resolution must be >= 32");
    require(c.init == "constant" || c.init == "bump", "--init must be constant|bump");
    require(c.bump_width > 0, "--bump-width must be positive");
    require(c.max_iter >= 1, "--max-iter must be >= 1");
    require(c.residual_tol > 0, "--residual-tol must be positive");
    require(!c.eps || *c.eps >= 0, "--eps must be nonnegative");
    if (c.command == "minimize") require(c.alpha > 0, "--alpha must be positive");
    if (c.command == "sweep") {
        require(!c.alphas.empty(), "--alphas is required");
        for (double a : c.alphas) require(a > 0, "--alphas must be positive");
    }
}

inline ManifoldModel make_model(const RunConfig& c)
{
    if (c.model == "circle") {
        require(c.dim == 1, "circle requires --dim 1");
        return make_circle(c.length.value_or(2 * std::numbers::pi));
    }
    if (c.model == "sphere") return make_round_sphere(c.dim, c.radius.value_or(1.0));
    return make_flat_torus(c.dim, c.side.value_or(1.0));
}

inline int env_threads()
{
    if (const char* s = std::getenv("NASH_SHARP_THREADS")) {
        const int t = std::atoi(s);
        if (t >= 1) return t;
    }
    return 1;
}

namespace detail {

inline void write_node_csv(const std::string& path, const ManifoldGrid& g, const std::vector<double>& u)
{
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path);
    os.precision(17);
    os << "node,position,value\n";
    for (std::size_t i = 0; i < u.size(); ++i) os << i << ',' << g.nodes[i] << ',' << u[i] << '\n';
}

inline json run_command(const RunConfig& c)
{
    json out{{"config", to_json(c)}};
    if (c.command == "constants") {
        out["constants"] = compute_constants(c.dim);
    } else if (c.command == "eigen") {
        const auto e = solve_lambda1(c.dim, std::nullopt, c.tol, c.grid);
        const auto u = eigenfunction(e);
        out["eigen"] = json{{"dim", e.dim},
                            {"lambda1", e.lambda1},
                            {"u_at_1", e.u_at_1},
                            {"derivative_at_1", e.derivative_at_1},
                            {"samples", e.grid.size()},
                            {"mean", integrate_signed(u)},
                            {"rayleigh_quotient", dirichlet_energy(u) / integrate(u, 2.0)},
                            {"sign_changes", sign_changes(e.values)}};
    } else if (c.command == "profile") {
        const auto e = solve_lambda1(c.dim);
        const auto k = compute_constants(c.dim, e);
        const auto v = build_v(e);
        const auto phi = build_phi(e, k, c.k);
        const double B = k.vol_unit_ball, u1 = e.u_at_1, n = c.dim;
        out["constants"] = k;
        out["profile"] = json{{"k", c.k},
                              {"support_radius", phi.support_radius},
                              {"phi_at_0", phi.values.front()},
                              {"int_v", integrate(v, 1.0)},
                              {"int_v_expected", -B * u1},
                              {"int_v2", integrate(v, 2.0)},
                              {"int_v2_expected", (n + 2) / 2 * u1 * u1 * B},
                              {"nash", evaluate(phi, k)}};
        if (!c.csv.empty()) {
            std::ofstream os(c.csv);
            if (!os) throw Error("cannot open " + c.csv);
            write_csv(os, phi, c.samples);
        }
    } else if (c.command == "verify") {
        const auto k = compute_constants(c.dim);
        out["report"] = property_suite(c.dim, k, c.trials, c.seed, env_threads());
    } else if (c.command == "threshold") {
        const auto m = make_model(c);
        const auto k = compute_constants(c.dim);
        const auto v = corollary_check(k, m);
        out["model"] = m;
        out["threshold"] = threshold(c.dim, k, m);
        out["volume_term"] = std::pow(m.volume, -2.0 / m.dim);
        out["corollary"] = v.holds ? "holds" : "fails";
        out["margin"] = v.margin;
    } else {
        const auto m = make_model(c);
        const auto k = compute_constants(c.dim);
        const auto g = build_grid(m, c.resolution);
        const double alpha0 = c.alpha0.value_or(default_alpha0(k, m, c.alpha0_margin));
        const double unit = c.relative ? 1 / k.a0 : 1.0;
        auto eps_of = [&](double a) { return c.eps.value_or(a * k.a0); };
        const auto init = c.init == "bump" ? bump_init(g, c.bump_width) : constant_init(g);
        const auto eig = solve_lambda1(c.dim);
        const auto phi = build_phi(eig, k, 1.0);
        SweepOptions so;
        so.minimizer.max_iter = c.max_iter;
        so.minimizer.tol = c.residual_tol;
        out["model"] = m;
        out["ansatz"] = m.kind == ModelKind::round_sphere ? "zonal (rotationally symmetric about node 0)" : "none";
        out["alpha0"] = alpha0;
        out["a0_inverse"] = 1 / k.a0;
        std::vector<double> alphas = c.command == "minimize" ? std::vector<double>{c.alpha} : c.alphas;
        for (auto& a : alphas) a *= unit;
        if (c.command == "minimize") {
            auto s = minimize(g, alphas[0], alpha0, eps_of(alphas[0]), init, so.minimizer);
            const auto e = make_entry(std::move(s), g, phi, so.deltas);
            out["state"] = trajectory_record(e.state, e.report);
            if (!c.csv.empty()) write_node_csv(c.csv, g, e.state.u);
        } else {
            so.warm_start = !c.cold;
            so.threads = env_threads();
            const auto tr = alpha_sweep(g, alphas, alpha0, eps_of, init, phi, so);
            json recs = json::array(), r1 = json::array(), r2 = json::array(), r3 = json::array();
            for (const auto& e : tr) {
                recs.push_back(trajectory_record(e.state, e.report));
                r1.push_back(e.r1);
                r2.push_back(e.r2);
                r3.push_back(e.r3);
            }
            out["trajectory"] = recs;
            out["r1"] = r1;
            out["r2"] = r2;
            out["r3"] = r3;
            out["r3_limit"] = (2 + 4.0 / c.dim) / k.a0;
        }
    }
    return out;
}

}  // namespace detail

// Dispatches a validated config; JSON to out (or output_path), diagnostics to err.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        validate(c);
        const std::string text = detail::run_command(c).dump(2) + "\n";
        if (c.output_path.empty()) {
            out << text;
        } else {
            std::ofstream os(c.output_path);
            if (!os) throw Error("cannot open " + c.output_path);
            os << text;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "nash_sharp " << c.command << ": " << e.what() << '\n';
        return 1;
    }
}

struct Parsed {
    RunConfig config;
    int exit_code = -1;  // >= 0: stop with this code (help or parse error)
};

inline Parsed parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Parsed p;
    RunConfig& c = p.config;
    CLI::App app{"Sharp Nash constants, extremal profiles and penalized minimizers"};
    app.require_subcommand(0, 1);
    std::string json_config;
    app.add_option("--json-config", json_config, "Read a serialized RunConfig from this file");
    app.add_option("-o,--output", c.output_path, "Write JSON here instead of stdout");

    auto dim = [&](CLI::App* s) { s->add_option("--dim", c.dim, "Dimension n")->required(); };
    auto model = [&](CLI::App* s) {
        s->add_option("--model", c.model, "circle|sphere|torus")
            ->required()
            ->check(CLI::IsMember({"circle", "sphere", "torus"}));
        auto* r = s->add_option("--radius", c.radius, "Sphere radius");
        auto* l = s->add_option("--length", c.length, "Circle length");
        auto* a = s->add_option("--side", c.side, "Torus side");
        r->excludes(l)->excludes(a);
        l->excludes(a);
    };
    auto penal = [&](CLI::App* s) {
        s->add_option("--alpha0", c.alpha0, "Penalty level B/A0 (default from volume and threshold)");
        s->add_option("--alpha0-margin", c.alpha0_margin, "Margin added to B before dividing by A0");
        s->add_option("--eps", c.eps, "Fixed eps_alpha (default alpha*A0)");
        s->add_option("--resolution", c.resolution, "Grid resolution");
        s->add_option("--init", c.init, "constant|bump")->check(CLI::IsMember({"constant", "bump"}));
        s->add_option("--bump-width", c.bump_width, "Width of the bump initialization");
        s->add_option("--max-iter", c.max_iter, "Iteration cap");
        s->add_option("--residual-tol", c.residual_tol, "Euler residual tolerance");
        s->add_flag("--relative", c.relative, "Alphas are multiples of 1/A0");
        s->add_option("--csv", c.csv, "Dump node values (minimize)");
    };

    auto* s_const = app.add_subcommand("constants", "Closed-form constants");
    dim(s_const);
    auto* s_eig = app.add_subcommand("eigen", "Radial Neumann eigenvalue");
    dim(s_eig);
    s_eig->add_option("--tol", c.tol, "Bisection tolerance on lambda");
    s_eig->add_option("--grid", c.grid, "RK4 steps");
    auto* s_prof = app.add_subcommand("profile", "Extremal profile and identities");
    dim(s_prof);
    s_prof->add_option("--k", c.k, "Amplitude k");
    s_prof->add_option("--samples", c.samples, "Uniform CSV samples (0: native grid)");
    s_prof->add_option("--csv", c.csv, "CSV output path");
    auto* s_ver = app.add_subcommand("verify", "Randomized lower-bound check");
    dim(s_ver);
    s_ver->add_option("--trials", c.trials, "Number of random functions")->required();
    s_ver->add_option("--seed", c.seed, "RNG seed")->required();
    auto* s_thr = app.add_subcommand("threshold", "Curvature threshold and corollary");
    dim(s_thr);
    model(s_thr);
    auto* s_min = app.add_subcommand("minimize", "Minimize the penalized functional");
    dim(s_min);
    model(s_min);
    s_min->add_option("--alpha", c.alpha, "alpha")->required();
    penal(s_min);
    auto* s_sw = app.add_subcommand("sweep", "Warm-started alpha sweep");
    dim(s_sw);
    model(s_sw);
    s_sw->add_option("--alphas", c.alphas, "Decreasing alphas")->required()->delimiter(',');
    s_sw->add_flag("--cold", c.cold, "Independent runs from init (parallel under NASH_SHARP_THREADS)");
    penal(s_sw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        p.exit_code = app.exit(e, out, err);
        if (p.exit_code == 0) return p;
        p.exit_code = 2;
        return p;
    }
    if (!json_config.empty()) {
        std::ifstream is(json_config);
        if (!is) {
            err << "nash_sharp: cannot open " << json_config << '\n';
            p.exit_code = 2;
            return p;
        }
        const std::string out_path = c.output_path;
        try {
            c = from_json(json::parse(is));
        } catch (const std::exception& e) {
            err << "nash_sharp: bad --json-config: " << e.what() << '\n';
            p.exit_code = 2;
            return p;
        }
        if (!out_path.empty()) c.output_path = out_path;
        return p;
    }
    for (auto* s : app.get_subcommands()) c.command = s->get_name();
    if (c.command.empty()) {
        err << app.help();
        p.exit_code = 2;
    }
    return p;
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    const Parsed p = parse(argc, argv, out, err);
    if (p.exit_code >= 0) return p.exit_code;
    return run(p.config, out, err);
}

}  // namespace nash_sharp::cli
