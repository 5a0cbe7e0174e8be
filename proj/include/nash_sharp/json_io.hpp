#pragma once

#include <string>

#include "json.hpp"

#include "constants.hpp"
#include "nash_functional.hpp"
#include "penalized_minimizer.hpp"

namespace nash_sharp {

using json = nlohmann::ordered_json;

inline void to_json(json& j, const NashConstants& c)
{
    j = json{{"dim", c.dim},          {"vol_unit_ball", c.vol_unit_ball}, {"lambda1", c.lambda1},
             {"a0", c.a0},            {"lambda0", c.lambda0},             {"threshold_coeff", c.threshold_coeff}};
}

inline void to_json(json& j, const ManifoldModel& m)
{
    j = json{{"kind", to_string(m.kind)},
             {"dim", m.dim},
             {"size_param", m.size_param},
             {"volume", m.volume},
             {"max_scalar_curvature", m.max_scalar_curvature}};
}

inline void to_json(json& j, const NashReport& r)
{
    j = json{{"value", r.value},
             {"normalized", r.normalized},
             {"gradient_term", r.gradient_term},
             {"l1_term", r.l1_term},
             {"l2_term", r.l2_term}};
}

inline void to_json(json& j, const SuiteReport& r)
{
    j = json{{"min_normalized", r.min_normalized},
             {"failures", r.failures},
             {"trials", r.trials},
             {"seed", r.seed},
             {"dim", r.dim},
             {"argmin_family", r.argmin_family},
             {"max_homogeneity_error", r.max_homogeneity_error},
             {"max_dilation_error", r.max_dilation_error},
             {"homogeneity_failures", r.homogeneity_failures},
             {"dilation_failures", r.dilation_failures}};
}

inline json delta_map(const std::map<double, double>& m)
{
    json j = json::object();
    for (const auto& [k, v] : m) j[json(k).dump()] = v;
    return j;
}

inline json trajectory_record(const MinimizerState& s, const ConcentrationReport& r)
{
    return json{{"alpha", s.alpha},
                {"eps_alpha", s.eps_alpha},
                {"mu_alpha", s.mu_alpha},
                {"A_alpha", s.A_alpha},
                {"B_alpha", s.B_alpha},
                {"k_alpha", s.k_alpha},
                {"residual", s.residual},
                {"iterations", s.iterations},
                {"x_max_index", s.x_max_index},
                {"mass_in_ball", delta_map(r.mass_in_ball)},
                {"profile_deviation", r.profile_deviation},
                {"converged", s.converged},
                {"l2_mass_in_ball", delta_map(r.l2_mass_in_ball)},
                {"decay_sup", r.decay_sup},
                {"a_alpha", r.a_alpha}};
}

}  // namespace nash_sharp
