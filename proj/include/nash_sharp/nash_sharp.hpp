#pragma once

#include "ball_eigen.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "extremal_profile.hpp"
#include "manifold_grid.hpp"
#include "nash_functional.hpp"
#include "penalized_minimizer.hpp"
