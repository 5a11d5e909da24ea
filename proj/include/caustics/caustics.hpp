#pragma once

#include "caustics/billiard_dynamics.hpp"
#include "caustics/boundary_geometry.hpp"
#include "caustics/error.hpp"
#include "caustics/fourier_profile.hpp"
#include "caustics/io.hpp"
#include "caustics/numerics.hpp"
#include "caustics/obstruction_analyzer.hpp"
#include "caustics/oracle.hpp"
#include "caustics/perturbation_engine.hpp"
#include "caustics/variational_orbits.hpp"
