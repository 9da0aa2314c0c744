#pragma once

// Umbrella header.

#include "bounds.hpp"
#include "core.hpp"
#include "coverage.hpp"
#include "estimators.hpp"
#include "exact_oracle.hpp"
#include "generators.hpp"
#include "hardness.hpp"
#include "instance_io.hpp"
#include "opt_solver.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "sd_engine.hpp"
