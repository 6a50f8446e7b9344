#pragma once

// Umbrella header: lifting of periodic complex dynamical systems into
// truncated linear systems (monomial and exponential coordinates), their
// integration, and the explicit convergence bounds.

#include "cfl/bounds.hpp"
#include "cfl/carleman.hpp"
#include "cfl/core.hpp"
#include "cfl/fourier_lift.hpp"
#include "cfl/fourier_system.hpp"
#include "cfl/io.hpp"
#include "cfl/lifted_system.hpp"
#include "cfl/metrics.hpp"
#include "cfl/multiindex.hpp"
#include "cfl/ode.hpp"
#include "cfl/sweep.hpp"
