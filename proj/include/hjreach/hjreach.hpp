#pragma once

#include "bolza.hpp"
#include "config.hpp"
#include "dynamics.hpp"
#include "field_io.hpp"
#include "gravity.hpp"
#include "grid.hpp"
#include "hamiltonian.hpp"
#include "hjsolver.hpp"
#include "integrate.hpp"
#include "interval.hpp"
#include "model.hpp"
#include "output.hpp"
#include "parallel.hpp"
#include "pareto.hpp"
#include "trajectory.hpp"
#include "value_field.hpp"
#include "weno.hpp"
