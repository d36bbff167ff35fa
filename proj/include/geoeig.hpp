#pragma once

#include "geoeig/checks.hpp"
#include "geoeig/dense_eig.hpp"
#include "geoeig/diagonal.hpp"
#include "geoeig/distributed.hpp"
#include "geoeig/errors.hpp"
#include "geoeig/experiment.hpp"
#include "geoeig/filters.hpp"
#include "geoeig/geo_matrix.hpp"
#include "geoeig/graph.hpp"
#include "geoeig/io.hpp"
#include "geoeig/metrics.hpp"
#include "geoeig/network_sim.hpp"
#include "geoeig/poly_filter.hpp"
#include "geoeig/preconditioners.hpp"
#include "geoeig/random_instances.hpp"
#include "geoeig/rng.hpp"
#include "geoeig/solvers.hpp"
#include "geoeig/theory.hpp"
#include "geoeig/trajectory.hpp"
