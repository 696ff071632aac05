// Umbrella header.
#pragma once

#include "mhdlab/analyticity.hpp"
#include "mhdlab/calibration.hpp"
#include "mhdlab/constants.hpp"
#include "mhdlab/error.hpp"
#include "mhdlab/field.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/harmonic_measure.hpp"
#include "mhdlab/io/commands.hpp"
#include "mhdlab/io/config.hpp"
#include "mhdlab/io/initial_data.hpp"
#include "mhdlab/io/snapshot.hpp"
#include "mhdlab/io/verdict_log.hpp"
#include "mhdlab/mild_solver.hpp"
#include "mhdlab/monitor.hpp"
#include "mhdlab/sparseness.hpp"
#include "mhdlab/spectral.hpp"
