#pragma once

#include "mpsbench/analysis.hpp"
#include "mpsbench/catalog.hpp"
#include "mpsbench/circuit.hpp"
#include "mpsbench/config.hpp"
#include "mpsbench/dynamics.hpp"
#include "mpsbench/error.hpp"
#include "mpsbench/excitation.hpp"
#include "mpsbench/physics.hpp"
#include "mpsbench/plot.hpp"
#include "mpsbench/readout.hpp"
#include "mpsbench/report.hpp"
#include "mpsbench/sweep.hpp"
#include "mpsbench/units.hpp"
