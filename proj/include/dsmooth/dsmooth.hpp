#pragma once

#include "dsmooth/baselines.hpp"
#include "dsmooth/common.hpp"
#include "dsmooth/fgm.hpp"
#include "dsmooth/imaging.hpp"
#include "dsmooth/linops.hpp"
#include "dsmooth/oracles.hpp"
#include "dsmooth/random.hpp"
#include "dsmooth/smoothing.hpp"
#include "dsmooth/solver.hpp"
