#pragma once

#include "bwp/analysis.hpp"
#include "bwp/common.hpp"
#include "bwp/geometry.hpp"
#include "bwp/io.hpp"
#include "bwp/metrics.hpp"
#include "bwp/montecarlo.hpp"
#include "bwp/propagation.hpp"
#include "bwp/quadrature.hpp"
#include "bwp/surrogate.hpp"
