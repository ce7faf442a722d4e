#pragma once

#include "mcdens/bounds.hpp"
#include "mcdens/budget.hpp"
#include "mcdens/chains.hpp"
#include "mcdens/estimators.hpp"
#include "mcdens/experiments.hpp"
#include "mcdens/geometry.hpp"
#include "mcdens/instances.hpp"
#include "mcdens/quadrature.hpp"
#include "mcdens/report_io.hpp"
#include "mcdens/rng.hpp"
#include "mcdens/spectral.hpp"
