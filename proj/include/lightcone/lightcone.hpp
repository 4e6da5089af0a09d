// Umbrella header.
#pragma once

#include "lightcone/minkowski.hpp"
#include "lightcone/immersion.hpp"
#include "lightcone/catalog.hpp"
#include "lightcone/frames.hpp"
#include "lightcone/curvature.hpp"
#include "lightcone/quadrature.hpp"
#include "lightcone/heightfn.hpp"
#include "lightcone/integrate.hpp"
#include "lightcone/tightness.hpp"
#include "lightcone/report.hpp"
