#pragma once

#include "wkgeom/chebyshev.hpp"
#include "wkgeom/draws.hpp"
#include "wkgeom/energy.hpp"
#include "wkgeom/epsgeodesic.hpp"
#include "wkgeom/errors.hpp"
#include "wkgeom/extremal.hpp"
#include "wkgeom/gauss.hpp"
#include "wkgeom/geodesic.hpp"
#include "wkgeom/linalg.hpp"
#include "wkgeom/polytope.hpp"
#include "wkgeom/rng.hpp"
#include "wkgeom/toric.hpp"
#include "wkgeom/verdict.hpp"
#include "wkgeom/version.hpp"
#include "wkgeom/weights.hpp"
