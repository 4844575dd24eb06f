#pragma once

#include "tbgeom/errors.hpp"
#include "tbgeom/jet.hpp"
#include "tbgeom/expr.hpp"
#include "tbgeom/linalg.hpp"
#include "tbgeom/manifold.hpp"
#include "tbgeom/riemann.hpp"
#include "tbgeom/bundle.hpp"
#include "tbgeom/oracle.hpp"
#include "tbgeom/local_geometry.hpp"
#include "tbgeom/koszul.hpp"
#include "tbgeom/sasaki.hpp"
#include "tbgeom/cheeger_gromoll.hpp"
#include "tbgeom/geodesics.hpp"
#include "tbgeom/sampling.hpp"
#include "tbgeom/verify.hpp"
