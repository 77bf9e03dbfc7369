#pragma once

#include "hvol/error.hpp"
#include "hvol/rational.hpp"
#include "hvol/exactgeom.hpp"
#include "hvol/singularities.hpp"
#include "hvol/valuation.hpp"
#include "hvol/reeb.hpp"
#include "hvol/quotient.hpp"
#include "hvol/quadrature.hpp"
#include "hvol/filtration.hpp"
#include "hvol/io.hpp"
#include "hvol/selftest.hpp"
