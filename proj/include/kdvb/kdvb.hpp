#pragma once

// Umbrella header.

#include "kdvb/complex_hyperbolic.hpp"
#include "kdvb/errors.hpp"
#include "kdvb/factorizer.hpp"
#include "kdvb/figures.hpp"
#include "kdvb/grid.hpp"
#include "kdvb/io.hpp"
#include "kdvb/params.hpp"
#include "kdvb/rational_audit.hpp"
#include "kdvb/rk4.hpp"
#include "kdvb/solutions.hpp"
#include "kdvb/suite.hpp"
#include "kdvb/taylor.hpp"
#include "kdvb/verify.hpp"
