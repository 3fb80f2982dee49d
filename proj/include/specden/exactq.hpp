#pragma once

#include "specden/error.hpp"
#include "specden/exactq/poly.hpp"
#include "specden/exactq/qsqrt.hpp"
#include "specden/exactq/ratfun.hpp"
#include "specden/exactq/rational.hpp"
#include "specden/exactq/series.hpp"
