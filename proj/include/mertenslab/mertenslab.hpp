#pragma once

// Umbrella header for the library part (everything except the CLI layer).

#include "arith.hpp"
#include "bounds.hpp"
#include "compensated.hpp"
#include "constants.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "partial_sums.hpp"
#include "report.hpp"
#include "sieve.hpp"
