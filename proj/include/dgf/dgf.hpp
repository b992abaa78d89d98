#pragma once

#include "dgf/besov.hpp"
#include "dgf/coefficients.hpp"
#include "dgf/config.hpp"
#include "dgf/errors.hpp"
#include "dgf/experiments.hpp"
#include "dgf/fragmentation.hpp"
#include "dgf/grid.hpp"
#include "dgf/ibm.hpp"
#include "dgf/initial.hpp"
#include "dgf/kernel.hpp"
#include "dgf/metrics.hpp"
#include "dgf/mild.hpp"
#include "dgf/pde.hpp"
#include "dgf/random.hpp"
#include "dgf/record.hpp"
#include "dgf/sde.hpp"
#include "dgf/validation.hpp"
