#pragma once

#include "qdc/core/errors.hpp"
#include "qdc/core/gates.hpp"
#include "qdc/core/layout.hpp"
#include "qdc/core/ops.hpp"
#include "qdc/core/rng.hpp"
#include "qdc/core/state.hpp"
#include "qdc/core/tolerances.hpp"
