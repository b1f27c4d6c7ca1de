#pragma once

#include "subharm/characteristics.hpp"
#include "subharm/errors.hpp"
#include "subharm/extended_real.hpp"
#include "subharm/function_model.hpp"
#include "subharm/golden_section.hpp"
#include "subharm/harness.hpp"
#include "subharm/inequalities.hpp"
#include "subharm/quadrature.hpp"
#include "subharm/rng.hpp"
#include "subharm/serialization.hpp"
#include "subharm/sets_and_weights.hpp"
