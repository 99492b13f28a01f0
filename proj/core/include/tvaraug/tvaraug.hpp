#pragma once

#include "tvaraug/augment.hpp"
#include "tvaraug/dataset.hpp"
#include "tvaraug/errors.hpp"
#include "tvaraug/interp.hpp"
#include "tvaraug/matrix.hpp"
#include "tvaraug/rng.hpp"
#include "tvaraug/stats.hpp"
#include "tvaraug/tvar.hpp"
#include "tvaraug/validate.hpp"
