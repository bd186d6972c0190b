#pragma once

#include "fwmnbm/self_checks.hpp"
#include "fwmnbm/classifier.hpp"
#include "fwmnbm/clipping.hpp"
#include "fwmnbm/error.hpp"
#include "fwmnbm/estimation.hpp"
#include "fwmnbm/evaluation.hpp"
#include "fwmnbm/feature_weights.hpp"
#include "fwmnbm/model_io.hpp"
#include "fwmnbm/random.hpp"
#include "fwmnbm/schema.hpp"
#include "fwmnbm/simgen.hpp"
