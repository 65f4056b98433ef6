#pragma once

#include "rsfix/experiments.hpp"
#include "rsfix/keyvalue.hpp"
#include "rsfix/oracles.hpp"
#include "rsfix/permutation.hpp"
#include "rsfix/random.hpp"
#include "rsfix/samplers.hpp"
#include "rsfix/shape_geometry.hpp"
#include "rsfix/young_diagram.hpp"
#include "rsfix/verify.hpp"
