#pragma once

#include "sqg/error.hpp"
#include "sqg/json_io.hpp"
#include "sqg/kernels.hpp"
#include "sqg/limits.hpp"
#include "sqg/measures.hpp"
#include "sqg/morphisms.hpp"
#include "sqg/random.hpp"
#include "sqg/rebalance.hpp"
#include "sqg/shapes.hpp"
