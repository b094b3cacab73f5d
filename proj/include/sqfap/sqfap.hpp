#pragma once

#include "sqfap/arith.hpp"
#include "sqfap/congruence.hpp"
#include "sqfap/error.hpp"
#include "sqfap/exponent.hpp"
#include "sqfap/parallel.hpp"
#include "sqfap/pipeline.hpp"
#include "sqfap/progression.hpp"
#include "sqfap/rational.hpp"
