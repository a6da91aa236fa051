#pragma once

// Interpolation sequences for entire functions of exponential type bounded on
// the real line: geometric condition checkers, explicit constructions and
// numerical verification.

#include "blaschke.hpp"
#include "conditions.hpp"
#include "error.hpp"
#include "generating.hpp"
#include "interpolant.hpp"
#include "sequence.hpp"
#include "summation.hpp"
#include "verification.hpp"
#include "weights.hpp"
