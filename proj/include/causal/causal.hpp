#pragma once

// Umbrella header: the whole library in one include.

#include "causal/types.hpp"
#include "causal/expr.hpp"
#include "causal/model.hpp"
#include "causal/engine.hpp"
#include "causal/formula.hpp"
#include "causal/sufficiency.hpp"
#include "causal/causation.hpp"
#include "causal/dsl.hpp"
#include "causal/enumerate.hpp"
#include "causal/verify.hpp"
#include "causal/corpus.hpp"
