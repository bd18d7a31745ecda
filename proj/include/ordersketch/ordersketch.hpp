#pragma once

#include "ordersketch/bench.hpp"
#include "ordersketch/closure.hpp"
#include "ordersketch/dagify.hpp"
#include "ordersketch/eval.hpp"
#include "ordersketch/hash.hpp"
#include "ordersketch/merge.hpp"
#include "ordersketch/ontology.hpp"
#include "ordersketch/random.hpp"
#include "ordersketch/sketch.hpp"
