#pragma once

#include "bench.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "fixpoint.hpp"
#include "formula.hpp"
#include "icgs.hpp"
#include "model_io.hpp"
#include "parser.hpp"
#include "report.hpp"
#include "state_set.hpp"
#include "translate.hpp"
