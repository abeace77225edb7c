#pragma once

#include "tracial/errors.hpp"
#include "tracial/evaluator.hpp"
#include "tracial/formula.hpp"
#include "tracial/games.hpp"
#include "tracial/json_io.hpp"
#include "tracial/matrix.hpp"
#include "tracial/moments.hpp"
#include "tracial/nets.hpp"
#include "tracial/parser.hpp"
#include "tracial/rational.hpp"
#include "tracial/terms.hpp"
