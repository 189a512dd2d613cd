#pragma once

#include "bonacci/errors.hpp"
#include "bonacci/algebra.hpp"
#include "bonacci/substitution.hpp"
#include "bonacci/matrix.hpp"
#include "bonacci/levels.hpp"
#include "bonacci/measure.hpp"
#include "bonacci/witness.hpp"
#include "bonacci/golden.hpp"
#include "bonacci/analysis.hpp"
#include "bonacci/report.hpp"
