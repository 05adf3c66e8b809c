#pragma once

#include "coneiter/analysis.hpp"
#include "coneiter/cone_space.hpp"
#include "coneiter/errors.hpp"
#include "coneiter/harness.hpp"
#include "coneiter/io.hpp"
#include "coneiter/iterate.hpp"
#include "coneiter/operators.hpp"
#include "coneiter/schedule.hpp"
#include "coneiter/svg.hpp"
#include "coneiter/vector.hpp"
