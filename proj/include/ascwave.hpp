#pragma once

#include "ascwave/bounds.hpp"
#include "ascwave/core.hpp"
#include "ascwave/counting.hpp"
#include "ascwave/errors.hpp"
#include "ascwave/io.hpp"
#include "ascwave/randcolor.hpp"
#include "ascwave/solver.hpp"
