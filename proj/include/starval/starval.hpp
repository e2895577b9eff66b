#pragma once

// Umbrella header for the whole library.

#include "starval/cover_tools.hpp"
#include "starval/errors.hpp"
#include "starval/geometry.hpp"
#include "starval/jordan.hpp"
#include "starval/rng.hpp"
#include "starval/serialize.hpp"
#include "starval/sphere_grid.hpp"
#include "starval/star_body.hpp"
#include "starval/theta.hpp"
#include "starval/valuation.hpp"
