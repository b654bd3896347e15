#pragma once

#include "lensconf/dualcalc/massey.hpp"
#include "lensconf/dualcalc/membranes.hpp"
#include "lensconf/dualcalc/patch.hpp"
#include "lensconf/dualcalc/transversality.hpp"
