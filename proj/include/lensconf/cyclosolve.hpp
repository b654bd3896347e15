#pragma once

#include "lensconf/cyclosolve/affine.hpp"
#include "lensconf/cyclosolve/congruence.hpp"
#include "lensconf/cyclosolve/interval.hpp"
#include "lensconf/cyclosolve/polyhedron.hpp"
#include "lensconf/cyclosolve/tangent.hpp"
