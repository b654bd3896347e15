#pragma once

#include "lensconf/confspaces/formulas.hpp"
#include "lensconf/confspaces/pipeline.hpp"
#include "lensconf/confspaces/quaternion.hpp"
