#pragma once

#include "lensconf/simplicial/cochain.hpp"
#include "lensconf/simplicial/complement.hpp"
#include "lensconf/simplicial/complex.hpp"
#include "lensconf/simplicial/complex_io.hpp"
#include "lensconf/simplicial/constructors.hpp"
#include "lensconf/simplicial/maps.hpp"
#include "lensconf/simplicial/models.hpp"
#include "lensconf/simplicial/quotient.hpp"
#include "lensconf/simplicial/subdivision.hpp"
