#pragma once

#include "lensconf/cupmassey/dga.hpp"
#include "lensconf/cupmassey/dga_io.hpp"
#include "lensconf/cupmassey/massey.hpp"
