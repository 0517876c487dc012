// cpphase.hpp
// Umbrella header.

#pragma once

#include "channels.hpp"
#include "geometry.hpp"
#include "interferometry.hpp"
#include "numerics.hpp"
#include "states.hpp"
