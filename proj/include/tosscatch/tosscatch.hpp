#pragma once

// Umbrella header.

#include "tosscatch/engine.hpp"
#include "tosscatch/errors.hpp"
#include "tosscatch/geometry.hpp"
#include "tosscatch/io.hpp"
#include "tosscatch/maps.hpp"
#include "tosscatch/rng.hpp"
#include "tosscatch/spectrum.hpp"
#include "tosscatch/structures.hpp"

namespace tosscatch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tosscatch
