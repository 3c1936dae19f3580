#pragma once

// Umbrella header for the library modules (the CLI and the acceptance battery are separate).

#include "graphon/constructions.hpp"
#include "graphon/cutnorm.hpp"
#include "graphon/graph.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/independence.hpp"
#include "graphon/io.hpp"
#include "graphon/kernel.hpp"
#include "graphon/rational.hpp"
#include "graphon/sampler.hpp"
#include "graphon/spectral.hpp"
