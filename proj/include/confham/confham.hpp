#pragma once
// Convenience include for the whole library.

#include "confham/assembly.hpp"
#include "confham/config.hpp"
#include "confham/distributional.hpp"
#include "confham/driver.hpp"
#include "confham/dynamics.hpp"
#include "confham/errors.hpp"
#include "confham/extensions.hpp"
#include "confham/grid.hpp"
#include "confham/potential.hpp"
#include "confham/sampling.hpp"
#include "confham/spectral.hpp"
#include "confham/traces.hpp"
