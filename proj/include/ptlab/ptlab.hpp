#pragma once

// Convenience include for the whole library.

#include "ptlab/complex_gamma.hpp"
#include "ptlab/correlation.hpp"
#include "ptlab/errors.hpp"
#include "ptlab/grid.hpp"
#include "ptlab/potential.hpp"
#include "ptlab/scattering.hpp"
#include "ptlab/schrodinger.hpp"
#include "ptlab/spectrum.hpp"
#include "ptlab/wavefunction.hpp"
