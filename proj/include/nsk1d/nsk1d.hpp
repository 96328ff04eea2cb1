#pragma once

// Umbrella header.

#include "nsk1d/config.hpp"
#include "nsk1d/constitutive.hpp"
#include "nsk1d/diagnostics.hpp"
#include "nsk1d/dynamics.hpp"
#include "nsk1d/ensemble.hpp"
#include "nsk1d/field.hpp"
#include "nsk1d/fft.hpp"
#include "nsk1d/integrator.hpp"
#include "nsk1d/io.hpp"
#include "nsk1d/noise.hpp"
#include "nsk1d/params.hpp"
