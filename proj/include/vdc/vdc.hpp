// vdc.hpp
// Umbrella header.

#pragma once

#include "vdc/core_state.hpp"
#include "vdc/duality_metrics.hpp"
#include "vdc/interferometer.hpp"
#include "vdc/pipeline.hpp"
#include "vdc/random.hpp"
#include "vdc/report.hpp"
#include "vdc/scenario.hpp"
#include "vdc/tomography.hpp"
