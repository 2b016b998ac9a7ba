// Umbrella header.
#pragma once

#include "scalelaw/core.hpp"
#include "scalelaw/csv.hpp"
#include "scalelaw/fit.hpp"
#include "scalelaw/model.hpp"
#include "scalelaw/regions.hpp"
#include "scalelaw/report.hpp"
#include "scalelaw/rng.hpp"
#include "scalelaw/synth.hpp"
