#pragma once

#include "predmon/csv.hpp"
#include "predmon/errors.hpp"
#include "predmon/metrics.hpp"
#include "predmon/monitor.hpp"
#include "predmon/numdiff.hpp"
#include "predmon/pipeline.hpp"
#include "predmon/sim.hpp"
#include "predmon/taylor.hpp"
#include "predmon/ttc.hpp"
