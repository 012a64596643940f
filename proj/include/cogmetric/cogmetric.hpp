#pragma once

// Umbrella header for the engagement effectiveness analytics library.

#include "cogmetric/adapters.hpp"
#include "cogmetric/analysis.hpp"
#include "cogmetric/csv.hpp"
#include "cogmetric/errors.hpp"
#include "cogmetric/ingest.hpp"
#include "cogmetric/metric.hpp"
#include "cogmetric/monitor.hpp"
#include "cogmetric/serialize.hpp"
#include "cogmetric/timestamp.hpp"
#include "cogmetric/types.hpp"
