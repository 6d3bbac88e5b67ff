#pragma once

#include "qnkit/stations/general.hpp"
#include "qnkit/stations/markovian.hpp"
#include "qnkit/stations/metrics.hpp"
