#pragma once

#include "qnkit/networks/bard_schweitzer.hpp"
#include "qnkit/networks/bounds.hpp"
#include "qnkit/networks/convolution.hpp"
#include "qnkit/networks/model.hpp"
#include "qnkit/networks/multiclass.hpp"
#include "qnkit/networks/mva.hpp"
#include "qnkit/networks/open.hpp"
#include "qnkit/networks/solution.hpp"
#include "qnkit/networks/visits.hpp"
