#pragma once

#include "qnkit/markov/absorption.hpp"
#include "qnkit/markov/birth_death.hpp"
#include "qnkit/markov/occupancy.hpp"
#include "qnkit/markov/passage.hpp"
#include "qnkit/markov/types.hpp"
