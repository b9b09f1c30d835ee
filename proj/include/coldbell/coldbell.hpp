// coldbell.hpp: umbrella header

#pragma once

#include "coldbell/analysis.hpp"
#include "coldbell/bell.hpp"
#include "coldbell/bogoliubov.hpp"
#include "coldbell/continuum.hpp"
#include "coldbell/exact.hpp"
#include "coldbell/model.hpp"
#include "coldbell/nelder_mead.hpp"
#include "coldbell/parallel.hpp"
#include "coldbell/qubit_state.hpp"
#include "coldbell/sweep.hpp"
