#pragma once

#include "field.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "polysim.hpp"
#include "oracle.hpp"
#include "ldt.hpp"
#include "rsc.hpp"
#include "zksc.hpp"
#include "osat.hpp"
#include "osat_sim.hpp"
#include "compose.hpp"
#include "harness/cli.hpp"
