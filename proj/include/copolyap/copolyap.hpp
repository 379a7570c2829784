#pragma once

#include "copolyap/comp.hpp"
#include "copolyap/cone.hpp"
#include "copolyap/json_io.hpp"
#include "copolyap/linear_form.hpp"
#include "copolyap/lp.hpp"
#include "copolyap/poly.hpp"
#include "copolyap/report.hpp"
#include "copolyap/sim.hpp"
#include "copolyap/simplex.hpp"
#include "copolyap/synth_core.hpp"
#include "copolyap/synth_disc.hpp"
#include "copolyap/synth_polya.hpp"
#include "copolyap/verify.hpp"
