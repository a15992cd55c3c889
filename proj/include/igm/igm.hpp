#pragma once

// Umbrella header for the interaction-graph machines library.

#include "igm/automata.hpp"
#include "igm/cells.hpp"
#include "igm/encodings.hpp"
#include "igm/errors.hpp"
#include "igm/execution.hpp"
#include "igm/graphings.hpp"
#include "igm/machines.hpp"
#include "igm/measurement.hpp"
#include "igm/microcosm.hpp"
#include "igm/rational.hpp"
#include "igm/space.hpp"
#include "igm/words.hpp"
