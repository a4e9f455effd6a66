#pragma once

#include "snakes/agents.hpp"
#include "snakes/engine.hpp"
#include "snakes/geometry.hpp"
#include "snakes/replay.hpp"
#include "snakes/rng.hpp"
#include "snakes/search.hpp"
#include "snakes/tournament.hpp"
