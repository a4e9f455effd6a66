#pragma once

#include "snakes/search/alphabeta.hpp"
#include "snakes/search/astar.hpp"
#include "snakes/search/budget.hpp"
#include "snakes/search/distance.hpp"
#include "snakes/search/evaluate.hpp"
#include "snakes/search/mcts.hpp"
#include "snakes/search/minimax.hpp"
#include "snakes/search/voronoi.hpp"
