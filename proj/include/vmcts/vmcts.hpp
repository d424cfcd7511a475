#pragma once

// Umbrella header for the whole library.

#include "vmcts/common.hpp"
#include "vmcts/config_file.hpp"
#include "vmcts/envs/bandit.hpp"
#include "vmcts/envs/env.hpp"
#include "vmcts/envs/go.hpp"
#include "vmcts/envs/gomoku.hpp"
#include "vmcts/envs/tictactoe.hpp"
#include "vmcts/eval/bandit.hpp"
#include "vmcts/eval/evaluator.hpp"
#include "vmcts/eval/go_heuristic.hpp"
#include "vmcts/eval/minimax.hpp"
#include "vmcts/eval/rollout.hpp"
#include "vmcts/io.hpp"
#include "vmcts/match.hpp"
#include "vmcts/outcome.hpp"
#include "vmcts/policy.hpp"
#include "vmcts/rng.hpp"
#include "vmcts/search.hpp"
#include "vmcts/theory.hpp"
#include "vmcts/tree.hpp"
#include "vmcts/virtual_expansion.hpp"
