#pragma once

// Umbrella header: causal rule discovery from observational tabular data by
// association rule mining plus matched retrospective-cohort testing.

#include "causalmine/bitset.hpp"
#include "causalmine/cohort.hpp"
#include "causalmine/csv.hpp"
#include "causalmine/dataset.hpp"
#include "causalmine/engine.hpp"
#include "causalmine/errors.hpp"
#include "causalmine/miner.hpp"
#include "causalmine/prefix_tree.hpp"
#include "causalmine/report_io.hpp"
#include "causalmine/rng.hpp"
#include "causalmine/stats.hpp"
#include "causalmine/synthetic.hpp"
