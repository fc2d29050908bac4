#pragma once

#include "pushrank/types.hpp"
#include "pushrank/graph.hpp"
#include "pushrank/pagerank.hpp"
#include "pushrank/partition.hpp"
#include "pushrank/reference.hpp"
#include "pushrank/ifp.hpp"
#include "pushrank/sync_sim.hpp"
#include "pushrank/metrics.hpp"
#include "pushrank/io.hpp"
#include "pushrank/synth.hpp"
#include "pushrank/bench.hpp"
