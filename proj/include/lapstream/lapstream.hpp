#pragma once

#include "lapstream/bench.hpp"
#include "lapstream/centrality.hpp"
#include "lapstream/error.hpp"
#include "lapstream/graph.hpp"
#include "lapstream/incremental.hpp"
#include "lapstream/ingest.hpp"
#include "lapstream/synthetic.hpp"
