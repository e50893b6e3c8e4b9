#pragma once

#include "ball_table.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "hash.hpp"
#include "hll.hpp"
#include "hyperball.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "minhash.hpp"
#include "numeric.hpp"
#include "oracle.hpp"
#include "sketch.hpp"
#include "timing.hpp"
