#pragma once

#include "attractor.hpp"
#include "base_partition.hpp"
#include "bounds.hpp"
#include "branches.hpp"
#include "engine.hpp"
#include "graph.hpp"
#include "interval.hpp"
#include "io.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "presets.hpp"
#include "random_spec.hpp"
#include "rational.hpp"
#include "rect.hpp"
