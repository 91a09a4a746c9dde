// Umbrella header.
#pragma once

#include "pathsub/dynamics.hpp"
#include "pathsub/enumeration.hpp"
#include "pathsub/exact.hpp"
#include "pathsub/fat_cantor.hpp"
#include "pathsub/functions.hpp"
#include "pathsub/plot.hpp"
#include "pathsub/splitting_json.hpp"
#include "pathsub/splitting_set.hpp"
