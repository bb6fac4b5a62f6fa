#pragma once

#include "nadyn/asymptotics.hpp"
#include "nadyn/csv.hpp"
#include "nadyn/expansive.hpp"
#include "nadyn/measure.hpp"
#include "nadyn/metric_space.hpp"
#include "nadyn/parallel.hpp"
#include "nadyn/point_set.hpp"
#include "nadyn/rational.hpp"
#include "nadyn/rng.hpp"
#include "nadyn/shadowing.hpp"
#include "nadyn/stability.hpp"
#include "nadyn/system.hpp"
#include "nadyn/zoo.hpp"
