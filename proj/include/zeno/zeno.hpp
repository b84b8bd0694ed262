#pragma once

#include "zeno/core.hpp"
#include "zeno/schedule.hpp"
#include "zeno/oracle.hpp"
#include "zeno/engine.hpp"
#include "zeno/analytics.hpp"
