#pragma once

#include "plantmarket/config.hpp"
#include "plantmarket/encoding.hpp"
#include "plantmarket/errors.hpp"
#include "plantmarket/fitness.hpp"
#include "plantmarket/ga.hpp"
#include "plantmarket/model.hpp"
#include "plantmarket/pso.hpp"
#include "plantmarket/report.hpp"
#include "plantmarket/rng.hpp"
#include "plantmarket/scenarios.hpp"
#include "plantmarket/stats.hpp"
