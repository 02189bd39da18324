#pragma once

#include "tripod/types.hpp"
#include "tripod/master_equation.hpp"
#include "tripod/steady_state.hpp"
#include "tripod/evolution.hpp"
#include "tripod/dressed.hpp"
#include "tripod/parallel.hpp"
#include "tripod/spectra.hpp"
#include "tripod/geometry.hpp"
#include "tripod/config.hpp"
#include "tripod/io.hpp"
#include "tripod/cli.hpp"
