#pragma once

#include "brw/analysis.hpp"
#include "brw/configuration.hpp"
#include "brw/errors.hpp"
#include "brw/genealogy.hpp"
#include "brw/mean_dynamics.hpp"
#include "brw/model.hpp"
#include "brw/rng.hpp"
#include "brw/serialize.hpp"
#include "brw/simulation.hpp"
#include "brw/spectral.hpp"
