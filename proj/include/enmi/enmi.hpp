#pragma once

#include "enmi/binning.hpp"
#include "enmi/camera.hpp"
#include "enmi/config.hpp"
#include "enmi/grid.hpp"
#include "enmi/image.hpp"
#include "enmi/matcher.hpp"
#include "enmi/mi.hpp"
#include "enmi/montecarlo.hpp"
#include "enmi/noise.hpp"
#include "enmi/rng.hpp"
#include "enmi/variance_mask.hpp"
