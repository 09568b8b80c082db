#pragma once

#include "core.hpp"
#include "multiindex.hpp"
#include "linalg.hpp"
#include "exterior.hpp"
#include "torus_period.hpp"
#include "siegel.hpp"
#include "kaehler.hpp"
#include "bundle.hpp"
#include "random.hpp"
#include "io.hpp"
#include "verify.hpp"
