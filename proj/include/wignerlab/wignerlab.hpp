#pragma once

#include "wignerlab/errors.hpp"
#include "wignerlab/random.hpp"
#include "wignerlab/operator_space.hpp"
#include "wignerlab/superop.hpp"
#include "wignerlab/canonical_maps.hpp"
#include "wignerlab/preserver.hpp"
#include "wignerlab/wigner.hpp"
#include "wignerlab/ksequence.hpp"
#include "wignerlab/search.hpp"
#include "wignerlab/map_io.hpp"
#include "wignerlab/report.hpp"
