#pragma once

#include "cspkit/bank_io.hpp"
#include "cspkit/classify.hpp"
#include "cspkit/covariance.hpp"
#include "cspkit/csp.hpp"
#include "cspkit/data.hpp"
#include "cspkit/error.hpp"
#include "cspkit/harness.hpp"
#include "cspkit/spdgeom.hpp"
#include "cspkit/stiefel.hpp"
#include "cspkit/types.hpp"
