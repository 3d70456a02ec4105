#pragma once

#include "config.hpp"
#include "convolution.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "flux.hpp"
#include "freeenergy.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "pressure.hpp"
#include "quadrature.hpp"
#include "reconstruct.hpp"
#include "runner.hpp"
#include "scenarios.hpp"
#include "scheme.hpp"
#include "timeint.hpp"
