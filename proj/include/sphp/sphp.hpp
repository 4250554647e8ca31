#pragma once

#include "sphp/constants.hpp"
#include "sphp/errors.hpp"
#include "sphp/keyvalue.hpp"
#include "sphp/materials.hpp"
#include "sphp/dispersion.hpp"
#include "sphp/quantization.hpp"
#include "sphp/spin_coupling.hpp"
#include "sphp/dynamics.hpp"
#include "sphp/table.hpp"
