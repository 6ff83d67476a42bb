#pragma once

#include "idmps/error.hpp"
#include "idmps/tensor.hpp"
#include "idmps/schmidt.hpp"
#include "idmps/mps.hpp"
#include "idmps/canonical.hpp"
#include "idmps/construct.hpp"
#include "idmps/hermite.hpp"
#include "idmps/oscillator.hpp"
