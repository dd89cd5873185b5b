#pragma once

#include "qrabi/algebra.hpp"
#include "qrabi/core.hpp"
#include "qrabi/model.hpp"
#include "qrabi/propagator.hpp"
#include "qrabi/rwa.hpp"
#include "qrabi/specfun.hpp"
