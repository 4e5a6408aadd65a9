// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "onebit/airlink.hpp"
#include "onebit/blmmse.hpp"
#include "onebit/channel.hpp"
#include "onebit/constellation.hpp"
#include "onebit/detectors.hpp"
#include "onebit/expectation.hpp"
#include "onebit/kernels.hpp"
#include "onebit/pilots.hpp"
#include "onebit/rng.hpp"
#include "onebit/types.hpp"
