// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "swipt/channel.hpp"
#include "swipt/config.hpp"
#include "swipt/metrics.hpp"
#include "swipt/optimizer.hpp"
#include "swipt/region.hpp"
#include "swipt/rng.hpp"
#include "swipt/selection.hpp"
