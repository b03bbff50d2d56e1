#pragma once

#include "morse_causal/barrier.hpp"
#include "morse_causal/chart.hpp"
#include "morse_causal/common.hpp"
#include "morse_causal/geodesic.hpp"
#include "morse_causal/io.hpp"
#include "morse_causal/parallel.hpp"
#include "morse_causal/projection.hpp"
#include "morse_causal/reach.hpp"
#include "morse_causal/regions.hpp"
#include "morse_causal/threshold.hpp"
