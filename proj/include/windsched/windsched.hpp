#pragma once

// Convenience include for the whole library.

#include "windsched/config.hpp"
#include "windsched/gaussian.hpp"
#include "windsched/harness.hpp"
#include "windsched/market.hpp"
#include "windsched/models.hpp"
#include "windsched/nonpersistent.hpp"
#include "windsched/persistent.hpp"
#include "windsched/policy_io.hpp"
#include "windsched/quadrature.hpp"
#include "windsched/rng.hpp"
