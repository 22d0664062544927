#pragma once

// Stochastic restricted biased regression estimators under misspecification:
// canonical form, exact moments, MSEM superiority tests and the Monte Carlo
// engine. Header-only; see README for the CLI.

#include "srbe/analysis.hpp"
#include "srbe/canonical.hpp"
#include "srbe/common.hpp"
#include "srbe/comparison.hpp"
#include "srbe/datasets.hpp"
#include "srbe/estimators.hpp"
#include "srbe/io.hpp"
#include "srbe/predictors.hpp"
#include "srbe/rng.hpp"
#include "srbe/simulation.hpp"
