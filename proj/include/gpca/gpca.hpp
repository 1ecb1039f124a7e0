#pragma once

// Umbrella header for the solver modules. The benchmark harness lives under
// gpca/bench/ and is included separately.

#include "gpca/errors.hpp"
#include "gpca/gkpca.hpp"
#include "gpca/kernel.hpp"
#include "gpca/objective.hpp"
#include "gpca/oracle.hpp"
#include "gpca/pca.hpp"
