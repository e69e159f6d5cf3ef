#pragma once

#include <vector>

#include "fracvar/frac1d.hpp"
#include "fracvar/report.hpp"

namespace fracvar {

struct LemmaSuiteResult {
    std::vector<CheckReport> checks;
    bool pass = false;
};

/// Runs the full lemma suite at base resolution n: composition trends
/// (Caputo-Caputo and RL-Caputo), the Riewe mixed-composition negative
/// control, integration by parts, the Caputo-RL boundary relation, the
/// endpoint regularity trend, the GL semigroup identity, and the div-grad
/// and Green-Riemann field lemmas up to dimension `dim`. Trend checks need
/// n >= 64; below that they are marked "insufficient_levels" and fail.
LemmaSuiteResult run_lemma_suite(FracOrder alpha, int n, int dim);

}  // namespace fracvar
