#pragma once

#include <iosfwd>
#include <vector>

#include "wplab/variation.hpp"

namespace wplab {

/// Settings for the acceptance battery. The truncation default keeps the
/// Poincare series cheap enough for CI; the library default of 6 is the
/// production setting.
struct AcceptanceOptions {
    int refine = 3;
    int q_truncation = 4;
    double kernel_kappa = 1e-10;
    SolverConfig solver;
};

/// Run the ten acceptance criteria and return one aggregated result per
/// criterion (worst offending value against the stated tolerance). When
/// `log` is non-null, progress and per-criterion details stream to it.
std::vector<CheckResult> acceptance_suite(const AcceptanceOptions& opts,
                                          std::ostream* log = nullptr);

}  // namespace wplab
