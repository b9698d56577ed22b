#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cxr::selfcheck {

// Outcome of one property suite. `detail` summarises the coverage on a pass
// and pinpoints the first violated property on a failure.
struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Algebraic ties between the overlap losses, checked on random soft and
// binary map pairs:
//   - Tversky with balanced false-positive/false-negative weights equals the
//     Dice loss at twice the smoothing term, for every smoothing value;
//   - the Jaccard loss equals 1 - d/(2-d) of the Dice overlap d when
//     smoothing is off;
//   - a binary map scored against itself is a zero-loss match for the whole
//     overlap family, and cross-entropy bottoms out at its probability-clamp
//     floor (hence the separate, looser tol_zero).
SuiteResult loss_identities(int pairs = 1000, double tol_identity = 1e-9,
                            double tol_zero = 1e-6, uint64_t seed = 7);

// Closed-form gradients of every loss kind against central finite
// differences at interior points (scores kept away from 0 and 1 so the
// cross-entropy clamp stays inactive).
SuiteResult loss_gradients(int probes_per_loss = 25, double step = 1e-4, double tol = 1e-4,
                           uint64_t seed = 11);

// Contour-distance engine against an independent brute-force recomputation
// (erosion-based boundary walk, all-pairs hypot), plus its exact invariants:
// zero self-distance, argument symmetry, linear pixel-pitch scaling.
SuiteResult macd_oracle(int pairs = 500, double tol = 1e-9, uint64_t seed = 13);

// Every suite above at default settings, in a fixed order.
std::vector<SuiteResult> run_all();

}  // namespace cxr::selfcheck
