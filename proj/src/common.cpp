#include "cxr/common.hpp"

namespace cxr {

const char* err_name(Err e) {
  switch (e) {
    case Err::malformed_file: return "malformed-file";
    case Err::depth_violation: return "depth-violation";
    case Err::incomplete_ground_truth: return "incomplete-ground-truth";
    case Err::format: return "format";
    case Err::split_integrity: return "split-integrity";
    case Err::degenerate_input: return "degenerate-input";
    case Err::weight_load: return "weight-load";
    case Err::integrity: return "integrity";
    case Err::contract: return "contract";
    case Err::undefined_measure: return "undefined-measure";
    case Err::empty_structure: return "empty-structure";
    case Err::config: return "config";
    case Err::non_finite_loss: return "non-finite-loss";
    case Err::fold_leakage: return "fold-leakage";
    case Err::io: return "io";
  }
  return "error";
}

}  // namespace cxr
