#pragma once

#include <string>
#include <string_view>

#include "tsdantzig/process_sim.hpp"

namespace tsdantzig {

/// JSON provenance document: dimensions, beta, decay constant, innovation
/// tag, seed, mean and every coefficient matrix (row-major). An infinite
/// beta is written as the string "inf".
std::string model_to_json(const LinearProcessModel& model, int indent = -1);

/// Inverse of model_to_json; the decoded model is validated.
LinearProcessModel model_from_json(std::string_view text);

}  // namespace tsdantzig
