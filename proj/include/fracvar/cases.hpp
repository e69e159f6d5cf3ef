#pragma once

#include <string>
#include <vector>

#include "fracvar/cdsolve.hpp"

namespace fracvar {

/// Ids of the registered manufactured cases.
std::vector<std::string> case_ids();

/// Looks up a registered case; throws std::invalid_argument for unknown ids.
ManufacturedCase get_case(const std::string& id);

}  // namespace fracvar
