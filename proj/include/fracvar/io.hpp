#pragma once

#include <string>

#include "fracvar/cdsolve.hpp"
#include "fracvar/domain.hpp"
#include "fracvar/report.hpp"

namespace fracvar {

/// Writes the field as CSV with header `t,x1,...,xd,value`, one row per
/// space-time node, LF endings, 17 significant digits (bit-exact round trip).
void write_field_csv(const std::string& path, const SpaceTimeField& field);

/// Reads a field CSV written by write_field_csv; reconstructs the uniform
/// grids from the node coordinates. Throws std::invalid_argument with a
/// line diagnostic on malformed input.
SpaceTimeField read_field_csv(const std::string& path);

std::string check_report_json(const CheckReport& rep);
std::string convergence_report_json(const ConvergenceReport& rep);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fracvar
