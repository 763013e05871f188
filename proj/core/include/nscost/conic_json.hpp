#pragma once

// JSON form of a ConicProblem:
//   {"blocks": [{"kind": "sdp"|"lp", "size": n}, ...],
//    "objective": [[block, row, col, value], ...],
//    "constraints": [{"coeffs": [[block, row, col, value], ...],
//                     "sense": "eq"|"le", "rhs": b}, ...],
//    "sense": "minimize"|"maximize"}

#include <filesystem>
#include <string>

#include "nscost/conic.hpp"

namespace nscost::conic {

std::string to_json(const ConicProblem& problem, int indent = -1);
ConicProblem from_json(const std::string& text);

void write_json(const ConicProblem& problem, const std::filesystem::path& path);
ConicProblem read_json(const std::filesystem::path& path);

}  // namespace nscost::conic
