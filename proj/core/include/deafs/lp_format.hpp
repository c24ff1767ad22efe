#pragma once

#include <iosfwd>
#include <string>

#include "deafs/model.hpp"

namespace deafs::milp {

/// Writes `model` in the CPLEX LP text format. Quadratic terms are expanded
/// into the bracketed quadratic objective section.
void write_lp(std::ostream& out, const MilpModel& model);
void write_lp_file(const std::string& path, const MilpModel& model);

}  // namespace deafs::milp
