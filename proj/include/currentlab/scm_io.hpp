#pragma once

// SCM text format:
//
//   SCM 1
//   ambient <N>
//   dim <k>
//   vertices <V>
//   <V lines of N decimals>
//   simplices <C>
//   <C lines: mult v0 ... vk [norm <id>]>
//
// Items are whitespace-delimited, '#' starts a comment, blank lines are
// ignored.

#include "currentlab/current.hpp"

#include <iosfwd>
#include <string>

namespace currentlab {

SimplicialCurrent read_scm(std::istream& in);
SimplicialCurrent read_scm(const std::string& path);

void write_scm(const SimplicialCurrent& T, std::ostream& out);
void write_scm(const SimplicialCurrent& T, const std::string& path);

}  // namespace currentlab
