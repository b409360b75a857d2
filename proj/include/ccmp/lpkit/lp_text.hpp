#pragma once

#include <ostream>
#include <string>

#include "ccmp/lpkit/linear_program.hpp"

namespace ccmp::lpkit {

// Human-readable dump of a program, grammar in docs/lp_text_format.md.
void write_lp_text(std::ostream& out, const LinearProgram& lp,
                   const std::vector<char>* integral = nullptr);
std::string lp_text(const LinearProgram& lp);
std::string lp_text(const MipProblem& mip);

}  // namespace ccmp::lpkit
