#pragma once

#include <iosfwd>
#include <string>

#include "ccmp/model/instance.hpp"

namespace ccmp::gen {

// Instance files are JSON documents with a fixed field order; see
// docs/instance_format.md. Doubles are written in shortest round-trip form,
// so read(write(inst)) == inst bit for bit. Infinite bounds are the strings
// "inf" and "-inf".
void write_instance(const CcmpInstance& inst, std::ostream& out);
void write_instance(const CcmpInstance& inst, const std::string& path);
std::string instance_text(const CcmpInstance& inst);

// Throws SchemaError naming the offending field ("epsilon",
// "scenarios[2].h[0]") or "line N" for malformed text. Checks structure and
// dimensions only; use validate_instance for the semantic checks.
CcmpInstance parse_instance(const std::string& text);
CcmpInstance read_instance(const std::string& path);

}  // namespace ccmp::gen
