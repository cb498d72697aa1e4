#pragma once

// Disk format for fields and weights: a short text header (magic "BRTHR1",
// geometry, symmetry, mode list) followed by a raw little-endian float64
// payload. Round trips are bit exact on any host; big-endian hosts swap on
// the way in and out.

#include <string>

#include "breather/potential.hpp"
#include "breather/time_field.hpp"

namespace breather {

void write_field(const std::string& path, const TimeField& field);
TimeField read_field(const std::string& path);

void write_weight(const std::string& path, const Potential& weight);
Potential read_weight(const std::string& path);

}  // namespace breather
