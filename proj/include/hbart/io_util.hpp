#pragma once

#include <string>

namespace hbart {

// shortest text form that round-trips a double exactly
std::string format_double(double v);

}  // namespace hbart
