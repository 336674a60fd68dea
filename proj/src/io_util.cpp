#include "hbart/io_util.hpp"

#include <cstdio>

namespace hbart {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace hbart
