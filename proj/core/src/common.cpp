#include "compass/common.hpp"

#include <cstdio>

namespace compass {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace compass
