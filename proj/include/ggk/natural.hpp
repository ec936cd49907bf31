#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ggk {
  using natural = boost::multiprecision::cpp_int;
}
