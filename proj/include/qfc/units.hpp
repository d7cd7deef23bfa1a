#pragma once

#include <cmath>

namespace qfc {

inline double db_to_transmission(double db) { return std::pow(10.0, -db / 10.0); }

inline double transmission_to_db(double transmission) {
  return -10.0 * std::log10(transmission);
}

inline constexpr double kPicosecondsPerSecond = 1e12;

}  // namespace qfc
