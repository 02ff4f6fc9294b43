#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace omcool::detail {

inline void require(bool ok, std::string_view what) {
  if (!ok) throw std::invalid_argument(std::string(what));
}

inline double finite(double v, std::string_view name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
  return v;
}

inline double positive(double v, std::string_view name) {
  if (!std::isfinite(v) || v <= 0.0)
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  return v;
}

inline double nonnegative(double v, std::string_view name) {
  if (!std::isfinite(v) || v < 0.0)
    throw std::invalid_argument(std::string(name) + " must be non-negative and finite");
  return v;
}

}  // namespace omcool::detail
