#pragma once

#include <span>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

/// Raised when no peak clears the prominence threshold.
class NoLineFound : public Error {
 public:
  NoLineFound() : Error("no line found") {}
};

struct LineMetrics {
  std::size_t peak_count = 0;
  std::vector<double> centers;  ///< ascending
  std::vector<double> fwhm;
  std::vector<double> prominence;
  double threshold = 0.0;

  /// Index of the most prominent peak.
  std::size_t main_peak() const;
};

/// Peaks of a spectrum sampled on a strictly increasing grid (>= 20 points).
/// Detection runs on a 3-point moving average; a peak counts when its
/// prominence exceeds max(5 x robust noise, 1% of the spectrum range).
/// Widths are full widths at half prominence, linearly interpolated.
LineMetrics line_metrics(std::span<const double> detunings, std::span<const double> p_e);

}  // namespace zeno
