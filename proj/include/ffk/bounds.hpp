#pragma once

#include <string>

#include "ffk/error.hpp"

namespace ffk {

/// Frame bounds 0 < A <= B < inf. The optimal pair is the extremal
/// eigenvalues of the frame operator.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;

  static FrameBounds checked(double a, double b, ErrorCode on_failure) {
    if (!(a > 0.0) || !(a <= b))
      throw Error(on_failure, "invalid frame bounds (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    return {a, b};
  }

  /// |B - A| <= rel * B
  bool tight(double rel) const { return upper - lower <= rel * upper; }
};

/// Lower and upper redundancy: inf and sup of the redundancy function over the unit sphere.
struct RedundancyRange {
  double lower = 0.0;
  double upper = 0.0;

  bool uniform(double rel) const { return upper - lower <= rel * upper; }
};

}  // namespace ffk
