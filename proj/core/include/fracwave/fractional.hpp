// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// The fractional order s in (0,1) together with the two derived constants
// that appear throughout the extension method:
//
//   alpha = 1 - 2s            (exponent of the degenerate weight y^alpha)
//   d_s   = 2^alpha * Gamma(1-s) / Gamma(s)
//
// d_s is the normalization linking the weighted normal trace of the
// extended harmonic function to the fractional Laplacian of its boundary
// trace; at s = 1/2 it equals 1.
#pragma once

namespace fracwave {

struct FractionalOrder {
  double s = 0.5;      // fractional power of the Laplacian, in (0,1)
  double alpha = 0.0;  // 1 - 2s, in (-1,1)
  double ds = 1.0;     // 2^alpha * Gamma(1-s) / Gamma(s)
};

// Validates s in (0,1) (throws std::domain_error otherwise) and fills in
// the derived constants.
FractionalOrder make_fractional_order(double s);

}  // namespace fracwave
