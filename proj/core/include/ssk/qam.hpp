#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ssk/errors.hpp"

namespace ssk {

/// Gray-mapped rectangular QAM, unit average symbol energy. For k bits the
/// in-phase axis carries ceil(k/2) gray-coded PAM bits and the quadrature
/// axis the rest, giving square constellations for even k and rectangular
/// ones (e.g. 8-QAM as 4x2) for odd k. points[b] is the point whose bit
/// label is the k-bit natural-binary value b.
struct QamConstellation {
  int bits_per_symbol = 0;
  std::vector<std::complex<double>> points;

  static QamConstellation make(int bits_per_symbol);
};

}  // namespace ssk
