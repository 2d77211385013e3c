#include "qsllab/quadrature.hpp"

#include <string>

#include "qsllab/error.hpp"

namespace qsllab {

double simpson(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0) {
    throw Error(ErrorKind::BadGrid,
                "Simpson rule needs an odd sample count >= 3, got " + std::to_string(n));
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    (k % 2 == 1 ? odd : even) += values[k];
  }
  return spacing / 3.0 * (values.front() + 4.0 * odd + 2.0 * even + values.back());
}

}  // namespace qsllab
