#pragma once

#include <span>

namespace qsllab {

/// Composite Simpson rule over equally spaced samples.
/// Throws Error{BadGrid} unless values.size() is odd and >= 3.
double simpson(std::span<const double> values, double spacing);

}  // namespace qsllab
