#pragma once

#include <string>

namespace tetra {

/// printf-style %.{digits}g rendering; non-finite values become "nan", "inf" or "-inf".
std::string format_number(double x, int digits = 17);

}  // namespace tetra
