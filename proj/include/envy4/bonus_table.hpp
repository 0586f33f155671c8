#pragma once

#include <array>

#include "envy4/ratio.hpp"

namespace envy4 {

/// Surplus of each non-cutter over the best piece he sees elsewhere, for the
/// first four core runs of one cutter. Rows are runs, columns the three
/// non-cutters in ascending id order. The cutter's column is identically zero
/// and omitted.
using BonusTable = std::array<std::array<Ratio, 3>, 4>;

}  // namespace envy4
