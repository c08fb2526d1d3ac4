#pragma once

#include "walras/model.hpp"

namespace walras::catalog {

/// Truncation of unit_demand(2, 2, 4) at k = 2, M = 4 over items a, b, c.
/// Satisfies single improvement at every integer price yet is not GS.
Valuation ggs2_not_gs_valuation();
Instance ggs2_not_gs_instance();

/// n players over 2n - 2 items with M = 2. The first n - 2 players value
/// every item at 1; the last two value the final item at 2 and the rest at
/// 1. At zero prices nothing is over-demanded yet no envy-free allocation
/// exists. Needs n >= 3.
Instance no_obstacle_instance(std::size_t n = 5);

/// Two unit-demand bidders who both value the single item x at 5.
Instance two_bidders_one_item();

}  // namespace walras::catalog
