#pragma once

// Brute-force reference computations used only by the tests. They share no
// code with the library beyond the value types.

#include "walras/matching.hpp"
#include "walras/model.hpp"

#include <optional>
#include <vector>

namespace walras::testing {

Value ref_utility(const Valuation& v, const PriceVector& p, Bundle s);
Value ref_max_utility(const Valuation& v, const PriceVector& p);
std::vector<Bundle> ref_demand(const Valuation& v, const PriceVector& p);
/// Members with no strict subset in the family.
std::vector<Bundle> ref_minimal(const std::vector<Bundle>& family);
Value ref_f_i(const Valuation& v, const PriceVector& p, Bundle s);
Value ref_f(const Instance& instance, const PriceVector& p, Bundle s);

struct RefObstacle
{
  Value best = 0;
  std::vector<Bundle> minimal_maximizers;  // empty when best <= 0
};
RefObstacle ref_obstacle(const Instance& instance, const PriceVector& p);

Value ref_lyapunov(const Instance& instance, const PriceVector& p);

/// Subset dynamic program: best[i][S] over the first i players.
Value ref_welfare(const Instance& instance);

/// Envy-free allocation, optionally also covering positive prices, found by
/// enumerating every item-to-player-or-nobody map.
std::optional<Allocation> ref_envy_free(const Instance& instance, const PriceVector& p, bool cover);

/// Coordinatewise-minimal prices in [0, bound]^m with L(p) = W*.
std::vector<PriceVector> ref_minimal_walrasian(const Instance& instance, Value bound);

/// Maximum matching size by trying every injective assignment.
std::size_t ref_matching_size(const ggs2::DemandGraph& g);

}  // namespace walras::testing
