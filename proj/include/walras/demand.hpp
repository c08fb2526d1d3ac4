#pragma once

#include "walras/model.hpp"

#include <vector>

namespace walras {

/// Demand of one player at one price: every utility-maximizing bundle, the
/// inclusion-minimal ones among them, and the maximum utility.
struct DemandReport
{
  std::size_t player = 0;
  std::vector<Bundle> demand;          // ascending mask order
  std::vector<Bundle> minimal_demand;  // ascending mask order
  Value utility = 0;

  bool demands(Bundle s) const;
};

/// The over-demanded set at a price and its per-player intersection counts.
struct ObstacleReport
{
  Bundle o_star;
  Value f_value = 0;
  std::vector<Value> per_player_f;
  bool unique = true;
};

/// Minimum of L(p + 1_S) over all S, with the chosen minimizer.
struct MinimizerReport
{
  Bundle set;
  Value lyapunov = 0;
  bool tie_break_used = false;
};

/// v(S) - p(S).
Value utility(const Valuation& v, const PriceVector& p, Bundle s);

/// max over S of v(S) - p(S); never negative because S = {} gives 0.
Value max_utility(const Valuation& v, const PriceVector& p);
Value max_utility(const Valuation& v, std::span<const Value> bundle_price);

DemandReport demand_sets(const Valuation& v, const PriceVector& p, std::size_t player = 0);

/// Inclusion-minimal members of a family of equal-utility bundles.
std::vector<Bundle> minimal_members(std::span<const Bundle> family, std::size_t m);

/// min over D in D*(p) of |D & S|.
Value f_i(const DemandReport& report, Bundle s);
Value f_i(const Valuation& v, const PriceVector& p, Bundle s);

/// sum over players of f_i(S), minus |S|.
Value f(const Instance& instance, const PriceVector& p, Bundle s);

/// Inclusion-minimal maximizer of f; empty when f <= 0 everywhere.
/// Ties between incomparable minimal maximizers go to the lex-smallest and
/// clear the `unique` flag.
ObstacleReport over_demanded_set(const Instance& instance, const PriceVector& p);
ObstacleReport over_demanded_set(std::span<const DemandReport> reports, std::size_t m);

/// Sum of player utilities plus the total price.
Value lyapunov(const Instance& instance, const PriceVector& p);

/// Ausubel's raise set: minimizes L(p + 1_S), then |S|, then lex order.
MinimizerReport minimal_minimizer(const Instance& instance, const PriceVector& p);

}  // namespace walras
