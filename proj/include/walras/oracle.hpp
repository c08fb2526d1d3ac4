#pragma once

#include "walras/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace walras::oracle {

inline constexpr std::uint64_t default_budget = 50'000'000;

/// Optimal welfare over all integral allocations.
struct WelfareResult
{
  Value value = 0;
  Allocation allocation;
};

/// A price, an allocation, and the checks that make the pair Walrasian.
struct WalrasianCertificate
{
  PriceVector price;
  Allocation allocation;
  bool envy_free = false;
  bool coverage = false;     // every positive-price item is allocated
  bool bm_equality = false;  // L(price) equals the optimal welfare
  Value lyapunov = 0;
  Value max_welfare = 0;

  bool valid() const { return envy_free && coverage && bm_equality; }
};

struct MinimalPriceResult
{
  std::optional<PriceVector> price;  // lex-smallest minimal Walrasian price
  std::vector<PriceVector> minimal;  // every coordinatewise-minimal one found
  bool unique = false;
  Value min_lyapunov = 0;            // over the scanned grid
  Value max_welfare = 0;
  std::uint64_t scanned = 0;
};

/// Enumerates all (n+1)^m item-to-player-or-nobody maps.
/// Throws BudgetExceeded when that count exceeds the budget.
WelfareResult max_welfare(const Instance& instance, std::uint64_t budget = default_budget);

/// First allocation (players in index order, demand bundles in mask order)
/// giving every player a demanded bundle, or none.
std::optional<Allocation> envy_free_exists(const Instance& instance, const PriceVector& p);

/// Searches for an envy-free allocation that also covers every
/// positive-price item, then fills the welfare equality. Throws
/// std::logic_error if a covering allocation exists while L(p) differs from
/// the optimal welfare.
std::optional<WalrasianCertificate> is_walrasian(const Instance& instance, const PriceVector& p,
                                                 std::uint64_t budget = default_budget);

/// Certificate fields for a caller-supplied allocation at p.
WalrasianCertificate certify(const Instance& instance, const PriceVector& p, const Allocation& allocation,
                             Value max_welfare);

/// Upper bound on any Walrasian price of item j: the largest marginal value
/// v(S) - v(S - j) over players and bundles.
std::vector<Value> marginal_price_bounds(const Instance& instance);

/// Scans every integer price with p(j) <= min(bound, marginal bound of j)
/// and returns the coordinatewise-minimal Walrasian ones.
MinimalPriceResult minimal_walrasian_price(const Instance& instance, Value bound,
                                           std::uint64_t budget = default_budget);

}  // namespace walras::oracle
