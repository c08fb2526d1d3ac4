#pragma once

#include "walras/demand.hpp"
#include "walras/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace walras::auctions {

class PolicyViolation : public Error
{
public:
  using Error::Error;
};

enum class StepKind
{
  obstacle,     // raise a subset of the over-demanded set
  minimizer,    // raise Ausubel's minimal minimizer
  induced,      // raise the induced obstacle of the small players
  min_items,    // raise every item of minimum price
};

std::string to_string(StepKind kind);

struct AuctionStep
{
  std::size_t t = 0;
  PriceVector price_before;
  Bundle raised;
  Value lyapunov_before = 0;
  Value f_value = 0;
  StepKind kind = StepKind::obstacle;
};

struct AuctionTrace
{
  std::string algorithm;
  std::vector<AuctionStep> steps;
  PriceVector final_price;
  bool terminated = false;
  bool iteration_cap_hit = false;
  /// Steps whose raise set needed a tie-break (never expected on GS input).
  std::size_t ambiguous_steps = 0;
};

/// What a step policy sees: the current price and its obstacle.
struct PolicyContext
{
  std::size_t t;
  const PriceVector& price;
  const ObstacleReport& obstacle;
};

/// Picks a nonempty subset of the obstacle to raise.
using StepPolicy = std::function<Bundle(const PolicyContext&)>;

StepPolicy full_obstacle_policy();
StepPolicy min_index_policy();
/// A uniformly random nonempty subset of the obstacle, reproducible per seed.
StepPolicy random_subset_policy(std::uint64_t seed);

/// n * m * max value, at least 1.
std::size_t iteration_cap(const Instance& instance);

/// From p = 0 raise the policy's subset of the obstacle by one until the
/// obstacle is empty. Throws PolicyViolation on an empty or foreign subset.
AuctionTrace run_with_policy(const Instance& instance, const StepPolicy& policy, std::string name = "policy");

/// Raises the whole over-demanded set each step.
AuctionTrace gul_stacchetti(const Instance& instance);

/// Raises the minimal minimizer of L(p + 1_S) each step.
AuctionTrace ausubel_ascending(const Instance& instance);

/// Raises only the smallest-index item of the over-demanded set each step.
AuctionTrace fine_auction(const Instance& instance);

/// Index of the first step whose price is not dominated by p_star; the final
/// price counts as step steps.size(). Empty when every price is dominated.
std::optional<std::size_t> monitor_domination(const AuctionTrace& trace, const PriceVector& p_star);

}  // namespace walras::auctions
