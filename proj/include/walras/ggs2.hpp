#pragma once

#include "walras/auctions.hpp"
#include "walras/demand.hpp"
#include "walras/matching.hpp"
#include "walras/model.hpp"
#include "walras/oracle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace walras::ggs2 {

class NotGgs2Instance : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

/// The small players already admit a saturating matching.
class NoObstacle : public Error
{
public:
  using Error::Error;
};

/// The common value M of every bundle of size two or more. Empty when there
/// is at most one item. Throws NotGgs2Instance on any other shape.
std::optional<Value> common_cap(const Instance& instance);

struct PlayerClass
{
  std::vector<std::size_t> small;         // only singletons among size <= 2
  std::vector<std::size_t> pair_players;  // some pair is demanded
  std::vector<std::size_t> empty_demand;  // the empty bundle is demanded
};

/// Demand restricted to bundles of size at most two, ascending mask order.
std::vector<Bundle> restricted_demand(const Valuation& v, const PriceVector& p);

PlayerClass classify_players(const Instance& instance, const PriceVector& p);

struct MinItems
{
  Bundle min;
  Bundle min2;  // cheapest items besides the single MIN item; empty otherwise
  Value price = 0;
};

MinItems min_items(const PriceVector& p);

/// Edges (i, x) with {x} demanded by i, for the listed players.
DemandGraph demand_graph(const Instance& instance, const PriceVector& p, std::span<const std::size_t> players);

/// Small players as unit-demand bidders with values v_i({j}).
Instance induced_instance(const Instance& instance, std::span<const std::size_t> small);

/// Over-demanded set of the induced instance at p. Throws NoObstacle when it
/// is empty.
Bundle induced_gs_step(const Instance& instance, const PriceVector& p);

enum class Completion
{
  matching,  // matched singletons plus MIN pairs
  extended,  // zero-utility bundles added for players demanding nothing
  searched,  // exhaustive search over size <= 2 demands
  failed,
};

std::string to_string(Completion completion);

struct Ggs2Result
{
  auctions::AuctionTrace trace;
  oracle::WalrasianCertificate certificate;
  Completion completion = Completion::failed;
};

/// What to raise when the small players are matched but the pair players
/// cannot all be served from the cheapest items.
enum class PairStep
{
  min_items,          // every item of minimum price
  obstacle_then_min,  // the full over-demanded set if nonempty, else every item of minimum price
};

std::string to_string(PairStep rule);

/// Runs the matching auction from p = 0. Stops at the cap n * m * Vmax with
/// iteration_cap_hit set. Throws NotGgs2Instance.
///
/// With PairStep::min_items a single raise of the cheapest items can pass the
/// minimal Walrasian price and end at a price with unsold positive-price
/// items; obstacle_then_min avoids both on every instance tried.
Ggs2Result ggs2_auction(const Instance& instance, std::uint64_t budget = oracle::default_budget,
                        PairStep rule = PairStep::obstacle_then_min);

struct GenDomReport
{
  bool dominated = false;  // p <= p_star
  bool envy_free = false;
  bool covers = false;     // every positive-price item allocated
  Value lyapunov = 0;      // L(p)
  Value via_allocation = 0;  // sum v_i(S_i) + p(unallocated)
  Value at_star_price = 0;   // sum v_i(S_i) + p_star(unallocated)
  Value lyapunov_star = 0;   // L(p_star)

  bool chain_holds() const
  {
    return lyapunov == via_allocation && via_allocation <= at_star_price && at_star_price <= lyapunov_star;
  }
  bool ok() const { return dominated && envy_free && chain_holds() && lyapunov == lyapunov_star; }
};

/// L(p) = sum v_i(S_i) + p(U) <= sum v_i(S_i) + p*(U) <= L(p*), with U the
/// unallocated items; equality makes p a dual optimum.
GenDomReport gen_dom_check(const Instance& instance, const PriceVector& p, const PriceVector& p_star,
                           const Allocation& alloc);

}  // namespace walras::ggs2
