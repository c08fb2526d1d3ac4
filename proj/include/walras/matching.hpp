#pragma once

#include "walras/model.hpp"

#include <span>
#include <utility>
#include <vector>

namespace walras::ggs2 {

/// Players on the left, items on the right, an edge (i, x) when {x} is in
/// player i's demand.
struct DemandGraph
{
  std::vector<std::size_t> players;  // global player indices, ascending
  std::size_t item_count = 0;
  std::vector<Bundle> neighbors;     // parallel to players
};

struct MatchingResult
{
  std::vector<std::pair<std::size_t, Item>> pairs;  // (player, item), by player
  std::vector<std::size_t> unmatched_players;
  Bundle unmatched_items;
  /// Koenig cover: same size as the matching, touches every edge.
  std::vector<std::size_t> cover_players;
  Bundle cover_items;

  std::size_t size() const { return pairs.size(); }
};

/// A set of players whose joint neighborhood is smaller than the set.
class HallViolation : public Error
{
public:
  HallViolation(std::vector<std::size_t> players, Bundle neighborhood);

  const std::vector<std::size_t>& players() const { return players_; }
  Bundle neighborhood() const { return neighborhood_; }

private:
  std::vector<std::size_t> players_;
  Bundle neighborhood_;
};

/// Maximum matching that saturates `must_match`, and among those covers as
/// many `prefer_items` as possible. Vertices are processed in index order.
/// Throws HallViolation when `must_match` cannot be saturated.
MatchingResult max_matching(const DemandGraph& graph, std::span<const std::size_t> must_match,
                            Bundle prefer_items = {});

}  // namespace walras::ggs2
