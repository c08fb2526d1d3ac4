#include "walras/matching.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>

namespace walras::ggs2 {

HallViolation::HallViolation(std::vector<std::size_t> players, Bundle neighborhood)
  : Error("Hall condition fails: " + std::to_string(players.size()) + " players share " +
          std::to_string(neighborhood.size()) + " items")
  , players_(std::move(players))
  , neighborhood_(neighborhood)
{}

namespace {

constexpr std::size_t none = static_cast<std::size_t>(-1);

class Matcher
{
public:
  explicit Matcher(const DemandGraph& graph)
    : graph_(graph)
    , item_mate_(graph.item_count, none)
    , player_mate_(graph.players.size(), none)
  {}

  /// Plain augmenting path from a free player; never unmatches anyone.
  bool augment_from_player(std::size_t u)
  {
    seen_items_ = Bundle{};
    return player_dfs(u);
  }

  /// Path from a free item that ends at a free player or at a matched item
  /// outside `locked`, which is then released.
  bool augment_from_item(Item x, Bundle locked)
  {
    seen_players_.assign(player_mate_.size(), 0);
    return item_dfs(x, locked);
  }

  Bundle seen_items() const { return seen_items_; }
  std::size_t player_mate(std::size_t u) const { return player_mate_[u]; }
  std::size_t item_mate(Item x) const { return item_mate_[x]; }

private:
  bool player_dfs(std::size_t u)
  {
    for (Item x : graph_.neighbors[u].items())
    {
      if (seen_items_.contains(x))
      {
        continue;
      }
      seen_items_ = seen_items_.with(x);
      if (item_mate_[x] == none || player_dfs(item_mate_[x]))
      {
        item_mate_[x] = u;
        player_mate_[u] = x;
        return true;
      }
    }
    return false;
  }

  bool item_dfs(Item x, Bundle locked)
  {
    for (std::size_t u = 0; u < player_mate_.size(); ++u)
    {
      if (!graph_.neighbors[u].contains(x) || seen_players_[u])
      {
        continue;
      }
      seen_players_[u] = 1;
      std::size_t const held = player_mate_[u];
      bool ok = held == none || !locked.contains(held);
      if (!ok)
      {
        ok = item_dfs(held, locked);
      }
      if (ok)
      {
        if (held != none && item_mate_[held] == u)
        {
          item_mate_[held] = none;
        }
        item_mate_[x] = u;
        player_mate_[u] = x;
        return true;
      }
    }
    return false;
  }

  const DemandGraph& graph_;
  std::vector<std::size_t> item_mate_;
  std::vector<std::size_t> player_mate_;
  Bundle seen_items_;
  std::vector<char> seen_players_;
};

}  // namespace

MatchingResult max_matching(const DemandGraph& graph, std::span<const std::size_t> must_match, Bundle prefer_items)
{
  std::size_t const count = graph.players.size();
  if (graph.neighbors.size() != count)
  {
    throw InvalidInput("demand graph needs one neighborhood per player");
  }
  auto local = [&](std::size_t player) {
    auto it = std::lower_bound(graph.players.begin(), graph.players.end(), player);
    if (it == graph.players.end() || *it != player)
    {
      throw InvalidInput("must-match player is not in the graph");
    }
    return static_cast<std::size_t>(it - graph.players.begin());
  };

  Matcher matcher(graph);
  std::vector<std::size_t> must;
  for (std::size_t player : must_match)
  {
    must.push_back(local(player));
  }
  std::sort(must.begin(), must.end());

  for (std::size_t u : must)
  {
    if (!matcher.augment_from_player(u))
    {
      // Players reachable by alternating paths all sit on visited items.
      std::vector<std::size_t> witness{graph.players[u]};
      for (Item x : matcher.seen_items().items())
      {
        witness.push_back(graph.players[matcher.item_mate(x)]);
      }
      std::sort(witness.begin(), witness.end());
      throw HallViolation(std::move(witness), matcher.seen_items());
    }
  }

  Bundle locked;
  for (Item x : prefer_items.items())
  {
    if (x >= graph.item_count)
    {
      continue;
    }
    if (matcher.item_mate(x) != none || matcher.augment_from_item(x, locked))
    {
      locked = locked.with(x);
    }
  }

  bool grew = true;
  while (grew)
  {
    grew = false;
    for (std::size_t u = 0; u < count; ++u)
    {
      if (matcher.player_mate(u) == none && matcher.augment_from_player(u))
      {
        grew = true;
      }
    }
  }

  MatchingResult out;
  out.unmatched_items = Bundle::full(graph.item_count);
  for (std::size_t u = 0; u < count; ++u)
  {
    std::size_t const x = matcher.player_mate(u);
    if (x == none)
    {
      out.unmatched_players.push_back(graph.players[u]);
    }
    else
    {
      out.pairs.emplace_back(graph.players[u], x);
      out.unmatched_items = out.unmatched_items.without(x);
    }
  }

  // Koenig: Z = vertices reachable from free players by alternating paths;
  // the cover is (players outside Z) plus (items inside Z).
  std::vector<char> reached(count, 0);
  Bundle reached_items;
  std::deque<std::size_t> queue;
  for (std::size_t u = 0; u < count; ++u)
  {
    if (matcher.player_mate(u) == none)
    {
      reached[u] = 1;
      queue.push_back(u);
    }
  }
  while (!queue.empty())
  {
    std::size_t const u = queue.front();
    queue.pop_front();
    for (Item x : graph.neighbors[u].items())
    {
      if (reached_items.contains(x))
      {
        continue;
      }
      reached_items = reached_items.with(x);
      std::size_t const mate = matcher.item_mate(x);
      if (mate != none && !reached[mate])
      {
        reached[mate] = 1;
        queue.push_back(mate);
      }
    }
  }
  for (std::size_t u = 0; u < count; ++u)
  {
    if (!reached[u])
    {
      out.cover_players.push_back(graph.players[u]);
    }
  }
  out.cover_items = reached_items;
  if (out.cover_players.size() + out.cover_items.size() != out.size())
  {
    throw std::logic_error("vertex cover size differs from matching size");
  }
  return out;
}

}  // namespace walras::ggs2
