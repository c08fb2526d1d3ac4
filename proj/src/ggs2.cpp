#include "walras/ggs2.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace walras::ggs2 {

std::optional<Value> common_cap(const Instance& instance)
{
  std::size_t const m = instance.item_count();
  if (m <= 1)
  {
    return std::nullopt;
  }
  Value const cap = instance.players.empty() ? 0 : instance.players.front()(Bundle::full(m));
  for (std::size_t i = 0; i < instance.player_count(); ++i)
  {
    auto const& v = instance.players[i];
    for (std::uint32_t mask = 1; mask < bundle_count(m); ++mask)
    {
      Bundle const s(mask);
      bool const bad = s.size() >= 2 ? v(s) != cap : v(s) > cap;
      if (bad)
      {
        throw NotGgs2Instance("player " + std::to_string(i) + " is not a (2," + std::to_string(cap) +
                              ") truncation");
      }
    }
  }
  return cap;
}

std::vector<Bundle> restricted_demand(const Valuation& v, const PriceVector& p)
{
  std::size_t const m = p.size();
  std::vector<Bundle> candidates{Bundle::empty()};
  for (Item x = 0; x < m; ++x)
  {
    candidates.push_back(Bundle::single(x));
    for (Item y = x + 1; y < m; ++y)
    {
      candidates.push_back(Bundle::single(x).with(y));
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](Bundle a, Bundle b) { return a.bits() < b.bits(); });

  Value best = 0;
  for (Bundle s : candidates)
  {
    best = std::max(best, utility(v, p, s));
  }
  std::vector<Bundle> out;
  for (Bundle s : candidates)
  {
    if (utility(v, p, s) == best)
    {
      out.push_back(s);
    }
  }
  return out;
}

PlayerClass classify_players(const Instance& instance, const PriceVector& p)
{
  common_cap(instance);
  PlayerClass out;
  for (std::size_t i = 0; i < instance.player_count(); ++i)
  {
    auto const demand = restricted_demand(instance.players[i], p);
    if (std::find(demand.begin(), demand.end(), Bundle::empty()) != demand.end())
    {
      out.empty_demand.push_back(i);
    }
    else if (std::any_of(demand.begin(), demand.end(), [](Bundle s) { return s.size() == 2; }))
    {
      out.pair_players.push_back(i);
    }
    else
    {
      out.small.push_back(i);
    }
  }
  return out;
}

MinItems min_items(const PriceVector& p)
{
  MinItems out;
  if (p.size() == 0)
  {
    return out;
  }
  auto const values = p.values();
  out.price = *std::min_element(values.begin(), values.end());
  for (Item j = 0; j < p.size(); ++j)
  {
    if (p[j] == out.price)
    {
      out.min = out.min.with(j);
    }
  }
  if (out.min.size() == 1 && p.size() > 1)
  {
    Item const x = out.min.first();
    std::optional<Value> second;
    for (Item j = 0; j < p.size(); ++j)
    {
      if (j != x && (!second || p[j] < *second))
      {
        second = p[j];
      }
    }
    for (Item j = 0; j < p.size(); ++j)
    {
      if (j != x && p[j] == *second)
      {
        out.min2 = out.min2.with(j);
      }
    }
  }
  return out;
}

DemandGraph demand_graph(const Instance& instance, const PriceVector& p, std::span<const std::size_t> players)
{
  DemandGraph g;
  g.players.assign(players.begin(), players.end());
  std::sort(g.players.begin(), g.players.end());
  g.item_count = instance.item_count();
  for (std::size_t i : g.players)
  {
    Bundle row;
    for (Bundle s : restricted_demand(instance.players.at(i), p))
    {
      if (s.size() == 1)
      {
        row = row | s;
      }
    }
    g.neighbors.push_back(row);
  }
  return g;
}

Instance induced_instance(const Instance& instance, std::span<const std::size_t> small)
{
  Instance out;
  out.items = instance.items;
  std::vector<Value> singles(instance.item_count());
  for (std::size_t i : small)
  {
    for (Item j = 0; j < instance.item_count(); ++j)
    {
      singles[j] = instance.players.at(i)(Bundle::single(j));
    }
    out.players.push_back(make_unit_demand(singles));
  }
  return out;
}

Bundle induced_gs_step(const Instance& instance, const PriceVector& p)
{
  auto const cls = classify_players(instance, p);
  auto const obstacle = over_demanded_set(induced_instance(instance, cls.small), p);
  if (obstacle.o_star.is_empty())
  {
    throw NoObstacle("small players admit a saturating matching");
  }
  return obstacle.o_star;
}

std::string to_string(Completion completion)
{
  switch (completion)
  {
  case Completion::matching:
    return "matching";
  case Completion::extended:
    return "extended";
  case Completion::searched:
    return "searched";
  case Completion::failed:
    return "failed";
  }
  return "unknown";
}

std::string to_string(PairStep rule)
{
  switch (rule)
  {
  case PairStep::min_items:
    return "min_items";
  case PairStep::obstacle_then_min:
    return "obstacle_then_min";
  }
  return "unknown";
}

namespace {

/// Depth-first choice of one option per player, disjoint, covering `must`.
class CoverSearch
{
public:
  CoverSearch(std::vector<std::vector<Bundle>> options, Bundle must)
    : options_(std::move(options))
    , must_(must)
    , chosen_(options_.size())
  {}

  bool run(Bundle used) { return visit(0, used); }
  const std::vector<Bundle>& chosen() const { return chosen_; }

private:
  bool visit(std::size_t k, Bundle used)
  {
    if (k == options_.size())
    {
      return must_.subset_of(used);
    }
    std::uint64_t const key = (static_cast<std::uint64_t>(k) << 32) | used.bits();
    if (dead_.count(key))
    {
      return false;
    }
    for (Bundle s : options_[k])
    {
      if ((s & used).is_empty() && visit(k + 1, used | s))
      {
        chosen_[k] = s;
        return true;
      }
    }
    dead_.insert(key);
    return false;
  }

  std::vector<std::vector<Bundle>> options_;
  Bundle must_;
  std::vector<Bundle> chosen_;
  std::unordered_set<std::uint64_t> dead_;
};

Bundle positive_items(const PriceVector& p)
{
  Bundle out;
  for (Item j = 0; j < p.size(); ++j)
  {
    if (p[j] > 0)
    {
      out = out.with(j);
    }
  }
  return out;
}

Allocation matching_allocation(const Instance& instance, const MatchingResult& matching, Bundle min)
{
  Allocation alloc;
  alloc.bundles.assign(instance.player_count(), Bundle::empty());
  for (auto const& [player, item] : matching.pairs)
  {
    alloc.bundles[player] = Bundle::single(item);
  }
  auto const spare = (matching.unmatched_items & min).items();
  std::size_t next = 0;
  for (std::size_t player : matching.unmatched_players)
  {
    alloc.bundles[player] = Bundle::single(spare.at(next)).with(spare.at(next + 1));
    next += 2;
  }
  return alloc;
}

Completion complete(const Instance& instance, const PriceVector& p, const PlayerClass& cls, Allocation& alloc)
{
  Bundle const must = positive_items(p);
  Bundle const uncovered = must - alloc.allocated();
  if (uncovered.is_empty())
  {
    return Completion::matching;
  }

  Bundle const free = Bundle::full(instance.item_count()) - alloc.allocated();
  std::vector<std::vector<Bundle>> options;
  for (std::size_t i : cls.empty_demand)
  {
    std::vector<Bundle> fits;
    for (Bundle s : restricted_demand(instance.players[i], p))
    {
      if (s.subset_of(free))
      {
        fits.push_back(s);
      }
    }
    options.push_back(std::move(fits));
  }
  CoverSearch extend(std::move(options), uncovered);
  if (extend.run(alloc.allocated()))
  {
    for (std::size_t k = 0; k < cls.empty_demand.size(); ++k)
    {
      alloc.bundles[cls.empty_demand[k]] = extend.chosen()[k];
    }
    return Completion::extended;
  }

  options.clear();
  for (auto const& v : instance.players)
  {
    options.push_back(restricted_demand(v, p));
  }
  CoverSearch full(std::move(options), must);
  if (full.run(Bundle::empty()))
  {
    alloc.bundles = full.chosen();
    return Completion::searched;
  }
  return Completion::failed;
}

std::vector<std::size_t> merged(std::vector<std::size_t> a, std::span<const std::size_t> b)
{
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

Ggs2Result ggs2_auction(const Instance& instance, std::uint64_t budget, PairStep rule)
{
  common_cap(instance);
  Ggs2Result out;
  auto& trace = out.trace;
  trace.algorithm = rule == PairStep::min_items ? "ggs2:min-items" : "ggs2";
  std::size_t const cap = auctions::iteration_cap(instance);
  std::size_t const m = instance.item_count();
  PriceVector p(m);
  std::optional<Allocation> alloc;
  PlayerClass cls;

  while (true)
  {
    cls = classify_players(instance, p);
    Bundle raise;
    Value f_value = 0;
    auto kind = auctions::StepKind::induced;

    bool hall_ok = true;
    if (!cls.small.empty())
    {
      try
      {
        max_matching(demand_graph(instance, p, cls.small), cls.small);
      }
      catch (const HallViolation&)
      {
        hall_ok = false;
      }
    }
    if (!hall_ok)
    {
      auto const obstacle = over_demanded_set(induced_instance(instance, cls.small), p);
      if (obstacle.o_star.is_empty())
      {
        throw std::logic_error("Hall violation without an induced obstacle");
      }
      if (!obstacle.unique)
      {
        ++trace.ambiguous_steps;
      }
      raise = obstacle.o_star;
      f_value = obstacle.f_value;
    }
    else
    {
      auto const players = merged(cls.small, cls.pair_players);
      auto const mins = min_items(p);
      auto const matching =
        max_matching(demand_graph(instance, p, players), cls.small, Bundle::full(m) - mins.min);
      auto const n_prime = static_cast<Value>(matching.unmatched_players.size());
      auto const m_prime = static_cast<Value>((matching.unmatched_items & mins.min).size());
      if (2 * n_prime <= m_prime)
      {
        trace.terminated = true;
        alloc = matching_allocation(instance, matching, mins.min);
        break;
      }
      raise = mins.min;
      f_value = 2 * n_prime - m_prime;
      kind = auctions::StepKind::min_items;
      if (rule == PairStep::obstacle_then_min)
      {
        auto const obstacle = over_demanded_set(instance, p);
        if (!obstacle.o_star.is_empty())
        {
          raise = obstacle.o_star;
          f_value = obstacle.f_value;
          kind = auctions::StepKind::obstacle;
          trace.ambiguous_steps += obstacle.unique ? 0 : 1;
        }
      }
    }

    if (trace.steps.size() >= cap)
    {
      trace.iteration_cap_hit = true;
      break;
    }
    trace.steps.push_back({trace.steps.size(), p, raise, lyapunov(instance, p), f_value, kind});
    p = p.raised(raise);
  }

  trace.final_price = p;
  Value const welfare = oracle::max_welfare(instance, budget).value;
  if (!alloc)
  {
    out.completion = Completion::failed;
    out.certificate.price = p;
    out.certificate.lyapunov = lyapunov(instance, p);
    out.certificate.max_welfare = welfare;
    return out;
  }
  out.completion = complete(instance, p, cls, *alloc);
  out.certificate = oracle::certify(instance, p, *alloc, welfare);
  return out;
}

GenDomReport gen_dom_check(const Instance& instance, const PriceVector& p, const PriceVector& p_star,
                           const Allocation& alloc)
{
  if (alloc.bundles.size() != instance.player_count() || p.size() != instance.item_count() ||
      p_star.size() != instance.item_count())
  {
    throw InvalidInput("allocation or price size does not match the instance");
  }
  GenDomReport out;
  out.dominated = p.dominated_by(p_star);
  out.envy_free = alloc.disjoint();
  Value welfare = 0;
  for (std::size_t i = 0; i < instance.player_count(); ++i)
  {
    auto const& v = instance.players[i];
    Bundle const s = alloc.bundles[i];
    welfare += v(s);
    if (utility(v, p, s) != max_utility(v, p))
    {
      out.envy_free = false;
    }
  }
  Bundle const unallocated = Bundle::full(instance.item_count()) - alloc.allocated();
  out.covers = (positive_items(p) & unallocated).is_empty();
  out.lyapunov = lyapunov(instance, p);
  out.via_allocation = welfare + p.of(unallocated);
  out.at_star_price = welfare + p_star.of(unallocated);
  out.lyapunov_star = lyapunov(instance, p_star);
  return out;
}

}  // namespace walras::ggs2
