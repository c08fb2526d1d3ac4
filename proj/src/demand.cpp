#include "walras/demand.hpp"

#include <algorithm>
#include <limits>

namespace walras {

bool DemandReport::demands(Bundle s) const
{
  return std::binary_search(demand.begin(), demand.end(), s,
                            [](Bundle a, Bundle b) { return a.bits() < b.bits(); });
}

Value utility(const Valuation& v, const PriceVector& p, Bundle s) { return v(s) - p.of(s); }

Value max_utility(const Valuation& v, std::span<const Value> bundle_price)
{
  auto const table = v.table();
  Value best = 0;
  for (std::size_t s = 1; s < table.size(); ++s)
  {
    best = std::max(best, table[s] - bundle_price[s]);
  }
  return best;
}

Value max_utility(const Valuation& v, const PriceVector& p) { return max_utility(v, bundle_prices(p)); }

std::vector<Bundle> minimal_members(std::span<const Bundle> family, std::size_t m)
{
  // below[S]: some member is a strict subset of S.
  std::vector<char> member(bundle_count(m), 0);
  for (Bundle b : family)
  {
    member[b.bits()] = 1;
  }
  std::vector<char> below(bundle_count(m), 0);
  for (std::uint32_t s = 1; s < below.size(); ++s)
  {
    for (std::uint32_t rest = s; rest != 0; rest &= rest - 1)
    {
      std::uint32_t const sub = s & ~(rest & (~rest + 1));
      if (member[sub] || below[sub])
      {
        below[s] = 1;
        break;
      }
    }
  }
  std::vector<Bundle> out;
  for (Bundle b : family)
  {
    if (!below[b.bits()])
    {
      out.push_back(b);
    }
  }
  return out;
}

DemandReport demand_sets(const Valuation& v, const PriceVector& p, std::size_t player)
{
  auto const prices = bundle_prices(p);
  auto const table = v.table();
  DemandReport report;
  report.player = player;
  report.utility = max_utility(v, prices);
  for (std::uint32_t s = 0; s < table.size(); ++s)
  {
    if (table[s] - prices[s] == report.utility)
    {
      report.demand.emplace_back(s);
    }
  }
  report.minimal_demand = minimal_members(report.demand, v.item_count());
  return report;
}

Value f_i(const DemandReport& report, Bundle s)
{
  Value best = std::numeric_limits<Value>::max();
  for (Bundle d : report.minimal_demand)
  {
    best = std::min(best, static_cast<Value>((d & s).size()));
  }
  return best;
}

Value f_i(const Valuation& v, const PriceVector& p, Bundle s) { return f_i(demand_sets(v, p), s); }

Value f(const Instance& instance, const PriceVector& p, Bundle s)
{
  Value total = -static_cast<Value>(s.size());
  for (auto const& v : instance.players)
  {
    total += f_i(v, p, s);
  }
  return total;
}

ObstacleReport over_demanded_set(std::span<const DemandReport> reports, std::size_t m)
{
  std::size_t const count = bundle_count(m);
  std::vector<Value> fval(count);
  Value best = 0;
  for (std::uint32_t s = 0; s < count; ++s)
  {
    Bundle const b{s};
    Value total = -static_cast<Value>(b.size());
    for (auto const& r : reports)
    {
      total += f_i(r, b);
    }
    fval[s] = total;
    best = std::max(best, total);
  }

  ObstacleReport out;
  out.per_player_f.assign(reports.size(), 0);
  if (best <= 0)
  {
    return out;
  }

  std::vector<Bundle> maximizers;
  for (std::uint32_t s = 0; s < count; ++s)
  {
    if (fval[s] == best)
    {
      maximizers.emplace_back(s);
    }
  }
  auto const minimal = minimal_members(maximizers, m);
  out.o_star = *std::min_element(minimal.begin(), minimal.end(), lex_less);
  out.unique = minimal.size() == 1;
  out.f_value = best;
  for (std::size_t i = 0; i < reports.size(); ++i)
  {
    out.per_player_f[i] = f_i(reports[i], out.o_star);
  }
  return out;
}

ObstacleReport over_demanded_set(const Instance& instance, const PriceVector& p)
{
  std::vector<DemandReport> reports;
  reports.reserve(instance.player_count());
  for (std::size_t i = 0; i < instance.player_count(); ++i)
  {
    reports.push_back(demand_sets(instance.players[i], p, i));
  }
  return over_demanded_set(reports, instance.item_count());
}

Value lyapunov(const Instance& instance, const PriceVector& p)
{
  auto const prices = bundle_prices(p);
  Value total = p.total();
  for (auto const& v : instance.players)
  {
    total += max_utility(v, prices);
  }
  return total;
}

MinimizerReport minimal_minimizer(const Instance& instance, const PriceVector& p)
{
  std::size_t const count = bundle_count(instance.item_count());
  MinimizerReport best;
  bool have = false;
  for (std::uint32_t s = 0; s < count; ++s)
  {
    Bundle const b{s};
    Value const value = lyapunov(instance, p.raised(b));
    if (!have || value < best.lyapunov)
    {
      best = {b, value, false};
      have = true;
    }
    else if (value == best.lyapunov)
    {
      if (b.size() < best.set.size())
      {
        best = {b, value, false};
      }
      else if (b.size() == best.set.size())
      {
        best.tie_break_used = true;
        if (lex_less(b, best.set))
        {
          best.set = b;
        }
      }
    }
  }
  return best;
}

}  // namespace walras
