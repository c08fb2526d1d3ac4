#include "walras/structure.hpp"

#include "walras/demand.hpp"

#include <algorithm>
#include <unordered_set>

namespace walras::structure {

namespace {

bool mask_less(Bundle a, Bundle b) { return a.bits() < b.bits(); }

std::vector<Value> utilities(const Valuation& v, const PriceVector& p)
{
  auto const prices = bundle_prices(p);
  auto const table = v.table();
  std::vector<Value> u(table.size());
  for (std::size_t s = 0; s < table.size(); ++s)
  {
    u[s] = table[s] - prices[s];
  }
  return u;
}

/// Integer grid [0, bound]^m in lex order (first item most significant).
class Grid
{
public:
  Grid(std::size_t m, Value bound)
    : m_(m)
    , bound_(bound)
  {
    size_ = 1;
    for (std::size_t j = 0; j < m_; ++j)
    {
      size_ *= static_cast<std::uint64_t>(bound_ + 1);
    }
  }

  std::uint64_t size() const { return size_; }

  PriceVector point(std::uint64_t index) const
  {
    std::vector<Value> digits(m_);
    for (std::size_t j = m_; j-- > 0;)
    {
      digits[j] = static_cast<Value>(index % static_cast<std::uint64_t>(bound_ + 1));
      index /= static_cast<std::uint64_t>(bound_ + 1);
    }
    return PriceVector{std::move(digits)};
  }

  std::uint64_t index(const PriceVector& p) const
  {
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < m_; ++j)
    {
      out = out * static_cast<std::uint64_t>(bound_ + 1) + static_cast<std::uint64_t>(p[j]);
    }
    return out;
  }

private:
  std::size_t m_;
  Value bound_;
  std::uint64_t size_ = 1;
};

Value default_bound(const Valuation& v) { return 2 * v.max_value() + 1; }

void check_bound(Value bound)
{
  if (bound < 0)
  {
    throw InvalidInput("grid bound must be nonnegative");
  }
}

/// True when some member of D(q) contains t, for every t, given D(q).
std::vector<char> down_closure(std::span<const Bundle> family, std::size_t m)
{
  std::vector<char> down(bundle_count(m), 0);
  for (Bundle b : family)
  {
    down[b.bits()] = 1;
  }
  for (std::uint32_t s = static_cast<std::uint32_t>(down.size()); s-- > 1;)
  {
    if (!down[s])
    {
      continue;
    }
    for (std::uint32_t rest = s; rest != 0; rest &= rest - 1)
    {
      down[s & ~(rest & (~rest + 1))] = 1;
    }
  }
  return down;
}

std::optional<Item> excluded_item(Bundle kept, std::span<const Bundle> family)
{
  for (Item j : kept.items())
  {
    bool const somewhere = std::any_of(family.begin(), family.end(), [j](Bundle b) { return b.contains(j); });
    if (!somewhere)
    {
      return j;
    }
  }
  return std::nullopt;
}

Bundle equal_prices(const PriceVector& p, const PriceVector& q)
{
  Bundle eq;
  for (Item j = 0; j < p.size(); ++j)
  {
    if (p[j] == q[j])
    {
      eq = eq.with(j);
    }
  }
  return eq;
}

}  // namespace

std::string MatroidViolation::describe() const
{
  switch (kind)
  {
  case Kind::empty_family:
    return "empty family";
  case Kind::unequal_size:
    return "bases of unequal cardinality";
  case Kind::no_exchange:
    return "basis exchange fails for item " + std::to_string(removed);
  }
  return "unknown violation";
}

std::string to_string(TransitionKind kind)
{
  switch (kind)
  {
  case TransitionKind::restriction:
    return "restriction";
  case TransitionKind::deletion:
    return "deletion";
  case TransitionKind::augmentation:
    return "augmentation";
  }
  return "unknown";
}

Valuation scaled(const Valuation& v, Value factor)
{
  std::vector<Value> table(v.table().begin(), v.table().end());
  for (auto& x : table)
  {
    x *= factor;
  }
  return Valuation::from_table(v.item_count(), std::move(table));
}

std::optional<Bundle> check_single_improvement(const Valuation& v, const PriceVector& p)
{
  std::size_t const m = v.item_count();
  auto const u = utilities(v, p);
  Value const best = *std::max_element(u.begin(), u.end());
  for (std::uint32_t s = 0; s < u.size(); ++s)
  {
    if (u[s] == best)
    {
      continue;
    }
    Bundle const b{s};
    bool improved = false;
    // T = S - i + j with i in S or none, j outside S or none.
    for (std::size_t i = 0; i <= m && !improved; ++i)
    {
      if (i < m && !b.contains(i))
      {
        continue;
      }
      Bundle const removed = i < m ? b.without(i) : b;
      for (std::size_t j = 0; j <= m; ++j)
      {
        if (j < m && b.contains(j))
        {
          continue;
        }
        Bundle const t = j < m ? removed.with(j) : removed;
        if (u[t.bits()] > u[s])
        {
          improved = true;
          break;
        }
      }
    }
    if (!improved)
    {
      return b;
    }
  }
  return std::nullopt;
}

std::optional<SiWitness> check_si_on_grid(const Valuation& v, std::optional<Value> bound, std::uint64_t budget)
{
  Value const b = bound.value_or(default_bound(v));
  check_bound(b);
  Valuation const doubled = scaled(v, 2);
  Grid const grid(v.item_count(), b);
  if (grid.size() > budget)
  {
    throw GridTooLarge("single-improvement grid has more points than the budget");
  }
  for (std::uint64_t index = 0; index < grid.size(); ++index)
  {
    PriceVector const p = grid.point(index);
    if (auto s = check_single_improvement(doubled, p))
    {
      return SiWitness{p, *s, 2};
    }
  }
  return std::nullopt;
}

std::optional<GsWitness> check_gs_pair(const Valuation& v, const PriceVector& p, const PriceVector& q)
{
  if (!p.dominated_by(q))
  {
    throw InvalidInput("gross-substitute pair needs p <= q");
  }
  auto const at_p = demand_sets(v, p);
  auto const at_q = demand_sets(v, q);
  auto const down = down_closure(at_q.demand, v.item_count());
  Bundle const eq = equal_prices(p, q);
  for (Bundle s : at_p.demand)
  {
    Bundle const kept = s & eq;
    if (!down[kept.bits()])
    {
      return GsWitness{p, q, s, kept, excluded_item(kept, at_q.demand), 1};
    }
  }
  return std::nullopt;
}

std::optional<GsWitness> check_gs_on_grid(const Valuation& v, std::optional<Value> bound, std::uint64_t budget)
{
  Value const b = bound.value_or(default_bound(v));
  check_bound(b);
  std::size_t const m = v.item_count();
  auto const width = static_cast<std::uint64_t>(b + 1);
  std::uint64_t const per_item_pairs = width * (width + 1) / 2;
  std::uint64_t pairs = 1;
  for (std::size_t j = 0; j < m; ++j)
  {
    if (pairs > budget / per_item_pairs)
    {
      throw GridTooLarge("gross-substitute grid has more price pairs than the budget of " + std::to_string(budget));
    }
    pairs *= per_item_pairs;
  }

  Valuation const doubled = scaled(v, 2);
  Grid const grid(m, b);
  std::vector<std::vector<Bundle>> demand(grid.size());
  std::vector<std::vector<char>> down(grid.size());
  for (std::uint64_t index = 0; index < grid.size(); ++index)
  {
    demand[index] = demand_sets(doubled, grid.point(index)).demand;
    down[index] = down_closure(demand[index], m);
  }

  for (std::uint64_t pi = 0; pi < grid.size(); ++pi)
  {
    PriceVector const p = grid.point(pi);
    // Walk q over the box [p, b] in lex order.
    std::vector<Value> digits(p.values().begin(), p.values().end());
    while (true)
    {
      PriceVector const q{digits};
      auto const qi = grid.index(q);
      Bundle const eq = equal_prices(p, q);
      for (Bundle s : demand[pi])
      {
        Bundle const kept = s & eq;
        if (!down[qi][kept.bits()])
        {
          return GsWitness{p, q, s, kept, excluded_item(kept, demand[qi]), 2};
        }
      }
      std::size_t j = m;
      bool advanced = false;
      while (j-- > 0)
      {
        if (digits[j] < b)
        {
          ++digits[j];
          advanced = true;
          break;
        }
        digits[j] = p[j];
      }
      if (!advanced)
      {
        break;
      }
    }
  }
  return std::nullopt;
}

std::optional<MatroidViolation> check_matroid_bases(std::span<const Bundle> family)
{
  if (family.empty())
  {
    return MatroidViolation{MatroidViolation::Kind::empty_family, {}, {}, 0};
  }
  for (Bundle b : family)
  {
    if (b.size() != family.front().size())
    {
      return MatroidViolation{MatroidViolation::Kind::unequal_size, family.front(), b, 0};
    }
  }
  std::unordered_set<std::uint32_t> members;
  for (Bundle b : family)
  {
    members.insert(b.bits());
  }
  for (Bundle b1 : family)
  {
    for (Bundle b2 : family)
    {
      for (Item j2 : (b2 - b1).items())
      {
        bool found = false;
        for (Item j1 : (b1 - b2).items())
        {
          if (members.contains(b2.without(j2).with(j1).bits()))
          {
            found = true;
            break;
          }
        }
        if (!found)
        {
          return MatroidViolation{MatroidViolation::Kind::no_exchange, b1, b2, j2};
        }
      }
    }
  }
  return std::nullopt;
}

TransitionClass classify_transition(const Valuation& v, const PriceVector& p, Item j)
{
  if (j >= v.item_count())
  {
    throw InvalidInput("item out of range");
  }
  TransitionClass out;
  out.before = demand_sets(v, p).minimal_demand;
  out.after = demand_sets(v, p.raised(Bundle::single(j))).minimal_demand;

  bool const some_avoid = std::any_of(out.before.begin(), out.before.end(), [j](Bundle b) { return !b.contains(j); });
  if (some_avoid)
  {
    std::vector<Bundle> expected;
    std::copy_if(out.before.begin(), out.before.end(), std::back_inserter(expected),
                 [j](Bundle b) { return !b.contains(j); });
    if (expected != out.after)
    {
      throw UnclassifiableTransition("a base avoids the raised item but D* is not the restriction");
    }
    out.kind = TransitionKind::restriction;
    return out;
  }

  std::vector<Bundle> deleted;
  for (Bundle b : out.before)
  {
    deleted.push_back(b.without(j));
  }
  std::sort(deleted.begin(), deleted.end(), mask_less);
  if (deleted == out.after)
  {
    out.kind = TransitionKind::deletion;
    return out;
  }

  if (!std::includes(out.after.begin(), out.after.end(), out.before.begin(), out.before.end(), mask_less))
  {
    throw UnclassifiableTransition("old bases were lost without a deletion");
  }
  std::set_difference(out.after.begin(), out.after.end(), out.before.begin(), out.before.end(),
                      std::back_inserter(out.new_bases), mask_less);
  for (Bundle added : out.new_bases)
  {
    // added = B + j' - j with j' != j, so B = added + j - j'.
    bool const exchange = !added.contains(j) && std::any_of(out.before.begin(), out.before.end(), [&](Bundle b) {
      Bundle const gained = added - b;
      return gained.size() == 1 && (b - added) == Bundle::single(j);
    });
    if (!exchange)
    {
      throw UnclassifiableTransition("new base is not an exchange of an old base");
    }
  }
  out.kind = TransitionKind::augmentation;
  return out;
}

DistanceWitness check_utility_distance(const Valuation& v, const PriceVector& p, Bundle s)
{
  auto const report = demand_sets(v, p);
  DistanceWitness out;
  out.gap = report.utility - utility(v, p, s);
  std::optional<Bundle> best;
  for (Bundle d : report.demand)
  {
    Bundle const extra = d - s;
    if (static_cast<Value>(extra.size()) <= out.gap && (!best || extra.size() < (*best - s).size()))
    {
      best = d;
    }
  }
  if (best)
  {
    out.ok = true;
    out.demanded = *best;
    out.extra = *best - s;
  }
  return out;
}

MarginalCheck check_decreasing_marginal(const Instance& instance, const PriceVector& p, Item x, Item y)
{
  if (x == y)
  {
    throw InvalidInput("decreasing-marginal check needs two distinct items");
  }
  if (x >= instance.item_count() || y >= instance.item_count())
  {
    throw InvalidInput("item out of range");
  }
  MarginalCheck out;
  out.base = lyapunov(instance, p);
  out.raise_x = lyapunov(instance, p.raised(Bundle::single(x)));
  out.raise_y = lyapunov(instance, p.raised(Bundle::single(y)));
  out.raise_both = lyapunov(instance, p.raised(Bundle::single(x).with(y)));
  out.ok = out.raise_x + out.raise_y >= out.base + out.raise_both;
  return out;
}

namespace {

/// Depth-first search over values of g on the large sets, in order of
/// increasing size, keeping g monotone and submodular at every step.
class CompletionSearch
{
public:
  CompletionSearch(const Valuation& v, std::size_t k, Value cap, std::uint64_t budget)
    : m_(v.item_count())
    , cap_(cap)
    , top_(cap + v.max_value())
    , budget_(budget)
    , table_(v.table().begin(), v.table().end())
  {
    for (std::uint32_t s = 0; s < table_.size(); ++s)
    {
      if (Bundle{s}.size() >= k)
      {
        large_.emplace_back(s);
      }
    }
    std::stable_sort(large_.begin(), large_.end(), [](Bundle a, Bundle b) { return a.size() < b.size(); });
  }

  std::optional<Valuation> run()
  {
    if (search(0))
    {
      return Valuation::from_table(m_, table_);
    }
    return std::nullopt;
  }

private:
  bool consistent(Bundle s) const
  {
    Value const value = table_[s.bits()];
    auto const items = s.items();
    for (Item a : items)
    {
      if (table_[s.without(a).bits()] > value)
      {
        return false;
      }
    }
    for (std::size_t x = 0; x < items.size(); ++x)
    {
      for (std::size_t y = x + 1; y < items.size(); ++y)
      {
        Bundle const sa = s.without(items[x]);
        Bundle const sb = s.without(items[y]);
        Bundle const sab = sa.without(items[y]);
        if (table_[sa.bits()] + table_[sb.bits()] < value + table_[sab.bits()])
        {
          return false;
        }
      }
    }
    return true;
  }

  bool search(std::size_t next)
  {
    if (next == large_.size())
    {
      if (++leaves_ > budget_)
      {
        throw SearchBudgetExceeded("GGS completion search exceeded its budget; membership undecided");
      }
      Valuation const g = Valuation::from_table(m_, table_);
      return !check_si_on_grid(g) && !check_gs_on_grid(g);
    }
    Bundle const s = large_[next];
    for (Value value = cap_; value <= top_; ++value)
    {
      table_[s.bits()] = value;
      if (consistent(s) && search(next + 1))
      {
        return true;
      }
    }
    table_[s.bits()] = cap_;
    return false;
  }

  std::size_t m_;
  Value cap_;
  Value top_;
  std::uint64_t budget_;
  std::uint64_t leaves_ = 0;
  std::vector<Value> table_;
  std::vector<Bundle> large_;
};

}  // namespace

GgsMembership is_ggs_member(const Valuation& v, std::size_t k, Value cap, std::uint64_t budget)
{
  GgsMembership out;
  if (k == 0)
  {
    throw InvalidInput("GGS size k must be positive");
  }
  auto const table = v.table();
  for (std::uint32_t s = 0; s < table.size(); ++s)
  {
    Bundle const b{s};
    if (b.size() >= k && table[s] != cap)
    {
      out.violation = "v(S) != M on a set of size >= k (mask " + std::to_string(s) + ")";
      return out;
    }
    if (b.size() < k && table[s] > cap)
    {
      out.violation = "v(S) > M on a set of size < k (mask " + std::to_string(s) + ")";
      return out;
    }
  }
  if (k == 2)
  {
    // GS implies submodular, so g(ab) <= g(a) + g(b) is forced; conversely
    // the additive extension of the singletons completes v.
    std::size_t const m = v.item_count();
    std::vector<Value> singles(m);
    for (Item j = 0; j < m; ++j)
    {
      singles[j] = v(Bundle::single(j));
    }
    for (Item a = 0; a < m; ++a)
    {
      for (Item b = a + 1; b < m; ++b)
      {
        if (singles[a] + singles[b] < cap)
        {
          out.violation = "v(a) + v(b) < M for items " + std::to_string(a) + " and " + std::to_string(b);
          return out;
        }
      }
    }
    out.member = true;
    out.completion = make_additive(singles);
    return out;
  }
  if (auto g = CompletionSearch(v, k, cap, budget).run())
  {
    out.member = true;
    out.completion = std::move(g);
  }
  else
  {
    out.violation = "no gross-substitute completion with values in [M, M + max value]";
  }
  return out;
}

}  // namespace walras::structure

namespace walras::structure {

LemmaReport check_lemmas(const Instance& instance, const LemmaSample& sample)
{
  LemmaReport out;
  auto fail = [&out](bool& flag, std::string what) {
    if (flag && out.failure.empty())
    {
      out.failure = std::move(what);
    }
    flag = false;
  };
  PriceVector const& p = sample.p;
  PriceVector const raised = p.raised(sample.s);
  std::size_t const m = instance.item_count();

  for (std::size_t i = 0; i < instance.player_count(); ++i)
  {
    auto const& v = instance.players[i];
    std::string const who = "player " + std::to_string(i);
    if (max_utility(v, p) != max_utility(v, raised) + f_i(v, p, sample.s))
    {
      fail(out.structural2, who + ": u_p differs from u_{p+1_S} + f_i(S)");
    }
    auto const report = demand_sets(v, p, i);
    if (check_matroid_bases(report.minimal_demand))
    {
      fail(out.matroid, who + ": minimal demands are not matroid bases");
    }
    if (m > 0)
    {
      try
      {
        classify_transition(v, p, sample.j);
      }
      catch (const UnclassifiableTransition& e)
      {
        fail(out.transition, who + ": " + e.what());
      }
    }
    if (!check_utility_distance(v, p, sample.s).ok)
    {
      fail(out.distance, who + ": no utility-distance witness");
    }
  }

  if (m > 0 && !sample.s.contains(sample.j) &&
      f(instance, p.raised(Bundle::single(sample.j)), sample.s) < f(instance, p, sample.s))
  {
    fail(out.f_monotone, "f decreased after raising an item outside S");
  }
  Value const base = lyapunov(instance, p);
  if (lyapunov(instance, coordinate_max(p, sample.q)) + lyapunov(instance, coordinate_min(p, sample.q)) >
      base + lyapunov(instance, sample.q))
  {
    fail(out.submodular, "Lyapunov is not submodular at (p, q)");
  }
  if (m > 0 && lyapunov(instance, p.raised(Bundle::single(sample.j))) - base > 1)
  {
    fail(out.single_step, "Lyapunov rose by more than one on a single item");
  }
  if (f(instance, p, sample.s) <= 0 && lyapunov(instance, raised) < base)
  {
    fail(out.obstacle_step, "Lyapunov fell on a set with f <= 0");
  }
  if (m >= 2 && sample.x != sample.y && !check_decreasing_marginal(instance, p, sample.x, sample.y).ok)
  {
    fail(out.marginal, "marginal return increased at (x, y)");
  }
  return out;
}

}  // namespace walras::structure
