#include "walras/oracle.hpp"

#include "walras/demand.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>

namespace walras::oracle {

namespace {

std::uint64_t checked_power(std::uint64_t base, std::size_t exponent, std::uint64_t budget)
{
  std::uint64_t out = 1;
  for (std::size_t e = 0; e < exponent; ++e)
  {
    if (out > budget / base)
    {
      return budget + 1;
    }
    out *= base;
  }
  return out;
}

/// Depth-first assignment of one demanded bundle per player, memoizing
/// (player, used items) states known to fail.
class AllocationSearch
{
public:
  AllocationSearch(const Instance& instance, const PriceVector& p, Bundle must_cover)
    : m_(instance.item_count())
    , must_cover_(must_cover)
  {
    families_.reserve(instance.player_count());
    for (std::size_t i = 0; i < instance.player_count(); ++i)
    {
      families_.push_back(demand_sets(instance.players[i], p, i).demand);
    }
    failed_.assign(families_.size() * bundle_count(m_), 0);
    chosen_.assign(families_.size(), Bundle{});
  }

  std::optional<Allocation> run()
  {
    if (!search(0, Bundle{}))
    {
      return std::nullopt;
    }
    return Allocation{chosen_};
  }

private:
  bool search(std::size_t player, Bundle used)
  {
    if (player == families_.size())
    {
      return must_cover_.subset_of(used);
    }
    std::size_t const key = player * bundle_count(m_) + used.bits();
    if (failed_[key])
    {
      return false;
    }
    for (Bundle b : families_[player])
    {
      if (!(b & used).is_empty())
      {
        continue;
      }
      chosen_[player] = b;
      if (search(player + 1, used | b))
      {
        return true;
      }
    }
    failed_[key] = 1;
    return false;
  }

  std::size_t m_;
  Bundle must_cover_;
  std::vector<std::vector<Bundle>> families_;
  std::vector<char> failed_;
  std::vector<Bundle> chosen_;
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

std::optional<WalrasianCertificate> walrasian_with_welfare(const Instance& instance, const PriceVector& p,
                                                           Value welfare)
{
  auto allocation = AllocationSearch(instance, p, positive_items(p)).run();
  if (!allocation)
  {
    return std::nullopt;
  }
  auto cert = certify(instance, p, *allocation, welfare);
  if (!cert.bm_equality)
  {
    throw std::logic_error("covering envy-free allocation found but L(p) differs from the optimal welfare");
  }
  return cert;
}

/// Lex-order odometer step with per-coordinate upper limits.
bool next_grid_point(std::vector<Value>& digits, std::span<const Value> limit)
{
  for (std::size_t j = digits.size(); j-- > 0;)
  {
    if (digits[j] < limit[j])
    {
      ++digits[j];
      return true;
    }
    digits[j] = 0;
  }
  return false;
}

}  // namespace

WelfareResult max_welfare(const Instance& instance, std::uint64_t budget)
{
  std::size_t const n = instance.player_count();
  std::size_t const m = instance.item_count();
  if (checked_power(n + 1, m, budget) > budget)
  {
    throw BudgetExceeded("welfare enumeration needs (n+1)^m = " + std::to_string(n + 1) + "^" + std::to_string(m) +
                         " assignments, over the budget of " + std::to_string(budget));
  }

  // owner[j] == n means item j is kept by nobody.
  std::vector<std::size_t> owner(m, n);
  std::vector<Bundle> bundles(n);
  std::vector<Value> values(n, 0);
  Value total = 0;

  WelfareResult best{0, Allocation{bundles}};
  auto move_item = [&](Item j, std::size_t to) {
    std::size_t const from = owner[j];
    for (std::size_t who : {from, to})
    {
      if (who == n)
      {
        continue;
      }
      bundles[who] = who == from ? bundles[who].without(j) : bundles[who].with(j);
      Value const updated = instance.players[who](bundles[who]);
      total += updated - values[who];
      values[who] = updated;
    }
    owner[j] = to;
  };

  // Odometer: each item cycles n, 0, 1, ..., n-1.
  while (true)
  {
    Item j = 0;
    while (j < m)
    {
      std::size_t const next = owner[j] == n ? 0 : owner[j] + 1;
      move_item(j, next);
      if (next != n)
      {
        break;
      }
      ++j;
    }
    if (j == m)
    {
      break;
    }
    if (total > best.value)
    {
      best = {total, Allocation{bundles}};
    }
  }
  return best;
}

std::optional<Allocation> envy_free_exists(const Instance& instance, const PriceVector& p)
{
  return AllocationSearch(instance, p, Bundle{}).run();
}

WalrasianCertificate certify(const Instance& instance, const PriceVector& p, const Allocation& allocation,
                             Value welfare)
{
  WalrasianCertificate cert;
  cert.price = p;
  cert.allocation = allocation;
  cert.max_welfare = welfare;
  cert.lyapunov = lyapunov(instance, p);
  cert.envy_free = allocation.bundles.size() == instance.player_count() && allocation.disjoint();
  if (cert.envy_free)
  {
    for (std::size_t i = 0; i < instance.player_count(); ++i)
    {
      auto const& v = instance.players[i];
      if (utility(v, p, allocation.bundles[i]) != max_utility(v, p))
      {
        cert.envy_free = false;
        break;
      }
    }
  }
  cert.coverage = positive_items(p).subset_of(allocation.allocated());
  cert.bm_equality = cert.lyapunov == welfare;
  return cert;
}

std::optional<WalrasianCertificate> is_walrasian(const Instance& instance, const PriceVector& p, std::uint64_t budget)
{
  return walrasian_with_welfare(instance, p, max_welfare(instance, budget).value);
}

std::vector<Value> marginal_price_bounds(const Instance& instance)
{
  std::size_t const m = instance.item_count();
  std::vector<Value> bound(m, 0);
  for (auto const& v : instance.players)
  {
    for (std::uint32_t s = 1; s < bundle_count(m); ++s)
    {
      Bundle const b{s};
      for (Item j : b.items())
      {
        bound[j] = std::max(bound[j], v(b) - v(b.without(j)));
      }
    }
  }
  return bound;
}

MinimalPriceResult minimal_walrasian_price(const Instance& instance, Value bound, std::uint64_t budget)
{
  std::size_t const m = instance.item_count();
  auto limit = marginal_price_bounds(instance);
  std::uint64_t points = 1;
  for (auto& b : limit)
  {
    b = std::clamp<Value>(b, 0, std::max<Value>(bound, 0));
    auto const width = static_cast<std::uint64_t>(b + 1);
    if (points > budget / width)
    {
      throw BudgetExceeded("price grid exceeds the budget of " + std::to_string(budget));
    }
    points *= width;
  }

  MinimalPriceResult out;
  out.max_welfare = max_welfare(instance, budget).value;
  bool have_lyapunov = false;

  // Lex order visits every q <= p before p, so skipping points that dominate
  // a found Walrasian price leaves exactly the minimal ones.
  std::vector<Value> digits(m, 0);
  while (true)
  {
    PriceVector const p{digits};
    bool const dominated = std::any_of(out.minimal.begin(), out.minimal.end(),
                                       [&](const PriceVector& w) { return w.dominated_by(p); });
    if (!dominated)
    {
      ++out.scanned;
      Value const value = lyapunov(instance, p);
      if (!have_lyapunov || value < out.min_lyapunov)
      {
        out.min_lyapunov = value;
        have_lyapunov = true;
      }
      if (value == out.max_welfare)
      {
        if (!walrasian_with_welfare(instance, p, out.max_welfare))
        {
          throw std::logic_error("L(p) equals the optimal welfare but no Walrasian allocation was found");
        }
        out.minimal.push_back(p);
      }
    }

    if (!next_grid_point(digits, limit))
    {
      break;
    }
  }

  if (!out.minimal.empty())
  {
    out.price = out.minimal.front();
    out.unique = out.minimal.size() == 1;
  }
  return out;
}

}  // namespace walras::oracle
