#include "walras/model.hpp"

#include <algorithm>
#include <numeric>

namespace walras {

std::vector<Item> Bundle::items() const
{
  std::vector<Item> out;
  out.reserve(size());
  for (std::uint32_t rest = bits_; rest != 0; rest &= rest - 1)
  {
    out.push_back(static_cast<Item>(std::countr_zero(rest)));
  }
  return out;
}

bool lex_less(Bundle a, Bundle b)
{
  std::uint32_t const diff = a.bits() ^ b.bits();
  if (diff == 0)
  {
    return false;
  }
  // Both sequences agree below the first differing item j.
  Item const j = static_cast<Item>(std::countr_zero(diff));
  bool const a_has = a.contains(j);
  Bundle const other = a_has ? b : a;
  bool const other_continues = (other.bits() >> j) != 0;
  // The bundle holding j is smaller iff the other continues past j;
  // otherwise the other is a proper prefix.
  return a_has ? other_continues : !other_continues;
}

std::string to_string(ValuationKind kind)
{
  switch (kind)
  {
  case ValuationKind::table:
    return "table";
  case ValuationKind::additive:
    return "additive";
  case ValuationKind::unit_demand:
    return "unit_demand";
  case ValuationKind::truncation:
    return "truncation";
  }
  return "unknown";
}

Valuation Valuation::from_table(std::size_t m, std::vector<Value> table)
{
  if (m >= 32)
  {
    throw InvalidInput("too many items for a bundle mask");
  }
  if (table.size() != bundle_count(m))
  {
    throw InvalidInput("valuation table must hold exactly 2^m values");
  }
  Valuation v;
  v.m_ = m;
  v.table_ = std::move(table);
  return v;
}

Value Valuation::max_value() const
{
  return table_.empty() ? 0 : *std::max_element(table_.begin(), table_.end());
}

bool operator==(const Valuation& a, const Valuation& b)
{
  if (a.m_ != b.m_ || a.kind_ != b.kind_ || a.table_ != b.table_ || a.item_values_ != b.item_values_)
  {
    return false;
  }
  if (a.truncation_.has_value() != b.truncation_.has_value())
  {
    return false;
  }
  if (!a.truncation_)
  {
    return true;
  }
  auto const& ta = *a.truncation_;
  auto const& tb = *b.truncation_;
  return ta.k == tb.k && ta.cap == tb.cap && *ta.base == *tb.base;
}

namespace {

void require_nonnegative(std::span<const Value> values)
{
  for (Value x : values)
  {
    if (x < 0)
    {
      throw InvalidInput("item values must be nonnegative");
    }
  }
}

}  // namespace

Valuation make_unit_demand(std::span<const Value> values)
{
  require_nonnegative(values);
  std::size_t const m = values.size();
  std::vector<Value> table(bundle_count(m), 0);
  for (std::uint32_t s = 1; s < table.size(); ++s)
  {
    Bundle const b{s};
    Item const j = b.first();
    table[s] = std::max(table[b.without(j).bits()], values[j]);
  }
  Valuation v = Valuation::from_table(m, std::move(table));
  v.kind_ = ValuationKind::unit_demand;
  v.item_values_.assign(values.begin(), values.end());
  return v;
}

Valuation make_additive(std::span<const Value> values)
{
  require_nonnegative(values);
  std::size_t const m = values.size();
  std::vector<Value> table(bundle_count(m), 0);
  for (std::uint32_t s = 1; s < table.size(); ++s)
  {
    Bundle const b{s};
    Item const j = b.first();
    table[s] = table[b.without(j).bits()] + values[j];
  }
  Valuation v = Valuation::from_table(m, std::move(table));
  v.kind_ = ValuationKind::additive;
  v.item_values_.assign(values.begin(), values.end());
  return v;
}

Valuation make_truncation(const TruncationSpec& spec)
{
  if (!spec.base)
  {
    throw InvalidInput("truncation needs a base valuation");
  }
  if (spec.k == 0)
  {
    throw InvalidInput("truncation size k must be positive");
  }
  if (spec.cap < 0)
  {
    throw InvalidInput("truncation cap M must be nonnegative");
  }
  Valuation const& base = *spec.base;
  std::size_t const m = base.item_count();
  std::vector<Value> table(bundle_count(m));
  for (std::uint32_t s = 0; s < table.size(); ++s)
  {
    Bundle const b{s};
    if (b.size() < spec.k)
    {
      if (base(b) > spec.cap)
      {
        throw TruncationBoundsViolated("base exceeds M on a set smaller than k");
      }
      table[s] = base(b);
    }
    else
    {
      table[s] = spec.cap;
    }
  }
  Valuation v = Valuation::from_table(m, std::move(table));
  v.kind_ = ValuationKind::truncation;
  v.truncation_ = spec;
  return v;
}

std::string ValuationViolation::describe() const
{
  switch (kind)
  {
  case Kind::empty_nonzero:
    return "empty set nonzero";
  case Kind::negative_value:
    return "negative value at mask " + std::to_string(larger.bits());
  case Kind::not_monotone:
    return "not monotone: v(" + std::to_string(smaller.bits()) + ") > v(" + std::to_string(larger.bits()) + ")";
  }
  return "unknown violation";
}

std::optional<ValuationViolation> validate(const Valuation& v)
{
  if (v(Bundle::empty()) != 0)
  {
    return ValuationViolation{ValuationViolation::Kind::empty_nonzero, {}, {}};
  }
  auto const table = v.table();
  for (std::uint32_t s = 1; s < table.size(); ++s)
  {
    if (table[s] < 0)
    {
      return ValuationViolation{ValuationViolation::Kind::negative_value, {}, Bundle{s}};
    }
  }
  // Monotonicity along single-item steps implies it for every S subset T.
  for (std::uint32_t s = 1; s < table.size(); ++s)
  {
    Bundle const t{s};
    for (Item j : t.items())
    {
      Bundle const smaller = t.without(j);
      if (v(smaller) > v(t))
      {
        return ValuationViolation{ValuationViolation::Kind::not_monotone, smaller, t};
      }
    }
  }
  return std::nullopt;
}

PriceVector::PriceVector(std::vector<Value> prices)
  : price_(std::move(prices))
{
  for (Value x : price_)
  {
    if (x < 0)
    {
      throw InvalidInput("prices must be nonnegative");
    }
  }
}

void PriceVector::set(Item j, Value value)
{
  if (value < 0)
  {
    throw InvalidInput("prices must be nonnegative");
  }
  price_.at(j) = value;
}

Value PriceVector::of(Bundle s) const
{
  Value sum = 0;
  for (std::uint32_t rest = s.bits(); rest != 0; rest &= rest - 1)
  {
    sum += price_[static_cast<std::size_t>(std::countr_zero(rest))];
  }
  return sum;
}

Value PriceVector::total() const { return std::accumulate(price_.begin(), price_.end(), Value{0}); }

PriceVector PriceVector::raised(Bundle s) const
{
  PriceVector out = *this;
  for (std::uint32_t rest = s.bits(); rest != 0; rest &= rest - 1)
  {
    ++out.price_[static_cast<std::size_t>(std::countr_zero(rest))];
  }
  return out;
}

bool PriceVector::dominated_by(const PriceVector& other) const
{
  for (std::size_t j = 0; j < price_.size(); ++j)
  {
    if (price_[j] > other.price_[j])
    {
      return false;
    }
  }
  return true;
}

PriceVector coordinate_max(const PriceVector& p, const PriceVector& q)
{
  std::vector<Value> out(p.size());
  for (std::size_t j = 0; j < out.size(); ++j)
  {
    out[j] = std::max(p[j], q[j]);
  }
  return PriceVector{std::move(out)};
}

PriceVector coordinate_min(const PriceVector& p, const PriceVector& q)
{
  std::vector<Value> out(p.size());
  for (std::size_t j = 0; j < out.size(); ++j)
  {
    out[j] = std::min(p[j], q[j]);
  }
  return PriceVector{std::move(out)};
}

std::vector<Value> bundle_prices(const PriceVector& p)
{
  std::vector<Value> out(bundle_count(p.size()), 0);
  for (std::uint32_t s = 1; s < out.size(); ++s)
  {
    Bundle const b{s};
    Item const j = b.first();
    out[s] = out[b.without(j).bits()] + p[j];
  }
  return out;
}

bool Allocation::disjoint() const
{
  std::uint32_t seen = 0;
  for (Bundle b : bundles)
  {
    if ((seen & b.bits()) != 0)
    {
      return false;
    }
    seen |= b.bits();
  }
  return true;
}

Bundle Allocation::allocated() const
{
  Bundle all;
  for (Bundle b : bundles)
  {
    all = all | b;
  }
  return all;
}

Value Instance::max_value() const
{
  Value best = 0;
  for (auto const& v : players)
  {
    best = std::max(best, v.max_value());
  }
  return best;
}

void Instance::validate(const Limits& limits) const
{
  if (items.empty())
  {
    throw InvalidInput("instance needs at least one item");
  }
  if (items.size() > limits.max_items)
  {
    throw InvalidInput("instance has more than " + std::to_string(limits.max_items) + " items");
  }
  if (players.empty())
  {
    throw InvalidInput("instance needs at least one player");
  }
  for (std::size_t i = 0; i < players.size(); ++i)
  {
    auto const& v = players[i];
    if (v.item_count() != items.size())
    {
      throw InvalidInput("player " + std::to_string(i) + " is defined over a different item set");
    }
    if (auto violation = walras::validate(v))
    {
      throw InvalidInput("player " + std::to_string(i) + ": " + violation->describe());
    }
    if (v.max_value() > limits.max_value)
    {
      throw InvalidInput("player " + std::to_string(i) + " exceeds the value cap " + std::to_string(limits.max_value));
    }
  }
}

std::vector<std::string> default_labels(std::size_t m)
{
  std::vector<std::string> labels;
  labels.reserve(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    if (j < 26)
    {
      labels.emplace_back(1, static_cast<char>('a' + j));
    }
    else
    {
      labels.push_back("i" + std::to_string(j));
    }
  }
  return labels;
}

}  // namespace walras
