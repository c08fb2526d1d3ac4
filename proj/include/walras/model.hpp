#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace walras {

using Value = std::int64_t;
using Item = std::size_t;

/// Hard limits that keep every exhaustive routine exact.
struct Limits
{
  std::size_t max_items = 20;
  Value max_value = 64;
};

/// Base class of every error raised by this library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error
{
public:
  using Error::Error;
};

class TruncationBoundsViolated : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

class BudgetExceeded : public Error
{
public:
  using Error::Error;
};

/// A subset of the item universe, stored as a bit mask (bit j <=> item j).
class Bundle
{
public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint32_t bits)
    : bits_(bits)
  {}

  static constexpr Bundle empty() { return Bundle{}; }
  static constexpr Bundle single(Item j) { return Bundle{std::uint32_t{1} << j}; }
  static constexpr Bundle full(std::size_t m)
  {
    return Bundle{m >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << m) - 1};
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(Item j) const { return ((bits_ >> j) & 1U) != 0; }
  constexpr bool subset_of(Bundle other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool strict_subset_of(Bundle other) const { return subset_of(other) && bits_ != other.bits_; }

  constexpr Bundle with(Item j) const { return Bundle{bits_ | (std::uint32_t{1} << j)}; }
  constexpr Bundle without(Item j) const { return Bundle{bits_ & ~(std::uint32_t{1} << j)}; }

  /// Smallest item index in the bundle; undefined on the empty bundle.
  constexpr Item first() const { return static_cast<Item>(std::countr_zero(bits_)); }

  std::vector<Item> items() const;

  friend constexpr Bundle operator|(Bundle a, Bundle b) { return Bundle{a.bits_ | b.bits_}; }
  friend constexpr Bundle operator&(Bundle a, Bundle b) { return Bundle{a.bits_ & b.bits_}; }
  friend constexpr Bundle operator-(Bundle a, Bundle b) { return Bundle{a.bits_ & ~b.bits_}; }
  friend constexpr bool operator==(Bundle a, Bundle b) = default;

private:
  std::uint32_t bits_ = 0;
};

/// Lexicographic order on the sorted item sequences of two bundles
/// ({a,c} < {b}, {a} < {a,b}).
bool lex_less(Bundle a, Bundle b);

/// Number of bundles over m items.
constexpr std::size_t bundle_count(std::size_t m) { return std::size_t{1} << m; }

enum class ValuationKind
{
  table,
  additive,
  unit_demand,
  truncation,
};

std::string to_string(ValuationKind kind);

class Valuation;

struct TruncationSpec
{
  std::shared_ptr<const Valuation> base;
  std::size_t k = 0;
  Value cap = 0;  // M
};

/// A set function over all bundles of m items, stored extensionally.
///
/// Whatever the constructor, the full table is materialized so every oracle
/// reads values the same way. The constructor parameters are kept alongside
/// so an instance serializes back to the form it was written in.
class Valuation
{
public:
  /// Builds from a full table of 2^m values indexed by bundle mask.
  static Valuation from_table(std::size_t m, std::vector<Value> table);

  std::size_t item_count() const { return m_; }
  Value operator()(Bundle s) const { return table_[s.bits()]; }
  std::span<const Value> table() const { return table_; }
  Value max_value() const;

  ValuationKind kind() const { return kind_; }
  /// Per-item values for additive and unit-demand valuations.
  std::span<const Value> item_values() const { return item_values_; }
  /// Parameters for truncations, null otherwise.
  const TruncationSpec* truncation() const { return truncation_ ? &*truncation_ : nullptr; }

  friend bool operator==(const Valuation& a, const Valuation& b);

private:
  friend Valuation make_unit_demand(std::span<const Value>);
  friend Valuation make_additive(std::span<const Value>);
  friend Valuation make_truncation(const TruncationSpec&);

  std::size_t m_ = 0;
  std::vector<Value> table_;
  ValuationKind kind_ = ValuationKind::table;
  std::vector<Value> item_values_;
  std::optional<TruncationSpec> truncation_;
};

/// v(S) = max over j in S of values[j].
Valuation make_unit_demand(std::span<const Value> values);

/// v(S) = sum over j in S of values[j].
Valuation make_additive(std::span<const Value> values);

/// Equals the base below size k and the constant cap from size k on.
/// Throws TruncationBoundsViolated if the base exceeds the cap on a set
/// smaller than k, since the result would then not be monotone.
Valuation make_truncation(const TruncationSpec& spec);

struct ValuationViolation
{
  enum class Kind
  {
    empty_nonzero,
    negative_value,
    not_monotone,
  };

  Kind kind;
  Bundle smaller;  // for not_monotone: v(smaller) > v(larger)
  Bundle larger;

  std::string describe() const;
};

/// Checks v(empty) = 0, nonnegativity and monotonicity. Reports the first
/// violation in bundle-mask order rather than throwing.
std::optional<ValuationViolation> validate(const Valuation& v);

/// Nonnegative integer price per item.
class PriceVector
{
public:
  PriceVector() = default;
  explicit PriceVector(std::size_t m)
    : price_(m, 0)
  {}
  explicit PriceVector(std::vector<Value> prices);

  std::size_t size() const { return price_.size(); }
  Value operator[](Item j) const { return price_[j]; }
  void set(Item j, Value value);
  std::span<const Value> values() const { return price_; }

  Value of(Bundle s) const;
  Value total() const;

  /// This price raised by one on every item of s.
  PriceVector raised(Bundle s) const;

  /// Coordinatewise domination: *this <= other.
  bool dominated_by(const PriceVector& other) const;

  friend bool operator==(const PriceVector&, const PriceVector&) = default;

private:
  std::vector<Value> price_;
};

PriceVector coordinate_max(const PriceVector& p, const PriceVector& q);
PriceVector coordinate_min(const PriceVector& p, const PriceVector& q);

/// p(S) for every bundle S, indexed by mask.
std::vector<Value> bundle_prices(const PriceVector& p);

/// One bundle per player, pairwise disjoint.
struct Allocation
{
  std::vector<Bundle> bundles;

  bool disjoint() const;
  Bundle allocated() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct Instance
{
  std::vector<std::string> items;
  std::vector<Valuation> players;

  std::size_t item_count() const { return items.size(); }
  std::size_t player_count() const { return players.size(); }
  Value max_value() const;

  /// Throws InvalidInput when sizes, limits or valuation properties fail.
  void validate(const Limits& limits = {}) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Default item labels a, b, c, ... for m items.
std::vector<std::string> default_labels(std::size_t m);

}  // namespace walras
