#pragma once

#include "walras/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace walras::structure {

inline constexpr std::uint64_t default_grid_budget = 50'000'000;
inline constexpr std::uint64_t default_search_budget = 100'000;

class GridTooLarge : public BudgetExceeded
{
public:
  using BudgetExceeded::BudgetExceeded;
};

class SearchBudgetExceeded : public BudgetExceeded
{
public:
  using BudgetExceeded::BudgetExceeded;
};

class UnclassifiableTransition : public Error
{
public:
  using Error::Error;
};

/// Prices p <= q and a bundle s in D(p) such that no bundle in D(q) keeps all
/// of s's items whose price did not move. Prices are in units of 1/scale of
/// the original valuation.
struct GsWitness
{
  PriceVector p;
  PriceVector q;
  Bundle s;
  Bundle kept;                        // S^=(p,q)
  std::optional<Item> violated_item;  // an item of `kept` outside every D(q) member
  Value scale = 1;
};

struct SiWitness
{
  PriceVector p;
  Bundle s;
  Value scale = 1;
};

struct MatroidViolation
{
  enum class Kind
  {
    empty_family,
    unequal_size,
    no_exchange,
  };

  Kind kind;
  Bundle first;
  Bundle second;
  Item removed = 0;  // for no_exchange: j2 in second - first with no partner

  std::string describe() const;
};

enum class TransitionKind
{
  restriction,
  deletion,
  augmentation,
};

std::string to_string(TransitionKind kind);

struct TransitionClass
{
  TransitionKind kind;
  std::vector<Bundle> before;  // D*(p)
  std::vector<Bundle> after;   // D*(p + 1_j)
  std::vector<Bundle> new_bases;
};

struct DistanceWitness
{
  bool ok = false;
  Value gap = 0;  // u_p - u_p(S)
  Bundle extra;   // R
  Bundle demanded;  // D, with D subset of S | R
};

struct MarginalCheck
{
  bool ok = false;
  Value base = 0;   // L(p)
  Value raise_x = 0;
  Value raise_y = 0;
  Value raise_both = 0;
};

struct GgsMembership
{
  bool member = false;
  std::optional<Valuation> completion;  // a gross-substitute g witnessing membership
  std::string violation;
};

/// v scaled by an integer factor.
Valuation scaled(const Valuation& v, Value factor);

/// First bundle outside D(p), in mask order, that no one-in/one-out change
/// improves.
std::optional<Bundle> check_single_improvement(const Valuation& v, const PriceVector& p);

/// Single-improvement scan over the integer grid [0, bound]^m of the
/// value-doubled valuation. Default bound is 2 * max value + 1.
std::optional<SiWitness> check_si_on_grid(const Valuation& v, std::optional<Value> bound = std::nullopt,
                                          std::uint64_t budget = default_grid_budget);

/// Gross-substitute condition for one fixed pair p <= q, at v's own scale.
std::optional<GsWitness> check_gs_pair(const Valuation& v, const PriceVector& p, const PriceVector& q);

/// Gross-substitute scan over all pairs p <= q of the integer grid
/// [0, bound]^m of the value-doubled valuation. A witness is conclusive; a
/// pass is evidence only, since real prices off the grid are not visited.
std::optional<GsWitness> check_gs_on_grid(const Valuation& v, std::optional<Value> bound = std::nullopt,
                                          std::uint64_t budget = default_grid_budget);

/// Equal cardinality plus basis exchange:
/// for B1, B2 and j2 in B2 - B1 some j1 in B1 - B2 has B2 - j2 + j1 in the family.
std::optional<MatroidViolation> check_matroid_bases(std::span<const Bundle> family);

/// How D* changes when the price of j rises by one.
TransitionClass classify_transition(const Valuation& v, const PriceVector& p, Item j);

/// With gap = u_p - u_p(S), finds D in D(p) and R with |R| <= gap and
/// D subset of S | R.
DistanceWitness check_utility_distance(const Valuation& v, const PriceVector& p, Bundle s);

/// L(p + 1_x) + L(p + 1_y) >= L(p) + L(p + 1_x + 1_y); requires x != y.
MarginalCheck check_decreasing_marginal(const Instance& instance, const PriceVector& p, Item x, Item y);

/// Whether v is the (k, cap)-truncation of some gross-substitute g with
/// g <= cap below size k and g >= cap from size k on. For k = 2 this is
/// decided exactly: some pair of singletons summing below cap rules out
/// every submodular g, and otherwise the additive extension works. Larger k
/// searches completions with values in [cap, cap + max value] on the large
/// sets, each candidate screened by the grid checks.
GgsMembership is_ggs_member(const Valuation& v, std::size_t k, Value cap,
                            std::uint64_t budget = default_search_budget);

/// One sampled point for the lemma suite: prices p and q, a bundle s, an
/// item j and a pair x != y (ignored when there is a single item).
struct LemmaSample
{
  PriceVector p;
  PriceVector q;
  Bundle s;
  Item j = 0;
  Item x = 0;
  Item y = 0;
};

/// Which identities hold at a sample. Each flag is true when its statement
/// holds or does not apply.
struct LemmaReport
{
  bool structural2 = true;     // u_p = u_{p + 1_S} + f_i(S) per player
  bool f_monotone = true;      // f_{p + 1_j}(S) >= f_p(S) for j outside S
  bool submodular = true;      // L(p | q) + L(p & q) <= L(p) + L(q)
  bool single_step = true;     // L(p + 1_j) - L(p) <= 1
  bool obstacle_step = true;   // f_p(S) <= 0 implies L(p + 1_S) >= L(p)
  bool matroid = true;         // D* of every player is a basis family
  bool transition = true;      // classify_transition succeeds per player
  bool distance = true;        // utility-distance witness per player
  bool marginal = true;        // decreasing marginal return at (x, y)
  std::string failure;         // first failing statement, if any

  bool ok() const
  {
    return structural2 && f_monotone && submodular && single_step && obstacle_step && matroid && transition &&
           distance && marginal;
  }
};

LemmaReport check_lemmas(const Instance& instance, const LemmaSample& sample);

}  // namespace walras::structure
