#pragma once

#include <clonelab/bool_fun.hpp>
#include <clonelab/term.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace clonelab
{

/// Largest arity handled by the closure oracle.
inline constexpr unsigned kClosureMaxArity = 4;
/// Default cap on gate applications during one closure run.
inline constexpr uint64_t kClosureBudget = uint64_t( 1 ) << 33;

/*! \brief The n-ary part of [F], computed by breadth-first composition.
 *
 * Layer 0 holds the projections; layer d+1 holds the new tables obtained by
 * applying a gate to a tuple with at least one entry of layer d. Gates are
 * visited in basis order and argument tuples lexicographically, so every
 * table has a reproducible minimal-depth witness.
 */
class Closure
{
public:
  /// Runs to the fixpoint, or stops as soon as `target` is derived.
  Closure( Basis basis, unsigned arity, std::optional<BoolFun> target = std::nullopt,
           uint64_t budget = kClosureBudget );

  unsigned arity() const noexcept { return arity_; }
  Basis const& basis() const noexcept { return basis_; }
  /// False when the run stopped early at the target.
  bool complete() const noexcept { return complete_; }

  bool contains( BoolFun const& f ) const;
  std::size_t size() const noexcept { return order_.size(); }
  /// Derived tables in derivation order.
  std::vector<BoolFun> members() const;
  /// Layer of f, nullopt if not derived.
  std::optional<unsigned> layer( BoolFun const& f ) const;
  /// Witness term over the basis.
  Term witness( BoolFun const& f ) const;

private:
  uint32_t index_of( BoolFun const& f ) const;
  Term build( uint32_t t, std::vector<std::optional<Term>>& memo ) const;

  Basis basis_;
  unsigned arity_;
  bool complete_ = true;
  std::vector<int32_t> layer_;
  std::vector<uint32_t> gate_;
  std::vector<uint32_t> child_offset_;
  std::vector<uint32_t> children_;
  std::vector<uint32_t> order_;
};

/// Convenience overload naming the functions G0, G1, ...
Closure closure( std::vector<BoolFun> const& F, unsigned arity );

/// Minimal-depth term over F computing f; logic error when f is not in [F].
Term synthesize( BoolFun const& f, Basis const& F );

/*! \brief Gate-by-gate rewriting of a circuit over `from` into `to`.
 *
 * Each gate uses, in order: a gate of `to` with the same table, a
 * registered definition for `to`, or a synthesized term. Gates outside
 * [to] are refused with the separating relation. The result is checked
 * exhaustively when the arity is at most `verify_arity`.
 */
CircuitDag convert_basis( CircuitDag const& c, Basis const& from, Basis const& to, unsigned verify_arity = 16 );

enum class ConstantMode
{
  Zero,
  One,
  Both
};

/*! \brief Removes the constants from a circuit over `from`, yielding one over `to`.
 *
 * `from` must lie in [to, 0], [to, 1] or [to, 0, 1] per `mode`. Constants
 * outside [to] become the conjunction (for 0) or disjunction (for 1) of
 * all inputs, which needs and/or in [to]. The computed function itself
 * must lie in [to].
 */
CircuitDag eliminate_constants( CircuitDag const& c, Basis const& from, Basis const& to, ConstantMode mode,
                                unsigned verify_arity = 16 );

} // namespace clonelab
