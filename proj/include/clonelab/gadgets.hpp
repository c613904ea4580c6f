#pragma once

#include <clonelab/bool_fun.hpp>
#include <clonelab/lattice.hpp>
#include <clonelab/term.hpp>
#include <clonelab/thresholds.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonelab
{

/// Term together with its arity and the basis its gate names refer to.
struct Formula
{
  Term term;
  unsigned arity;
  Basis basis;

  BoolFun table( unsigned max_arity = kMaxArity ) const;
};

/// Largest variable count of the brute-force SAT utility.
inline constexpr unsigned kMaxSatVars = 20;

/*! \brief CNF over variables 1..num_vars, clauses as signed literals.
 *
 * The text form is DIMACS: an optional `p cnf V C` header, `c` comment
 * lines, and clauses terminated by 0.
 */
class Cnf
{
public:
  Cnf( unsigned num_vars, std::vector<std::vector<int>> clauses );

  static Cnf parse_dimacs( std::string_view text );
  std::string to_dimacs() const;

  unsigned num_vars() const noexcept { return num_vars_; }
  std::vector<std::vector<int>> const& clauses() const noexcept { return clauses_; }

  /// Bit i of `a` is variable i+1.
  bool eval( uint64_t a ) const;
  std::optional<uint64_t> satisfying_assignment() const;
  bool satisfiable() const { return satisfying_assignment().has_value(); }
  uint64_t count_models() const;

  /// DeMorgan formula over x_0..x_{num_vars-1}; an empty CNF is x0 or not x0, an empty clause x0 and not x0.
  Formula to_formula() const;

private:
  unsigned num_vars_;
  std::vector<std::vector<int>> clauses_;
};

/// Brute-force satisfiability of a formula (at most kMaxSatVars variables).
bool satisfiable( Formula const& phi );
uint64_t count_models( Formula const& phi );

/// Exhaustive equivalence; arities must agree.
bool equivalent( Formula const& a, Formula const& b );

/*! \brief f_phi(x, y, z, u) = ((x and phi) and y) or (not(x and phi) and z).
 *
 * x, y, z are x_0, x_1, x_2 and the variables of phi follow from x_3.
 */
Formula gadget_f_phi( Formula const& phi );

/// Unary circuit x and C(x^a_0, ..., x^a_{n-1}) over DeMorgan, x^1 = x, x^0 = not x.
CircuitDag gadget_C_a( CircuitDag const& c, Assignment const& a );

/// Parameters of the threshold gadget for n formulas.
struct ThresholdGadgetParams
{
  unsigned n;
  unsigned m;
  unsigned t;

  /// k_{n,s} = ceil(t / (s+1)).
  unsigned k( unsigned s ) const;
};

ThresholdGadgetParams threshold_gadget_params( unsigned n );

struct ThresholdGadget
{
  Formula formula;
  ThresholdGadgetParams params;
  /// First variable of each formula block.
  std::vector<unsigned> offsets;
};

/*! \brief theta^m_t(x_0 and phi_0, ..., x_{n-1} and phi_{n-1}, x_n, ..., x_{m-1}).
 *
 * m = max((n+1)^2, 6), t = m-n-1. Variables: x_0..x_{m-1}, then the blocks
 * of phi_0, phi_1, ... in order.
 */
ThresholdGadget gadget_f_vec( std::vector<Formula> const& phis );

/// f_vec(x) or (y and the conjunction of all x); y is the last variable.
ThresholdGadget gadget_g_vec( std::vector<Formula> const& phis );

/// x and (y -> z).
Formula gadget_pt_generator();

/// Ordered CNF list whose satisfiable members form a nonempty prefix.
struct PromiseInstance
{
  std::vector<Cnf> cnfs;
  std::optional<unsigned> claimed_j;

  /// Length of the satisfiable prefix; input error when the promise fails.
  unsigned check() const;
};

struct ComposedInstance
{
  ThresholdGadget f_even;
  ThresholdGadget f_odd;
  unsigned n;
  unsigned j;

  /// The generating set {NOTIMPLIES, f_odd}.
  std::vector<BoolFun> generators() const;
  BoolFun target() const;
  /// The expected answer: j even.
  bool expected_member() const { return j % 2 == 0; }
};

/// Builds ({NOTIMPLIES, f_odd}, f_even); f_even is in the clone iff j is even.
ComposedInstance compose_cmp_instance( PromiseInstance const& p );

struct RandomizedComposedInstance
{
  Formula f_even;
  Formula f_odd;
  ThresholdFormula threshold;
  ThresholdGadgetParams params;
  unsigned j;
};

/*! \brief The composer with theta^m_t replaced by one random THETA(k) formula.
 *
 * The same formula serves both halves. Needs sigma_k m < t, which for k = 3
 * means n >= 4.
 */
RandomizedComposedInstance compose_cmp_instance_randomized( PromiseInstance const& p, unsigned e, RandomStream& r,
                                                            unsigned k = 3,
                                                            std::optional<unsigned> depth = std::nullopt );

/*! \brief Synthetic promise instances.
 *
 * CNFs come from fixed pools of satisfiable and unsatisfiable CNFs over at
 * most `max_vars` variables; variant v shifts the pool choice, so different
 * variants give different instances for the same (n, j).
 */
PromiseInstance make_promise_instance( unsigned n, unsigned j, unsigned max_vars, unsigned variant );

/// h = f + g + theta^3_2(y0, y1, y2) with f, g in DM.
Formula gadget_h_DP( Formula const& f, Formula const& g );
/// h = theta^3_2(f or g, y, z) with f, g in DM.
Formula gadget_h_MPT21( Formula const& f, Formula const& g );
/// h = y or (f + g) with f, g in MPT^inf_1.
Formula gadget_h_PT1( Formula const& f, Formula const& g );

} // namespace clonelab
