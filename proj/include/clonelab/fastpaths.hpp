#pragma once

#include <clonelab/lattice.hpp>
#include <clonelab/term.hpp>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonelab
{

/// Clones with polynomially many evaluation points identifying each member.
enum class Ambient
{
  V,
  E,
  A,
  DM,
  MT1,
  MT0
};

Ambient ambient_from_string( std::string_view s );
std::string to_string( Ambient a );
CloneDesc ambient_clone( Ambient a );

struct Identification
{
  CloneDesc clone;
  /// Normal form read off the evaluations, e.g. "or x0 x2" or "affine 101 + 1".
  std::string form;
  /// Number of circuit evaluations used.
  unsigned evaluations = 0;
};

/*! \brief [f] for a circuit whose gates lie in the ambient clone, by evaluation only.
 *
 * The points are 0, 1, the unit vectors e_i, their complements and the
 * indicator of a candidate variable set, as the ambient clone requires.
 * Gates outside the ambient clone are refused.
 */
Identification identify_restricted( CircuitDag const& c, Basis const& basis, Ambient ambient );

/// Bases below T^inf_1, below T^inf_0, or below D.
enum class CandidateVariant
{
  T1,
  T0,
  D
};

struct Candidates
{
  CloneDesc c0;
  CloneDesc c1;
  /// True when the speculative pass found an inconsistency and c0 is the fallback.
  bool fallback = false;
};

/*! \brief The candidates C0 (assuming the small case) and C1 = C0 join the upper clone.
 *
 * For T1 the small case is F in M and the upper clone PT^inf_1, for T0
 * dually, and for D the small case is F in M or F in A with upper clone DP.
 */
Candidates candidate_clones( std::vector<CircuitDag> const& F, Basis const& basis, CandidateVariant v );

/// Answers "is this circuit in M" and "is it in A"; may refuse.
struct SmallClassOracle
{
  std::function<bool( CircuitDag const& )> in_M;
  std::function<bool( CircuitDag const& )> in_A;
};

/// Oracle deciding by truth tables up to the given arity, refusing beyond it.
SmallClassOracle exhaustive_oracle( Basis const& basis, unsigned max_arity = 20 );

enum class CandidateBranch
{
  /// C0' is below C0.
  Lower,
  /// C0' is below C1 but not below C0.
  Upper,
  /// C0' is not below C1.
  Outside
};

struct CandidateDecision
{
  bool member;
  CandidateBranch branch;
  Candidates of_F;
  Candidates of_f;
};

/// f in [F] from the candidates and at most two oracle answers.
CandidateDecision decide_by_candidates( std::vector<CircuitDag> const& F, CircuitDag const& f, Basis const& basis,
                                        CandidateVariant v, SmallClassOracle const& oracle );

struct Classification
{
  CloneDesc clone;
  std::string label;
};

/*! \brief Complexity of B-CMP from the position of [B].
 *
 * Labels: "P", "coDP-complete", "Θᵖ₂-complete", "Θᵖ₂-complete(randomized)",
 * "coDP-hard-in-Θᵖ₂" and "in-Θᵖ₂".
 */
Classification classify_basis( Basis const& B );
Classification classify_clone( CloneDesc const& c );

} // namespace clonelab
