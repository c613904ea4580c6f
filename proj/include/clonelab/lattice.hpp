#pragma once

#include <clonelab/bool_fun.hpp>
#include <clonelab/relations.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonelab
{

/// Flag bits of a clone descriptor, one per fixed relation of R_n.
enum Flag : uint8_t
{
  kLE = 1,
  kAFF = 2,
  kNEG = 4,
  kAND = 8,
  kOR = 16,
  kUNARY = 32
};
inline constexpr uint8_t kAllFlags = 63;

uint8_t flag_of( RelTag tag );

/*! \brief Point of Post's lattice given by its invariants in R_infinity.
 *
 * `flags` lists the preserved fixed relations; `arm0`/`arm1` are the
 * largest m with r^m_alpha preserved (0: not even {alpha}; kInfinite: all).
 * A canonical descriptor lists every invariant of the clone it denotes.
 */
struct CloneDesc
{
  uint8_t flags = 0;
  Level arm0 = 0;
  Level arm1 = 0;

  Level arm( bool alpha ) const { return alpha ? arm1 : arm0; }
  bool has( uint8_t f ) const { return ( flags & f ) == f; }
  /// True iff every member preserves the relation.
  bool preserves( RelationId r ) const;

  /// Serialized as `flags:arm0:arm1`, flags as '+'-joined tags or '-'.
  std::string to_string() const;
  static CloneDesc parse( std::string_view s );

  bool operator==( CloneDesc const& o ) const { return flags == o.flags && arm0 == o.arm0 && arm1 == o.arm1; }
  bool operator!=( CloneDesc const& o ) const { return !( *this == o ); }
  bool operator<( CloneDesc const& o ) const;
};

/// Descriptor of the bottom clone (projections only).
CloneDesc bottom();
/// Descriptor of the top clone (all functions).
CloneDesc top();

/// Invariants of a single function: its generated clone.
CloneDesc function_descriptor( BoolFun const& f );

/// Invariants of [F] (bottom for the empty set).
CloneDesc clone_of( std::vector<BoolFun> const& F );

/// Full invariant set of Pol(raw).
CloneDesc canonicalize( CloneDesc raw );

bool leq( CloneDesc const& c1, CloneDesc const& c2 );
CloneDesc meet( CloneDesc const& c1, CloneDesc const& c2 );
CloneDesc join( CloneDesc const& c1, CloneDesc const& c2 );
/// Image under f -> dual(f).
CloneDesc dual( CloneDesc const& c );

/// Juxtaposition name (U A D E V M, then P, P_a, T^m_a, PT^m_a); signature if not canonical.
std::string name( CloneDesc const& c );
CloneDesc named( std::string_view s );

/// All canonical descriptors whose finite arm levels are at most max_level.
std::vector<CloneDesc> all_clones( Level max_level );

struct NamedClone
{
  std::string name;
  std::vector<std::string> generators;
  CloneDesc desc;
};

/// The meet-irreducible clones with their standard generating sets, plus top and bottom.
std::vector<NamedClone> const& named_clones();

struct Membership
{
  bool member;
  std::optional<RelationId> separator;
  std::optional<WitnessMatrix> witness;
  /// Relations consulted, in order.
  std::vector<RelationId> consulted;
};

/// f in [F], decided over R_n with n = arity(f).
Membership member( BoolFun const& f, std::vector<BoolFun> const& F );
/// Same with a precomputed descriptor of [F].
Membership member( BoolFun const& f, CloneDesc const& clone );

} // namespace clonelab
