#pragma once

#include <clonelab/bool_fun.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonelab
{

/// Arm level: 0, 1, 2, ... or kInfinite.
using Level = uint32_t;
inline constexpr Level kInfinite = std::numeric_limits<Level>::max();

std::string level_to_string( Level l );
/// Accepts decimal, "inf" or "∞".
Level level_from_string( std::string_view s );

enum class RelTag
{
  LE,
  AFF,
  GR_NEG,
  GR_AND,
  GR_OR,
  UNARY3,
  R0,
  R1
};

/// A relation of R_infinity: a tag plus the arity m of an arm relation.
struct RelationId
{
  RelTag tag;
  unsigned m = 0;

  std::string to_string() const;
  bool operator==( RelationId const& o ) const { return tag == o.tag && m == o.m; }
};

/*! \brief k-ary Boolean relation.
 *
 * Column <a^0,...,a^{k-1}> is encoded as the integer with a^j at bit j.
 */
class Relation
{
public:
  Relation( unsigned arity, std::vector<uint64_t> const& members );
  explicit Relation( BoolFun characteristic ) : members_( std::move( characteristic ) ) {}

  static Relation parse( std::string_view text );
  std::string to_string() const { return members_.to_string(); }

  unsigned arity() const noexcept { return members_.arity(); }
  bool contains( uint64_t column ) const noexcept { return members_.get( column ); }
  uint64_t size() const noexcept { return members_.count_ones(); }
  std::vector<uint64_t> members() const;
  BoolFun const& characteristic() const noexcept { return members_; }

  /// Complements every column.
  Relation dual() const;

  bool operator==( Relation const& o ) const { return members_ == o.members_; }

private:
  BoolFun members_;
};

Relation standard_relation( RelationId id );

/// R_n: the six fixed relations followed by r^1_0, r^1_1, ..., r^n_0, r^n_1.
std::vector<RelationId> family_Rn( unsigned n );

/*! \brief Matrix refuting preservation.
 *
 * Row j is an assignment to the n arguments of f (bit i = entry of column i).
 */
struct WitnessMatrix
{
  unsigned rows = 0;
  unsigned cols = 0;
  std::vector<uint64_t> row_bits;

  bool at( unsigned row, unsigned col ) const { return ( row_bits[row] >> col ) & 1u; }
  uint64_t column( unsigned col ) const;
  /// Rows on separate lines, entries separated by blanks.
  std::string to_string() const;
  /// Single line form "1 0 0 / 0 1 1".
  std::string to_inline() const;

  bool operator==( WitnessMatrix const& o ) const
  {
    return rows == o.rows && cols == o.cols && row_bits == o.row_bits;
  }
};

/// Checks that every column lies in r and the row-wise image does not.
bool verify_witness( BoolFun const& f, Relation const& r, WitnessMatrix const& w );

struct Preservation
{
  bool preserved;
  std::optional<WitnessMatrix> witness;
};

inline constexpr uint64_t kDefaultPreserveBudget = 10'000'000;

/*! \brief f preserves r, by enumerating all matrices of member columns.
 *
 * Column tuples are visited lexicographically (first column slowest,
 * members ascending), so the returned witness is the first refuting
 * matrix in that order. Above the budget, relations of R_infinity fall
 * back to the specialized checkers; others raise a capacity error.
 */
Preservation preserves( BoolFun const& f, Relation const& r, uint64_t budget = kDefaultPreserveBudget );

bool preserves_specialized( BoolFun const& f, RelationId id );

/// Constructive refutation by the specialized checkers (nullopt when preserved).
std::optional<WitnessMatrix> refute( BoolFun const& f, RelationId id );

/// sup{m >= 1 : f preserves r^m_alpha}, 0 when f does not preserve {alpha}.
Level arm_level( BoolFun const& f, bool alpha );

/// Some variable x_i with x_i <=^alpha f, i.e. f <= x_i for alpha = 0 and x_i <= f for alpha = 1.
std::optional<unsigned> bounding_variable( BoolFun const& f, bool alpha );

} // namespace clonelab
