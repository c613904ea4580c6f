#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace clonelab
{

/// Largest arity for which truth tables are materialized.
inline constexpr unsigned kMaxArity = 24;

/*! \brief Boolean function of arity >= 1 stored as a truth table.
 *
 * Entry `a` of the table is f(a), where variable x_i is bit i of `a`.
 * Tables with fewer than 64 entries occupy the low bits of one word and
 * the unused high bits are kept zero.
 */
class BoolFun
{
public:
  /// Constant-zero unary function.
  BoolFun();

  /// All-zero function of the given arity.
  explicit BoolFun( unsigned arity );

  static BoolFun constant( unsigned arity, bool value );
  static BoolFun projection( unsigned arity, unsigned index );

  /// Table given directly by the low 2^arity bits; arity <= 6.
  static BoolFun from_bits( unsigned arity, uint64_t bits );

  template<class Fn>
  static BoolFun from_predicate( unsigned arity, Fn&& fn )
  {
    BoolFun f( arity );
    for ( uint64_t a = 0; a < f.size(); ++a )
    {
      if ( fn( a ) )
        f.set( a, true );
    }
    return f;
  }

  /// Parses `arity:hex` with the least significant nibble first.
  static BoolFun parse( std::string_view text );
  std::string to_string() const;

  unsigned arity() const noexcept { return arity_; }
  uint64_t size() const noexcept { return uint64_t( 1 ) << arity_; }

  bool get( uint64_t a ) const noexcept { return ( words_[a >> 6] >> ( a & 63 ) ) & 1u; }
  bool operator()( uint64_t a ) const noexcept { return get( a ); }
  void set( uint64_t a, bool v ) noexcept
  {
    if ( v )
      words_[a >> 6] |= uint64_t( 1 ) << ( a & 63 );
    else
      words_[a >> 6] &= ~( uint64_t( 1 ) << ( a & 63 ) );
  }

  std::vector<uint64_t> const& words() const noexcept { return words_; }
  std::vector<uint64_t>& words() noexcept { return words_; }

  /// Whole table as an integer; arity <= 6.
  uint64_t bits() const;

  uint64_t count_ones() const noexcept;
  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  bool is_constant() const noexcept { return is_zero() || is_one(); }

  /// Clears bits beyond the table length (after raw word manipulation).
  void mask_tail() noexcept;

  BoolFun operator~() const;
  BoolFun operator&( BoolFun const& o ) const;
  BoolFun operator|( BoolFun const& o ) const;
  BoolFun operator^( BoolFun const& o ) const;

  bool operator==( BoolFun const& o ) const noexcept { return arity_ == o.arity_ && words_ == o.words_; }
  bool operator!=( BoolFun const& o ) const noexcept { return !( *this == o ); }
  bool operator<( BoolFun const& o ) const noexcept;

private:
  unsigned arity_;
  std::vector<uint64_t> words_;
};

/// f^d(x) = not f(not x).
BoolFun dual( BoolFun const& f );

/// Pointwise order f <= g; arities must agree.
bool pointwise_leq( BoolFun const& f, BoolFun const& g );

/// True iff f depends on variable i.
bool depends_on( BoolFun const& f, unsigned i );

/// Number of variables f depends on.
unsigned essential_count( BoolFun const& f );

/// Pads f with fictitious variables up to `arity`.
BoolFun extend( BoolFun const& f, unsigned arity );

/// Hash usable for unordered containers.
struct BoolFunHash
{
  std::size_t operator()( BoolFun const& f ) const noexcept;
};

} // namespace clonelab
