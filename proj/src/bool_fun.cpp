#include <clonelab/bool_fun.hpp>
#include <clonelab/error.hpp>

#include <algorithm>
#include <bit>
#include <charconv>

namespace clonelab
{

namespace
{

constexpr uint64_t kVarMasks[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull };

std::size_t word_count( unsigned arity )
{
  return arity <= 6 ? 1u : std::size_t( 1 ) << ( arity - 6 );
}

uint64_t reverse_bits( uint64_t x )
{
  x = ( ( x >> 1 ) & 0x5555555555555555ull ) | ( ( x & 0x5555555555555555ull ) << 1 );
  x = ( ( x >> 2 ) & 0x3333333333333333ull ) | ( ( x & 0x3333333333333333ull ) << 2 );
  x = ( ( x >> 4 ) & 0x0F0F0F0F0F0F0F0Full ) | ( ( x & 0x0F0F0F0F0F0F0F0Full ) << 4 );
  x = ( ( x >> 8 ) & 0x00FF00FF00FF00FFull ) | ( ( x & 0x00FF00FF00FF00FFull ) << 8 );
  x = ( ( x >> 16 ) & 0x0000FFFF0000FFFFull ) | ( ( x & 0x0000FFFF0000FFFFull ) << 16 );
  return ( x >> 32 ) | ( x << 32 );
}

void check_arity( unsigned arity )
{
  if ( arity == 0 )
    throw InputError( "Boolean functions must have arity >= 1" );
  if ( arity > kMaxArity )
    throw CapacityError( "arity " + std::to_string( arity ) + " exceeds the truth-table cap of " +
                         std::to_string( kMaxArity ) );
}

} // namespace

BoolFun::BoolFun() : arity_( 1 ), words_( 1, 0 ) {}

BoolFun::BoolFun( unsigned arity ) : arity_( arity )
{
  check_arity( arity );
  words_.assign( word_count( arity ), 0 );
}

BoolFun BoolFun::constant( unsigned arity, bool value )
{
  BoolFun f( arity );
  if ( value )
  {
    std::fill( f.words_.begin(), f.words_.end(), ~uint64_t( 0 ) );
    f.mask_tail();
  }
  return f;
}

BoolFun BoolFun::projection( unsigned arity, unsigned index )
{
  if ( index >= arity )
    throw InputError( "projection index " + std::to_string( index ) + " out of range for arity " +
                      std::to_string( arity ) );
  BoolFun f( arity );
  if ( index < 6 )
  {
    std::fill( f.words_.begin(), f.words_.end(), kVarMasks[index] );
    f.mask_tail();
  }
  else
  {
    for ( std::size_t w = 0; w < f.words_.size(); ++w )
      f.words_[w] = ( ( w >> ( index - 6 ) ) & 1u ) ? ~uint64_t( 0 ) : 0;
  }
  return f;
}

BoolFun BoolFun::from_bits( unsigned arity, uint64_t bits )
{
  if ( arity > 6 )
    throw InputError( "from_bits requires arity <= 6" );
  BoolFun f( arity );
  f.words_[0] = bits;
  f.mask_tail();
  return f;
}

uint64_t BoolFun::bits() const
{
  if ( arity_ > 6 )
    throw InputError( "bits() requires arity <= 6" );
  return words_[0];
}

void BoolFun::mask_tail() noexcept
{
  if ( arity_ < 6 )
    words_[0] &= ( uint64_t( 1 ) << ( uint64_t( 1 ) << arity_ ) ) - 1;
}

uint64_t BoolFun::count_ones() const noexcept
{
  uint64_t c = 0;
  for ( auto w : words_ )
    c += std::popcount( w );
  return c;
}

bool BoolFun::is_zero() const noexcept
{
  return std::all_of( words_.begin(), words_.end(), []( uint64_t w ) { return w == 0; } );
}

bool BoolFun::is_one() const noexcept
{
  return count_ones() == size();
}

BoolFun BoolFun::operator~() const
{
  BoolFun r = *this;
  for ( auto& w : r.words_ )
    w = ~w;
  r.mask_tail();
  return r;
}

BoolFun BoolFun::operator&( BoolFun const& o ) const
{
  if ( o.arity_ != arity_ )
    throw InputError( "arity mismatch in table operation" );
  BoolFun r = *this;
  for ( std::size_t i = 0; i < words_.size(); ++i )
    r.words_[i] &= o.words_[i];
  return r;
}

BoolFun BoolFun::operator|( BoolFun const& o ) const
{
  if ( o.arity_ != arity_ )
    throw InputError( "arity mismatch in table operation" );
  BoolFun r = *this;
  for ( std::size_t i = 0; i < words_.size(); ++i )
    r.words_[i] |= o.words_[i];
  return r;
}

BoolFun BoolFun::operator^( BoolFun const& o ) const
{
  if ( o.arity_ != arity_ )
    throw InputError( "arity mismatch in table operation" );
  BoolFun r = *this;
  for ( std::size_t i = 0; i < words_.size(); ++i )
    r.words_[i] ^= o.words_[i];
  return r;
}

bool BoolFun::operator<( BoolFun const& o ) const noexcept
{
  if ( arity_ != o.arity_ )
    return arity_ < o.arity_;
  return std::lexicographical_compare( words_.rbegin(), words_.rend(), o.words_.rbegin(), o.words_.rend() );
}

BoolFun BoolFun::parse( std::string_view text )
{
  auto colon = text.find( ':' );
  if ( colon == std::string_view::npos || colon == 0 )
    throw ParseError( "truth table must have the form arity:hex", 0 );
  unsigned arity = 0;
  auto [ptr, ec] = std::from_chars( text.data(), text.data() + colon, arity );
  if ( ec != std::errc() || ptr != text.data() + colon )
    throw ParseError( "invalid arity in truth table", 0 );
  BoolFun f( arity );
  auto hex = text.substr( colon + 1 );
  std::size_t const digits = arity >= 2 ? std::size_t( 1 ) << ( arity - 2 ) : 1u;
  if ( hex.size() != digits )
    throw ParseError( "truth table of arity " + std::to_string( arity ) + " needs " + std::to_string( digits ) +
                          " hex digits",
                      colon + 1 );
  for ( std::size_t i = 0; i < digits; ++i )
  {
    char c = hex[i];
    uint64_t v;
    if ( c >= '0' && c <= '9' )
      v = c - '0';
    else if ( c >= 'a' && c <= 'f' )
      v = c - 'a' + 10;
    else if ( c >= 'A' && c <= 'F' )
      v = c - 'A' + 10;
    else
      throw ParseError( "invalid hex digit", colon + 1 + i );
    if ( arity == 1 && v > 3 )
      throw ParseError( "hex digit too large for a unary table", colon + 1 + i );
    f.words_[( 4 * i ) >> 6] |= v << ( ( 4 * i ) & 63 );
  }
  return f;
}

std::string BoolFun::to_string() const
{
  static char const* hexd = "0123456789abcdef";
  std::size_t const digits = arity_ >= 2 ? std::size_t( 1 ) << ( arity_ - 2 ) : 1u;
  std::string s = std::to_string( arity_ ) + ":";
  s.reserve( s.size() + digits );
  for ( std::size_t i = 0; i < digits; ++i )
    s.push_back( hexd[( words_[( 4 * i ) >> 6] >> ( ( 4 * i ) & 63 ) ) & 0xf] );
  return s;
}

BoolFun dual( BoolFun const& f )
{
  BoolFun g( f.arity() );
  if ( f.arity() >= 6 )
  {
    auto const& src = f.words();
    auto& dst = g.words();
    std::size_t const n = src.size();
    for ( std::size_t j = 0; j < n; ++j )
      dst[j] = ~reverse_bits( src[n - 1 - j] );
  }
  else
  {
    uint64_t const top = f.size() - 1;
    for ( uint64_t a = 0; a <= top; ++a )
      g.set( a, !f.get( top - a ) );
  }
  return g;
}

bool pointwise_leq( BoolFun const& f, BoolFun const& g )
{
  if ( f.arity() != g.arity() )
    throw InputError( "arity mismatch in pointwise comparison" );
  for ( std::size_t i = 0; i < f.words().size(); ++i )
  {
    if ( f.words()[i] & ~g.words()[i] )
      return false;
  }
  return true;
}

bool depends_on( BoolFun const& f, unsigned i )
{
  if ( i >= f.arity() )
    return false;
  auto const& w = f.words();
  if ( i < 6 )
  {
    uint64_t const lo = ~kVarMasks[i];
    unsigned const s = 1u << i;
    for ( auto x : w )
    {
      if ( ( ( x >> s ) ^ x ) & lo )
        return true;
    }
    return false;
  }
  std::size_t const step = std::size_t( 1 ) << ( i - 6 );
  for ( std::size_t j = 0; j < w.size(); ++j )
  {
    if ( !( j & step ) && w[j] != w[j + step] )
      return true;
  }
  return false;
}

unsigned essential_count( BoolFun const& f )
{
  unsigned c = 0;
  for ( unsigned i = 0; i < f.arity(); ++i )
    c += depends_on( f, i );
  return c;
}

BoolFun extend( BoolFun const& f, unsigned arity )
{
  if ( arity < f.arity() )
    throw InputError( "cannot shrink arity" );
  if ( arity == f.arity() )
    return f;
  BoolFun g( arity );
  uint64_t const mask = f.size() - 1;
  if ( f.arity() >= 6 )
  {
    std::size_t const n = f.words().size();
    for ( std::size_t j = 0; j < g.words().size(); ++j )
      g.words()[j] = f.words()[j % n];
  }
  else
  {
    for ( uint64_t a = 0; a < g.size(); ++a )
      g.set( a, f.get( a & mask ) );
  }
  return g;
}

std::size_t BoolFunHash::operator()( BoolFun const& f ) const noexcept
{
  std::size_t h = f.arity() * 0x9E3779B97F4A7C15ull;
  for ( auto w : f.words() )
    h ^= std::hash<uint64_t>{}( w ) + 0x9E3779B97F4A7C15ull + ( h << 6 ) + ( h >> 2 );
  return h;
}

} // namespace clonelab
