#include <clonelab/error.hpp>
#include <clonelab/relations.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace clonelab
{

std::string level_to_string( Level l )
{
  return l == kInfinite ? std::string( "inf" ) : std::to_string( l );
}

Level level_from_string( std::string_view s )
{
  if ( s == "inf" || s == "∞" || s == "INF" )
    return kInfinite;
  if ( s.empty() || s.size() > 9 || !std::all_of( s.begin(), s.end(), []( char c ) { return c >= '0' && c <= '9'; } ) )
    throw InputError( "invalid level '" + std::string( s ) + "'" );
  return Level( std::stoul( std::string( s ) ) );
}

std::string RelationId::to_string() const
{
  switch ( tag )
  {
  case RelTag::LE:
    return "LE";
  case RelTag::AFF:
    return "AFF";
  case RelTag::GR_NEG:
    return "GR_NEG";
  case RelTag::GR_AND:
    return "GR_AND";
  case RelTag::GR_OR:
    return "GR_OR";
  case RelTag::UNARY3:
    return "UNARY3";
  case RelTag::R0:
    return "R0(" + std::to_string( m ) + ")";
  case RelTag::R1:
    return "R1(" + std::to_string( m ) + ")";
  }
  return "?";
}

Relation::Relation( unsigned arity, std::vector<uint64_t> const& members ) : members_( arity )
{
  for ( auto c : members )
  {
    if ( c >= members_.size() )
      throw InputError( "relation member out of range" );
    members_.set( c, true );
  }
}

Relation Relation::parse( std::string_view text )
{
  return Relation( BoolFun::parse( text ) );
}

std::vector<uint64_t> Relation::members() const
{
  std::vector<uint64_t> out;
  for ( uint64_t c = 0; c < members_.size(); ++c )
  {
    if ( members_.get( c ) )
      out.push_back( c );
  }
  return out;
}

Relation Relation::dual() const
{
  BoolFun d( arity() );
  uint64_t const top = members_.size() - 1;
  for ( uint64_t c = 0; c <= top; ++c )
  {
    if ( members_.get( c ) )
      d.set( top - c, true );
  }
  return Relation( d );
}

Relation standard_relation( RelationId id )
{
  switch ( id.tag )
  {
  case RelTag::LE:
    return Relation( 2, { 0b00, 0b10, 0b11 } );
  case RelTag::AFF:
    return Relation( BoolFun::from_predicate( 4, []( uint64_t c ) { return std::popcount( c ) % 2 == 0; } ) );
  case RelTag::GR_NEG:
    return Relation( 2, { 0b01, 0b10 } );
  case RelTag::GR_AND:
    return Relation( BoolFun::from_predicate( 3, []( uint64_t c ) {
      return ( ( c >> 2 ) & 1 ) == ( ( c & 1 ) & ( ( c >> 1 ) & 1 ) );
    } ) );
  case RelTag::GR_OR:
    return Relation( BoolFun::from_predicate( 3, []( uint64_t c ) {
      return ( ( c >> 2 ) & 1 ) == ( ( c & 1 ) | ( ( c >> 1 ) & 1 ) );
    } ) );
  case RelTag::UNARY3:
    return Relation( BoolFun::from_predicate( 3, []( uint64_t c ) {
      auto z = ( c >> 2 ) & 1;
      return z == ( c & 1 ) || z == ( ( c >> 1 ) & 1 );
    } ) );
  case RelTag::R0:
  case RelTag::R1:
  {
    if ( id.m == 0 )
      throw RangeError( "arm relations need m >= 1" );
    unsigned const m = id.m;
    uint64_t const full = ( m >= 64 ) ? ~uint64_t( 0 ) : ( uint64_t( 1 ) << m ) - 1;
    if ( id.tag == RelTag::R0 )
      return Relation( BoolFun::from_predicate( m, [full]( uint64_t c ) { return c != full; } ) );
    return Relation( BoolFun::from_predicate( m, []( uint64_t c ) { return c != 0; } ) );
  }
  }
  throw InternalError( "unknown relation tag" );
}

std::vector<RelationId> family_Rn( unsigned n )
{
  std::vector<RelationId> rs = { { RelTag::LE }, { RelTag::AFF }, { RelTag::GR_NEG },
                                 { RelTag::GR_AND }, { RelTag::GR_OR }, { RelTag::UNARY3 } };
  for ( unsigned m = 1; m <= n; ++m )
  {
    rs.push_back( { RelTag::R0, m } );
    rs.push_back( { RelTag::R1, m } );
  }
  return rs;
}

uint64_t WitnessMatrix::column( unsigned col ) const
{
  uint64_t c = 0;
  for ( unsigned j = 0; j < rows; ++j )
    c |= uint64_t( at( j, col ) ) << j;
  return c;
}

std::string WitnessMatrix::to_string() const
{
  std::ostringstream os;
  for ( unsigned j = 0; j < rows; ++j )
  {
    for ( unsigned i = 0; i < cols; ++i )
      os << ( i ? " " : "" ) << at( j, i );
    os << "\n";
  }
  return os.str();
}

std::string WitnessMatrix::to_inline() const
{
  std::ostringstream os;
  for ( unsigned j = 0; j < rows; ++j )
  {
    if ( j )
      os << " / ";
    for ( unsigned i = 0; i < cols; ++i )
      os << ( i ? " " : "" ) << at( j, i );
  }
  return os.str();
}

bool verify_witness( BoolFun const& f, Relation const& r, WitnessMatrix const& w )
{
  if ( w.cols != f.arity() || w.rows != r.arity() || w.row_bits.size() != w.rows )
    return false;
  for ( unsigned i = 0; i < w.cols; ++i )
  {
    if ( !r.contains( w.column( i ) ) )
      return false;
  }
  uint64_t image = 0;
  for ( unsigned j = 0; j < w.rows; ++j )
    image |= uint64_t( f.get( w.row_bits[j] ) ) << j;
  return !r.contains( image );
}

namespace
{

WitnessMatrix make_matrix( unsigned cols, std::vector<uint64_t> rows )
{
  WitnessMatrix w;
  w.rows = unsigned( rows.size() );
  w.cols = cols;
  w.row_bits = std::move( rows );
  return w;
}

uint64_t full_mask( unsigned n )
{
  return n >= 64 ? ~uint64_t( 0 ) : ( uint64_t( 1 ) << n ) - 1;
}

/* LE: neighbour comparison. */
std::optional<WitnessMatrix> refute_le( BoolFun const& f )
{
  unsigned const n = f.arity();
  uint64_t const size = f.size();
  for ( unsigned i = 0; i < n; ++i )
  {
    uint64_t const e = uint64_t( 1 ) << i;
    if ( i < 6 && n >= 6 )
    {
      static constexpr uint64_t lo[6] = { 0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
                                          0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull };
      auto const& w = f.words();
      for ( std::size_t j = 0; j < w.size(); ++j )
      {
        uint64_t bad = w[j] & lo[i] & ~( w[j] >> e );
        if ( bad )
        {
          uint64_t a = ( uint64_t( j ) << 6 ) | uint64_t( std::countr_zero( bad ) );
          return make_matrix( n, { a, a | e } );
        }
      }
      continue;
    }
    if ( i >= 6 )
    {
      auto const& w = f.words();
      std::size_t const step = std::size_t( 1 ) << ( i - 6 );
      for ( std::size_t j = 0; j < w.size(); ++j )
      {
        if ( j & step )
          continue;
        uint64_t bad = w[j] & ~w[j + step];
        if ( bad )
        {
          uint64_t a = ( uint64_t( j ) << 6 ) | uint64_t( std::countr_zero( bad ) );
          return make_matrix( n, { a, a | e } );
        }
      }
      continue;
    }
    for ( uint64_t a = 0; a < size; ++a )
    {
      if ( !( a & e ) && f.get( a ) && !f.get( a | e ) )
        return make_matrix( n, { a, a | e } );
    }
  }
  return std::nullopt;
}

/* AFF: compare with the affine interpolant through 0 and the unit vectors. */
std::optional<WitnessMatrix> refute_aff( BoolFun const& f )
{
  unsigned const n = f.arity();
  bool const beta = f.get( 0 );
  BoolFun g = BoolFun::constant( n, beta );
  for ( unsigned i = 0; i < n; ++i )
  {
    if ( f.get( uint64_t( 1 ) << i ) != beta )
      g = g ^ BoolFun::projection( n, i );
  }
  BoolFun diff = f ^ g;
  if ( diff.is_zero() )
    return std::nullopt;
  uint64_t best = 0;
  int best_w = 1 << 30;
  for ( std::size_t j = 0; j < diff.words().size(); ++j )
  {
    uint64_t w = diff.words()[j];
    while ( w )
    {
      uint64_t a = ( uint64_t( j ) << 6 ) | uint64_t( std::countr_zero( w ) );
      w &= w - 1;
      int pc = std::popcount( a );
      if ( pc < best_w )
      {
        best_w = pc;
        best = a;
      }
    }
  }
  uint64_t const e = best & ( ~best + 1 );
  return make_matrix( n, { best ^ e, e, 0, best } );
}

std::optional<WitnessMatrix> refute_neg( BoolFun const& f )
{
  BoolFun d = dual( f );
  BoolFun diff = f ^ d;
  if ( diff.is_zero() )
    return std::nullopt;
  for ( std::size_t j = 0; j < diff.words().size(); ++j )
  {
    if ( diff.words()[j] )
    {
      uint64_t a = ( uint64_t( j ) << 6 ) | uint64_t( std::countr_zero( diff.words()[j] ) );
      return make_matrix( f.arity(), { a, full_mask( f.arity() ) ^ a } );
    }
  }
  return std::nullopt;
}

/* GR_AND: f is constant or a conjunction of variables; rows a, b, a&b. */
std::optional<WitnessMatrix> refute_and( BoolFun const& f )
{
  unsigned const n = f.arity();
  uint64_t const one = full_mask( n );
  if ( f.is_constant() )
    return std::nullopt;
  if ( !f.get( one ) )
  {
    for ( uint64_t a = 0;; ++a )
    {
      if ( f.get( a ) )
        return make_matrix( n, { a, one, a } );
    }
  }
  BoolFun g = BoolFun::constant( n, true );
  std::vector<unsigned> in;
  for ( unsigned i = 0; i < n; ++i )
  {
    if ( !f.get( one ^ ( uint64_t( 1 ) << i ) ) )
    {
      g = g & BoolFun::projection( n, i );
      in.push_back( i );
    }
  }
  BoolFun diff = f ^ g;
  if ( diff.is_zero() )
    return std::nullopt;
  uint64_t x = 0;
  for ( std::size_t j = 0; j < diff.words().size(); ++j )
  {
    if ( diff.words()[j] )
    {
      x = ( uint64_t( j ) << 6 ) | uint64_t( std::countr_zero( diff.words()[j] ) );
      break;
    }
  }
  if ( f.get( x ) )
  {
    for ( auto i : in )
    {
      if ( !( ( x >> i ) & 1u ) )
      {
        uint64_t b = one ^ ( uint64_t( 1 ) << i );
        return make_matrix( n, { x, b, x & b } );
      }
    }
    throw InternalError( "conjunction check lost its witness" );
  }
  uint64_t y = one;
  for ( unsigned i = 0; i < n; ++i )
  {
    if ( ( x >> i ) & 1u )
      continue;
    uint64_t b = one ^ ( uint64_t( 1 ) << i );
    if ( !f.get( y & b ) )
      return make_matrix( n, { y, b, y & b } );
    y &= b;
  }
  throw InternalError( "conjunction check lost its witness" );
}

std::optional<WitnessMatrix> refute_or( BoolFun const& f )
{
  auto w = refute_and( dual( f ) );
  if ( !w )
    return std::nullopt;
  uint64_t const one = full_mask( f.arity() );
  for ( auto& r : w->row_bits )
    r ^= one;
  return w;
}

std::optional<WitnessMatrix> refute_unary( BoolFun const& f )
{
  unsigned const n = f.arity();
  if ( essential_count( f ) <= 1 )
    return std::nullopt;
  uint64_t const one = full_mask( n );
  uint64_t const size = f.size();
  for ( uint64_t a = 0; a < size; ++a )
  {
    if ( f.get( a ) == f.get( one ^ a ) )
    {
      for ( uint64_t c = 0; c < size; ++c )
      {
        if ( f.get( c ) != f.get( a ) )
          return make_matrix( n, { a, one ^ a, c } );
      }
    }
  }
  unsigned j = 0;
  while ( !depends_on( f, j ) )
    ++j;
  uint64_t const ej = uint64_t( 1 ) << j;
  uint64_t a = 0;
  while ( f.get( a ) == f.get( a ^ ej ) )
    ++a;
  uint64_t const b = ( one ^ a ) ^ ej;
  for ( uint64_t c = 0; c < size; ++c )
  {
    if ( ( c & ej ) == ( a & ej ) && f.get( c ) != f.get( a ) )
      return make_matrix( n, { a, b, c } );
  }
  throw InternalError( "unary check lost its witness" );
}

/* ---- arm levels ---------------------------------------------------- */

using boost::multiprecision::cpp_int;

constexpr uint64_t kPrime = ( uint64_t( 1 ) << 61 ) - 1;

uint64_t mulmod( uint64_t a, uint64_t b )
{
  unsigned __int128 p = (unsigned __int128)a * b;
  uint64_t lo = uint64_t( p & kPrime ) + uint64_t( p >> 61 );
  return lo >= kPrime ? lo - kPrime : lo;
}

uint64_t powmod( uint64_t a, unsigned e )
{
  uint64_t r = 1;
  while ( e )
  {
    if ( e & 1u )
      r = mulmod( r, a );
    a = mulmod( a, a );
    e >>= 1;
  }
  return r;
}

/*
 * Covering data for alpha = 0. D is the down-closed family of zero sets of
 * f^{-1}(1); a subset U of the variables is covered by j members of D iff
 * N_j(U) = sum_{Y subset U} (-1)^{|U|-|Y|} z(Y)^j > 0, where z(Y) counts
 * the members of D inside Y.
 */
struct Cover
{
  unsigned n;
  BoolFun h;
  std::vector<uint32_t> z;

  explicit Cover( BoolFun const& f ) : n( f.arity() ), h( f )
  {
    auto& w = h.words();
    for ( unsigned i = 0; i < n; ++i )
    {
      if ( i < 6 )
      {
        static constexpr uint64_t lo[6] = { 0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
                                            0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull };
        for ( auto& x : w )
          x |= ( x & lo[i] ) << ( 1u << i );
        h.mask_tail();
      }
      else
      {
        std::size_t const step = std::size_t( 1 ) << ( i - 6 );
        for ( std::size_t j = 0; j < w.size(); ++j )
        {
          if ( !( j & step ) )
            w[j + step] |= w[j];
        }
      }
    }
    // D(X) = h(~X)
    uint64_t const size = f.size();
    uint64_t const top = size - 1;
    z.assign( size, 0 );
    for ( uint64_t x = 0; x < size; ++x )
      z[x] = h.get( top ^ x ) ? 1u : 0u;
    for ( unsigned i = 0; i < n; ++i )
    {
      uint64_t const e = uint64_t( 1 ) << i;
      for ( uint64_t y = 0; y < size; ++y )
      {
        if ( y & e )
          z[y] += z[y ^ e];
      }
    }
  }

  /// N_j(U) mod p.
  uint64_t count_mod( uint64_t u, unsigned j ) const
  {
    unsigned const pu = unsigned( std::popcount( u ) );
    uint64_t pos = 0, neg = 0;
    uint64_t y = u;
    while ( true )
    {
      uint64_t v = powmod( z[y], j );
      if ( ( pu - unsigned( std::popcount( y ) ) ) % 2 == 0 )
        pos = ( pos + v ) % kPrime;
      else
        neg = ( neg + v ) % kPrime;
      if ( y == 0 )
        break;
      y = ( y - 1 ) & u;
    }
    return ( pos + kPrime - neg ) % kPrime;
  }

  cpp_int count_exact( uint64_t u, unsigned j ) const
  {
    unsigned const pu = unsigned( std::popcount( u ) );
    cpp_int s = 0;
    uint64_t y = u;
    while ( true )
    {
      cpp_int v = boost::multiprecision::pow( cpp_int( z[y] ), j );
      if ( ( pu - unsigned( std::popcount( y ) ) ) % 2 == 0 )
        s += v;
      else
        s -= v;
      if ( y == 0 )
        break;
      y = ( y - 1 ) & u;
    }
    return s;
  }

  bool coverable( uint64_t u, unsigned j ) const
  {
    if ( u == 0 )
      return true;
    if ( j == 0 )
      return false;
    if ( count_mod( u, j ) != 0 )
      return true;
    return count_exact( u, j ) > 0;
  }

  /// Minimum number of members of D covering all variables (assumes it exists and exceeds 1).
  unsigned min_cover() const
  {
    uint64_t const size = uint64_t( 1 ) << n;
    std::vector<int64_t> coef( size + 1, 0 );
    for ( uint64_t y = 0; y < size; ++y )
      coef[z[y]] += ( ( n - unsigned( std::popcount( y ) ) ) % 2 == 0 ) ? 1 : -1;
    std::vector<std::pair<uint64_t, int64_t>> terms;
    for ( uint64_t v = 0; v <= size; ++v )
    {
      if ( coef[v] )
        terms.emplace_back( v, coef[v] );
    }
    auto exact = [&]( unsigned j ) {
      cpp_int s = 0;
      for ( auto [v, c] : terms )
        s += cpp_int( c ) * boost::multiprecision::pow( cpp_int( v ), j );
      return s;
    };
    std::vector<uint64_t> pw( terms.size(), 1 );
    for ( std::size_t i = 0; i < terms.size(); ++i )
      pw[i] = terms[i].first % kPrime;
    for ( unsigned j = 2; j <= n; ++j )
    {
      uint64_t pos = 0, neg = 0;
      for ( std::size_t i = 0; i < terms.size(); ++i )
      {
        pw[i] = mulmod( pw[i], terms[i].first % kPrime );
        uint64_t c = uint64_t( terms[i].second < 0 ? -terms[i].second : terms[i].second ) % kPrime;
        uint64_t t = mulmod( pw[i], c );
        if ( terms[i].second > 0 )
          pos = ( pos + t ) % kPrime;
        else
          neg = ( neg + t ) % kPrime;
      }
      if ( pos != neg )
      {
        // j covers; confirm that j - 1 does not, which settles all smaller counts.
        if ( j == 2 || exact( j - 1 ) == 0 )
          return j;
        break;
      }
    }
    for ( unsigned j = 2; j <= n; ++j )
    {
      if ( exact( j ) > 0 )
        return j;
    }
    throw InternalError( "no cover found although the variables are not bounded" );
  }
};

uint64_t and_of_ones( BoolFun const& f, bool& any )
{
  uint64_t acc = full_mask( f.arity() );
  any = false;
  auto const& w = f.words();
  for ( std::size_t j = 0; j < w.size(); ++j )
  {
    uint64_t x = w[j];
    while ( x )
    {
      acc &= ( uint64_t( j ) << 6 ) | uint64_t( std::countr_zero( x ) );
      x &= x - 1;
      any = true;
      if ( acc == 0 )
        return 0;
    }
  }
  return acc;
}

Level arm_level0( BoolFun const& f )
{
  if ( f.get( 0 ) )
    return 0;
  bool any = false;
  if ( and_of_ones( f, any ) != 0 || !any )
    return kInfinite;
  if ( f.arity() < 2 )
    return kInfinite;
  Cover c( f );
  return c.min_cover() - 1;
}

/// m rows of f^{-1}(1) whose AND is zero, using the fewest distinct rows.
std::vector<uint64_t> cover_rows( BoolFun const& f, unsigned m )
{
  unsigned const n = f.arity();
  uint64_t const top = full_mask( n );
  if ( f.get( 0 ) )
    return std::vector<uint64_t>( m, 0 );
  Cover c( f );
  unsigned j = c.min_cover();
  if ( j > m )
    throw InternalError( "cover_rows called on a preserved arm relation" );
  // Minimal members of f^{-1}(1) have maximal zero sets.
  std::vector<uint64_t> minimal;
  for ( uint64_t a = 0; a <= top; ++a )
  {
    if ( !f.get( a ) )
      continue;
    bool is_min = true;
    uint64_t bits = a;
    while ( bits )
    {
      uint64_t e = bits & ( ~bits + 1 );
      bits ^= e;
      if ( c.h.get( a ^ e ) )
      {
        is_min = false;
        break;
      }
    }
    if ( is_min )
      minimal.push_back( a );
  }
  std::vector<uint64_t> rows;
  uint64_t u = top;
  while ( u )
  {
    uint64_t const e = u & ( ~u + 1 );
    std::vector<std::pair<int, uint64_t>> cands;
    for ( auto a : minimal )
    {
      if ( a & e )
        continue;
      uint64_t rest = u & a;
      cands.emplace_back( std::popcount( rest ), a );
    }
    std::stable_sort( cands.begin(), cands.end(), []( auto const& x, auto const& y ) { return x.first < y.first; } );
    bool found = false;
    for ( auto [pc, a] : cands )
    {
      if ( c.coverable( u & a, j - 1 ) )
      {
        rows.push_back( a );
        u &= a;
        --j;
        found = true;
        break;
      }
    }
    if ( !found )
      throw InternalError( "cover self-reduction failed" );
  }
  while ( rows.size() < m )
    rows.push_back( rows.back() );
  return rows;
}

std::optional<WitnessMatrix> refute_arm( BoolFun const& f, bool alpha, unsigned m )
{
  if ( alpha )
  {
    auto w = refute_arm( dual( f ), false, m );
    if ( !w )
      return std::nullopt;
    uint64_t const one = full_mask( f.arity() );
    for ( auto& r : w->row_bits )
      r ^= one;
    return w;
  }
  Level l = arm_level0( f );
  if ( l == kInfinite || l >= m )
    return std::nullopt;
  return make_matrix( f.arity(), cover_rows( f, m ) );
}

} // namespace

Level arm_level( BoolFun const& f, bool alpha )
{
  return alpha ? arm_level0( dual( f ) ) : arm_level0( f );
}

std::optional<unsigned> bounding_variable( BoolFun const& f, bool alpha )
{
  for ( unsigned i = 0; i < f.arity(); ++i )
  {
    BoolFun x = BoolFun::projection( f.arity(), i );
    if ( alpha ? pointwise_leq( x, f ) : pointwise_leq( f, x ) )
      return i;
  }
  return std::nullopt;
}

std::optional<WitnessMatrix> refute( BoolFun const& f, RelationId id )
{
  switch ( id.tag )
  {
  case RelTag::LE:
    return refute_le( f );
  case RelTag::AFF:
    return refute_aff( f );
  case RelTag::GR_NEG:
    return refute_neg( f );
  case RelTag::GR_AND:
    return refute_and( f );
  case RelTag::GR_OR:
    return refute_or( f );
  case RelTag::UNARY3:
    return refute_unary( f );
  case RelTag::R0:
  case RelTag::R1:
    if ( id.m == 0 )
      throw RangeError( "arm relations need m >= 1" );
    return refute_arm( f, id.tag == RelTag::R1, id.m );
  }
  throw InternalError( "unknown relation tag" );
}

bool preserves_specialized( BoolFun const& f, RelationId id )
{
  switch ( id.tag )
  {
  case RelTag::R0:
  case RelTag::R1:
  {
    if ( id.m == 0 )
      throw RangeError( "arm relations need m >= 1" );
    Level l = arm_level( f, id.tag == RelTag::R1 );
    return l == kInfinite || l >= id.m;
  }
  default:
    return !refute( f, id ).has_value();
  }
}

Preservation preserves( BoolFun const& f, Relation const& r, uint64_t budget )
{
  auto members = r.members();
  unsigned const n = f.arity();
  unsigned const k = r.arity();
  bool within = true;
  {
    long double tuples = 1;
    for ( unsigned i = 0; i < n; ++i )
      tuples *= (long double)members.size();
    within = tuples <= (long double)budget;
  }
  if ( !within )
  {
    std::vector<RelationId> candidates = { { RelTag::LE }, { RelTag::AFF }, { RelTag::GR_NEG },
                                           { RelTag::GR_AND }, { RelTag::GR_OR }, { RelTag::UNARY3 },
                                           { RelTag::R0, k }, { RelTag::R1, k } };
    for ( auto id : candidates )
    {
      if ( id.m > kMaxArity )
        continue;
      if ( standard_relation( id ) == r )
      {
        auto w = refute( f, id );
        return { !w.has_value(), w };
      }
    }
    throw CapacityError( "preservation check needs more than " + std::to_string( budget ) +
                         " matrices and the relation has no specialized checker" );
  }
  if ( members.empty() )
    return { true, std::nullopt };
  std::vector<std::size_t> idx( n, 0 );
  std::vector<uint64_t> rows( k );
  while ( true )
  {
    std::fill( rows.begin(), rows.end(), 0 );
    for ( unsigned i = 0; i < n; ++i )
    {
      uint64_t col = members[idx[i]];
      for ( unsigned j = 0; j < k; ++j )
        rows[j] |= ( ( col >> j ) & 1u ) << i;
    }
    uint64_t image = 0;
    for ( unsigned j = 0; j < k; ++j )
      image |= uint64_t( f.get( rows[j] ) ) << j;
    if ( !r.contains( image ) )
      return { false, make_matrix( n, rows ) };
    int pos = int( n ) - 1;
    while ( pos >= 0 && ++idx[pos] == members.size() )
    {
      idx[pos] = 0;
      --pos;
    }
    if ( pos < 0 )
      break;
  }
  return { true, std::nullopt };
}

} // namespace clonelab
