#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/thresholds.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace clonelab
{

CircuitDag theta_circuit( unsigned n, unsigned t )
{
  if ( n == 0 )
    throw RangeError( "threshold arity must be >= 1" );
  if ( t > n + 1 )
    throw RangeError( "threshold t must satisfy 0 <= t <= n+1" );
  CircuitDag c( n );
  if ( t == 0 || t == n + 1 )
  {
    auto x = c.add_var( 0 );
    auto nx = c.add_gate( "NOT", { x } );
    c.set_output( c.add_gate( t == 0 ? "OR" : "AND", { x, nx } ) );
    return c;
  }

  // a line is a node id, or a constant encoded as kZero / kOne
  constexpr int64_t kZero = -1;
  constexpr int64_t kOne = -2;
  std::size_t size = std::bit_ceil( std::size_t( n ) );
  std::vector<int64_t> line( size, kZero );
  for ( unsigned i = 0; i < n; ++i )
    line[i] = c.add_var( i );

  auto compare = [&]( std::size_t i, std::size_t j ) {
    int64_t a = line[i], b = line[j];
    int64_t hi, lo;
    if ( a == kZero || b == kZero )
    {
      hi = a == kZero ? b : a;
      lo = kZero;
    }
    else if ( a == kOne || b == kOne )
    {
      hi = kOne;
      lo = a == kOne ? b : a;
    }
    else
    {
      hi = c.add_gate( "OR", { uint32_t( a ), uint32_t( b ) } );
      lo = c.add_gate( "AND", { uint32_t( a ), uint32_t( b ) } );
    }
    line[i] = hi;
    line[j] = lo;
  };

  for ( std::size_t p = 1; p < size; p *= 2 )
  {
    for ( std::size_t k = p; k >= 1; k /= 2 )
    {
      for ( std::size_t j = k % p; j + k < size; j += 2 * k )
      {
        for ( std::size_t i = 0; i < k && i + j + k < size; ++i )
        {
          if ( ( i + j ) / ( 2 * p ) == ( i + j + k ) / ( 2 * p ) )
            compare( i + j, i + j + k );
        }
      }
      if ( k == 1 )
        break;
    }
  }
  if ( line[t - 1] < 0 )
    throw InternalError( "sorting network output folded to a constant" );
  c.set_output( uint32_t( line[t - 1] ) );
  c = c.pruned();
  if ( n <= 16 && truth_table( c, builtin_basis( "DeMorgan" ) ) != theta( n, t ) )
    throw InternalError( "threshold circuit does not compute theta" );
  return c;
}

CloneDesc threshold_clone( unsigned n, unsigned t )
{
  if ( n == 0 )
    throw RangeError( "threshold arity must be >= 1" );
  if ( t > n + 1 )
    throw RangeError( "threshold t must satisfy 0 <= t <= n+1" );
  if ( t == 1 && n == 1 )
    return bottom();
  if ( t == 0 )
    return named( "UP_1" );
  if ( t == 1 )
    return named( "VP" );
  if ( t == n + 1 )
    return named( "UP_0" );
  if ( t == n )
    return named( "EP" );
  if ( 2 * t <= n )
    return canonicalize( { kLE, 1, Level( ( n - 1 ) / ( t - 1 ) ) } );
  if ( 2 * t == n + 1 )
    return named( "DM" );
  return canonicalize( { kLE, Level( ( t + ( n - t ) - 1 ) / ( n - t ) ), 1 } );
}

double amplify( unsigned k, double x )
{
  return std::pow( x, double( k ) ) * ( double( k + 1 ) - double( k ) * x );
}

namespace
{

void check_k( unsigned k )
{
  if ( k < 3 )
    throw RangeError( "amplifier needs k >= 3" );
}

/// 1 - f(1 - q), evaluated without cancellation.
double amplify_upper( unsigned k, double q )
{
  return -std::expm1( double( k ) * std::log1p( -q ) + std::log1p( double( k ) * q ) );
}

} // namespace

double sigma( unsigned k )
{
  check_k( k );
  double lo = 0.5, hi = 1.0;
  for ( int i = 0; i < 200 && hi - lo > 0; ++i )
  {
    double mid = 0.5 * ( lo + hi );
    if ( mid == lo || mid == hi )
      break;
    if ( amplify( k, mid ) - mid < 0 )
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * ( lo + hi );
}

double recurrence( unsigned k, double p0, unsigned d )
{
  if ( !( p0 >= 0.0 && p0 <= 1.0 ) )
    throw RangeError( "initial probability must lie in [0,1]" );
  double p = p0;
  for ( unsigned i = 0; i < d; ++i )
    p = amplify( k, p );
  return p;
}

AmplifierParams amplifier_params( unsigned k )
{
  check_k( k );
  AmplifierParams a{};
  a.k = k;
  a.sigma = sigma( k );
  double const s = a.sigma;
  double const slope = double( k ) * double( k + 1 ) * std::pow( s, double( k - 1 ) ) * ( 1 - s );
  a.gamma0 = 0.5 * ( 1.0 + slope );
  double eps = std::min( s, 1 - s );
  auto holds = [&]( double e ) {
    for ( int i = -1000; i <= 1000; ++i )
    {
      double x = s + e * i / 1000.0;
      if ( std::abs( amplify( k, x ) - s ) < a.gamma0 * std::abs( x - s ) )
        return false;
    }
    return true;
  };
  while ( !holds( eps ) )
    eps *= 0.5;
  a.epsilon0 = eps;
  a.gamma1 = double( k ) * double( k + 1 );
  a.epsilon1 = 0.5 / a.gamma1;
  return a;
}

namespace
{

using boost::multiprecision::cpp_int;

/// Sign of x^k - (k+1) t^(k-1) x + k t^k.
int scan_sign( unsigned k, uint64_t t, uint64_t x, bool wide )
{
  if ( !wide )
  {
    using i128 = __int128;
    i128 xk = 1, tk1 = 1;
    for ( unsigned i = 0; i < k; ++i )
      xk *= i128( x );
    for ( unsigned i = 0; i + 1 < k; ++i )
      tk1 *= i128( t );
    i128 v = xk - i128( k + 1 ) * tk1 * i128( x ) + i128( k ) * tk1 * i128( t );
    return v > 0 ? 1 : v < 0 ? -1 : 0;
  }
  cpp_int xk = 1, tk1 = 1;
  for ( unsigned i = 0; i < k; ++i )
    xk *= x;
  for ( unsigned i = 0; i + 1 < k; ++i )
    tk1 *= t;
  cpp_int v = xk - cpp_int( k + 1 ) * tk1 * x + cpp_int( k ) * tk1 * t;
  return v.sign();
}

} // namespace

uint64_t pick_N( unsigned k, uint64_t t, uint64_t n )
{
  check_k( k );
  if ( n == 0 || t > n )
    throw RangeError( "pick_N needs 1 <= t <= n" );
  double const s = sigma( k );
  if ( !( s * double( n ) < double( t ) ) )
    throw RangeError( "pick_N needs sigma_k * n < t" );
  if ( t > ( uint64_t( 1 ) << 40 ) )
    throw RangeError( "t too large" );
  // the polynomial is t^k h(x/t); h is <= 0 on [1, 1/sigma] and > 0 beyond
  bool const wide = double( k ) * std::log2( 2.0 * double( t ) + 1.0 ) + std::log2( double( k ) + 2.0 ) + 4 >= 126;
  uint64_t lo = t, hi = 2 * t;
  while ( hi - lo > 1 )
  {
    uint64_t mid = lo + ( hi - lo ) / 2;
    if ( scan_sign( k, t, mid, wide ) <= 0 )
      lo = mid;
    else
      hi = mid;
  }
  uint64_t const N = lo;
  if ( N < n )
    throw InternalError( "pick_N produced N < n" );
  if ( uint64_t( std::ceil( s * double( N ) ) ) != t )
    throw InternalError( "pick_N postcondition ceil(sigma N) = t failed" );
  return N;
}

unsigned choose_depth( unsigned k, uint64_t N, unsigned n, unsigned e )
{
  check_k( k );
  if ( N == 0 )
    throw RangeError( "N must be positive" );
  if ( uint64_t( n ) + e > 1000 )
    throw RangeError( "n + e must be at most 1000" );
  double const s = sigma( k );
  auto const t = uint64_t( std::ceil( s * double( N ) ) );
  double const target = std::ldexp( 1.0, -int( n + e ) );
  double p = double( t - 1 ) / double( N );
  double q = 1.0 - double( t ) / double( N );
  for ( unsigned d = 0; d < 1'000'000; ++d )
  {
    if ( p <= target && q <= target )
      return d;
    p = amplify( k, p );
    q = amplify_upper( k, q );
  }
  throw InternalError( "choose_depth did not converge" );
}

RandomStream RandomStream::from_hex( std::string_view hex )
{
  RandomStream r;
  for ( std::size_t i = 0; i < hex.size(); ++i )
  {
    char c = hex[i];
    uint8_t v;
    if ( c >= '0' && c <= '9' )
      v = uint8_t( c - '0' );
    else if ( c >= 'a' && c <= 'f' )
      v = uint8_t( c - 'a' + 10 );
    else if ( c >= 'A' && c <= 'F' )
      v = uint8_t( c - 'A' + 10 );
    else
      throw ParseError( "invalid hex digit in random stream", i );
    r.nibbles_.push_back( v );
  }
  r.length_ = 4 * uint64_t( r.nibbles_.size() );
  return r;
}

namespace
{

uint64_t splitmix( uint64_t seed, uint64_t index )
{
  uint64_t z = seed + ( index + 1 ) * 0x9e3779b97f4a7c15ull;
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
  return z ^ ( z >> 31 );
}

} // namespace

RandomStream RandomStream::from_seed( uint64_t seed, uint64_t length )
{
  RandomStream r;
  r.seeded_ = true;
  r.seed_ = seed;
  r.length_ = length;
  return r;
}

bool RandomStream::next_bit()
{
  if ( cursor_ >= length_ )
    throw StreamExhausted( "random stream exhausted after " + std::to_string( length_ ) + " bits" );
  uint64_t const c = cursor_++;
  if ( seeded_ )
  {
    if ( c % 64 == 0 )
      word_ = splitmix( seed_, c / 64 );
    return ( word_ >> ( 63 - c % 64 ) ) & 1u;
  }
  return ( nibbles_[c / 4] >> ( 3 - c % 4 ) ) & 1u;
}

uint64_t RandomStream::next_bits( unsigned width )
{
  if ( width > 64 )
    throw RangeError( "at most 64 bits at a time" );
  uint64_t v = 0;
  for ( unsigned i = 0; i < width; ++i )
    v = ( v << 1 ) | uint64_t( next_bit() );
  return v;
}

uint64_t RandomStream::uniform( uint64_t bound )
{
  if ( bound == 0 )
    throw RangeError( "uniform needs a positive bound" );
  unsigned const width = bound == 1 ? 0 : unsigned( std::bit_width( bound - 1 ) );
  for ( ;; )
  {
    uint64_t v = next_bits( width );
    if ( v < bound )
      return v;
  }
}

namespace
{

std::string theta_gate_name( unsigned k )
{
  return "THETA_" + std::to_string( k + 1 ) + "_" + std::to_string( k );
}

Term and_gadget( unsigned k, Term const& x, Term const& y )
{
  std::vector<Term> args{ x, x };
  for ( unsigned i = 0; i + 1 < k; ++i )
    args.push_back( y );
  return Term::gate( theta_gate_name( k ), std::move( args ) );
}

/// At least k of the k+1 tables, word by word.
void theta_words( std::vector<uint64_t const*> const& in, std::size_t words, uint64_t* out )
{
  std::size_t const m = in.size();
  std::vector<uint64_t> suf( m + 1 );
  for ( std::size_t w = 0; w < words; ++w )
  {
    suf[m] = ~uint64_t( 0 );
    for ( std::size_t j = m; j-- > 0; )
      suf[j] = suf[j + 1] & in[j][w];
    uint64_t pre = ~uint64_t( 0 ), acc = 0;
    for ( std::size_t j = 0; j < m; ++j )
    {
      acc |= pre & suf[j + 1];
      pre &= in[j][w];
    }
    out[w] = acc;
  }
}

} // namespace

Term theta_and_term( unsigned k, unsigned n )
{
  check_k( k );
  if ( n == 0 )
    throw RangeError( "conjunction needs at least one variable" );
  std::vector<Term> level;
  for ( unsigned i = 0; i < n; ++i )
    level.push_back( Term::var( i ) );
  while ( level.size() > 1 )
  {
    std::vector<Term> next;
    for ( std::size_t i = 0; i + 1 < level.size(); i += 2 )
      next.push_back( and_gadget( k, level[i], level[i + 1] ) );
    if ( level.size() % 2 )
      next.push_back( level.back() );
    level = std::move( next );
  }
  return level[0];
}

std::string ThresholdFormula::gate_name() const
{
  return theta_gate_name( k );
}

Basis ThresholdFormula::basis() const
{
  return Basis( "THETA(" + std::to_string( k ) + ")", { Gate{ gate_name(), theta( k + 1, k ) } } );
}

Term ThresholdFormula::to_term() const
{
  std::optional<Term> pad;
  std::vector<Term> level;
  level.reserve( leaves.size() );
  for ( auto p : leaves )
  {
    if ( p < n )
      level.push_back( Term::var( p ) );
    else
    {
      if ( !pad )
        pad = theta_and_term( k, n );
      level.push_back( *pad );
    }
  }
  std::string const g = gate_name();
  while ( level.size() > 1 )
  {
    std::vector<Term> next;
    for ( std::size_t i = 0; i < level.size(); i += k + 1 )
      next.push_back( Term::gate( g, std::vector<Term>( level.begin() + i, level.begin() + i + k + 1 ) ) );
    level = std::move( next );
  }
  return level[0];
}

bool ThresholdFormula::eval_positions( std::vector<bool> const& a ) const
{
  if ( a.size() != N )
    throw InputError( "assignment must cover all N positions" );
  std::vector<uint8_t> level;
  level.reserve( leaves.size() );
  for ( auto p : leaves )
    level.push_back( a[p] );
  while ( level.size() > 1 )
  {
    std::vector<uint8_t> next;
    for ( std::size_t i = 0; i < level.size(); i += k + 1 )
    {
      unsigned ones = 0;
      for ( unsigned j = 0; j <= k; ++j )
        ones += level[i + j];
      next.push_back( ones >= k );
    }
    level = std::move( next );
  }
  return level[0];
}

BoolFun ThresholdFormula::truth_table() const
{
  if ( n > kMaxArity )
    throw CapacityError( "formula arity above " + std::to_string( kMaxArity ) );
  std::vector<BoolFun> vars;
  for ( unsigned i = 0; i < n; ++i )
    vars.push_back( BoolFun::projection( n, i ) );
  BoolFun all = BoolFun::constant( n, true );
  for ( auto const& v : vars )
    all = all & v;
  auto leaf = [&]( uint32_t p ) -> BoolFun const& { return p < n ? vars[p] : all; };
  if ( depth == 0 )
    return leaf( leaves[0] );

  std::size_t const words = all.words().size();
  unsigned const fan = k + 1;
  std::size_t const bottom = leaves.size() / fan;

  // memo of bottom gates by their sorted leaf multiset
  bool const pack = std::log2( double( N ) ) * fan < 62;
  std::unordered_map<uint64_t, BoolFun> memo;
  std::vector<BoolFun> level;
  level.reserve( bottom );
  std::vector<uint32_t> key( fan );
  std::vector<uint64_t const*> in( fan );
  for ( std::size_t g = 0; g < bottom; ++g )
  {
    std::copy( leaves.begin() + g * fan, leaves.begin() + ( g + 1 ) * fan, key.begin() );
    std::sort( key.begin(), key.end() );
    uint64_t code = 0;
    if ( pack )
    {
      for ( auto p : key )
        code = code * N + p;
      auto it = memo.find( code );
      if ( it != memo.end() )
      {
        level.push_back( it->second );
        continue;
      }
    }
    for ( unsigned j = 0; j < fan; ++j )
      in[j] = leaf( key[j] ).words().data();
    BoolFun out( n );
    theta_words( in, words, out.words().data() );
    if ( pack )
      memo.emplace( code, out );
    level.push_back( std::move( out ) );
  }
  while ( level.size() > 1 )
  {
    std::vector<BoolFun> next;
    next.reserve( level.size() / fan );
    for ( std::size_t i = 0; i < level.size(); i += fan )
    {
      for ( unsigned j = 0; j < fan; ++j )
        in[j] = level[i + j].words().data();
      BoolFun out( n );
      theta_words( in, words, out.words().data() );
      next.push_back( std::move( out ) );
    }
    level = std::move( next );
  }
  return level[0];
}

ThresholdFormula sample_threshold_tree( unsigned k, uint64_t N, unsigned n, unsigned depth, RandomStream& r )
{
  check_k( k );
  if ( n == 0 || N < n || N > ( uint64_t( 1 ) << 32 ) )
    throw RangeError( "tree needs 1 <= n <= N < 2^32" );
  double const leaves = std::pow( double( k + 1 ), double( depth ) );
  if ( leaves > double( 1u << 28 ) )
    throw CapacityError( "formula would have more than 2^28 leaves" );
  ThresholdFormula f;
  f.k = k;
  f.n = n;
  f.N = N;
  f.depth = depth;
  f.leaves.resize( std::size_t( leaves ) );
  for ( auto& p : f.leaves )
    p = uint32_t( r.uniform( N ) );
  return f;
}

ThresholdFormula random_threshold_formula( unsigned n, unsigned t, unsigned e, RandomStream& r, unsigned k,
                                           std::optional<unsigned> depth )
{
  check_k( k );
  uint64_t const N = pick_N( k, t, n );
  unsigned const d = depth ? *depth : choose_depth( k, N, n, e );
  return sample_threshold_tree( k, N, n, d, r );
}

} // namespace clonelab
