#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/fastpaths.hpp>

#include <bit>
#include <set>

namespace clonelab
{

Ambient ambient_from_string( std::string_view s )
{
  if ( s == "V" || s == "or" )
    return Ambient::V;
  if ( s == "E" || s == "and" )
    return Ambient::E;
  if ( s == "A" )
    return Ambient::A;
  if ( s == "DM" )
    return Ambient::DM;
  if ( s == "MT1" || s == "MT^∞_1" || s == "MT^inf_1" )
    return Ambient::MT1;
  if ( s == "MT0" || s == "MT^∞_0" || s == "MT^inf_0" )
    return Ambient::MT0;
  throw InputError( "unknown ambient clone '" + std::string( s ) + "' (expected V, E, A, DM, MT1 or MT0)" );
}

std::string to_string( Ambient a )
{
  switch ( a )
  {
  case Ambient::V:
    return "V";
  case Ambient::E:
    return "E";
  case Ambient::A:
    return "A";
  case Ambient::DM:
    return "DM";
  case Ambient::MT1:
    return "MT^∞_1";
  case Ambient::MT0:
    return "MT^∞_0";
  }
  return "?";
}

CloneDesc ambient_clone( Ambient a )
{
  return named( to_string( a ) );
}

namespace
{

constexpr unsigned kMaxEvalArity = 64;

struct Evaluator
{
  CircuitDag const& c;
  Basis const& basis;
  unsigned evaluations = 0;

  bool operator()( uint64_t a )
  {
    ++evaluations;
    return eval( c, basis, Assignment{ c.arity(), a } );
  }
  unsigned n() const { return c.arity(); }
  uint64_t ones() const { return n() == 64 ? ~uint64_t( 0 ) : ( uint64_t( 1 ) << n() ) - 1; }
};

std::string var_list( std::vector<unsigned> const& I )
{
  std::string s;
  for ( auto i : I )
    s += " x" + std::to_string( i );
  return s;
}

BoolFun fn( char const* name )
{
  return *builtin_function( name );
}

CloneDesc of( BoolFun const& f )
{
  return clone_of( { f } );
}

/// Identification from the designated points; nullopt when they contradict the ambient clone.
std::optional<Identification> identify_points( Evaluator& f, Ambient ambient )
{
  unsigned const n = f.n();
  uint64_t const one = f.ones();
  Identification id;
  switch ( ambient )
  {
  case Ambient::V:
  case Ambient::E:
  {
    bool const v = ambient == Ambient::V;
    // work on the dual for E
    uint64_t const base = v ? 0 : one;
    if ( f( base ) == v )
    {
      id.clone = of( BoolFun::constant( 1, v ) );
      id.form = v ? "constant 1" : "constant 0";
      break;
    }
    std::vector<unsigned> I;
    for ( unsigned i = 0; i < n; ++i )
    {
      if ( f( base ^ ( uint64_t( 1 ) << i ) ) == v )
        I.push_back( i );
    }
    if ( I.empty() )
    {
      id.clone = of( BoolFun::constant( 1, !v ) );
      id.form = v ? "constant 0" : "constant 1";
    }
    else if ( I.size() == 1 )
    {
      id.clone = bottom();
      id.form = "projection x" + std::to_string( I[0] );
    }
    else
    {
      id.clone = of( fn( v ? "OR" : "AND" ) );
      id.form = std::string( v ? "or" : "and" ) + var_list( I );
    }
    break;
  }
  case Ambient::A:
  {
    bool const beta = f( 0 );
    std::string alpha;
    unsigned m = 0;
    for ( unsigned i = 0; i < n; ++i )
    {
      bool a = f( uint64_t( 1 ) << i ) != beta;
      alpha += a ? '1' : '0';
      m += a;
    }
    unsigned const r = m <= 3 ? m : ( m % 2 ? 3 : 2 );
    if ( r == 0 )
      id.clone = of( BoolFun::constant( 1, beta ) );
    else
      id.clone = of( BoolFun::from_predicate(
          r, [&]( uint64_t a ) { return bool( ( std::popcount( a ) & 1 ) ^ unsigned( beta ) ); } ) );
    id.form = "affine " + alpha + " + " + ( beta ? "1" : "0" );
    break;
  }
  case Ambient::DM:
  {
    std::vector<unsigned> I;
    for ( unsigned i = 0; i < n; ++i )
    {
      if ( f( uint64_t( 1 ) << i ) )
        I.push_back( i );
    }
    if ( I.size() > 1 )
      return std::nullopt;
    if ( I.size() == 1 )
    {
      id.clone = bottom();
      id.form = "projection x" + std::to_string( I[0] );
    }
    else
    {
      id.clone = named( "DM" );
      id.form = "self-dual monotone, not a projection";
    }
    break;
  }
  case Ambient::MT1:
  case Ambient::MT0:
  {
    bool const up = ambient == Ambient::MT1;
    uint64_t const base = up ? 0 : one;
    if ( f( base ) == up )
    {
      id.clone = of( BoolFun::constant( 1, up ) );
      id.form = up ? "constant 1" : "constant 0";
      break;
    }
    std::vector<unsigned> I;
    uint64_t mask = 0;
    for ( unsigned i = 0; i < n; ++i )
    {
      if ( f( base ^ ( uint64_t( 1 ) << i ) ) == up )
      {
        I.push_back( i );
        mask |= uint64_t( 1 ) << i;
      }
    }
    if ( I.empty() )
      return std::nullopt;
    // one outside I for MT1 (zero inside), and dually
    uint64_t const probe = up ? ( one & ~mask ) : mask;
    if ( f( probe ) != up )
    {
      id.clone = I.size() == 1 ? bottom() : of( fn( up ? "OR" : "AND" ) );
      id.form = std::string( up ? "or" : "and" ) + var_list( I );
    }
    else
    {
      // x or (y and z), resp. x and (y or z)
      id.clone = of( up ? BoolFun::from_bits( 3, 0xea ) : BoolFun::from_bits( 3, 0xa8 ) );
      id.form = up ? "monotone, bounded below by a variable, not a disjunction"
                   : "monotone, bounded above by a variable, not a conjunction";
    }
    break;
  }
  }
  id.evaluations = f.evaluations;
  return id;
}

void require_gates_in( CircuitDag const& c, Basis const& basis, CloneDesc const& amb, std::string const& what )
{
  c.validate( basis );
  std::set<std::string> seen;
  for ( auto const& nd : c.nodes() )
  {
    if ( nd.is_var || !seen.insert( nd.gate ).second )
      continue;
    auto m = member( basis.at( nd.gate ).fun, amb );
    if ( !m.member )
      throw RefusalError( "gate " + nd.gate + " is not in " + what + ": it fails to preserve " +
                          m.separator->to_string() );
  }
}

} // namespace

Identification identify_restricted( CircuitDag const& c, Basis const& basis, Ambient ambient )
{
  if ( c.arity() > kMaxEvalArity )
    throw CapacityError( "fast paths evaluate circuits of arity at most 64" );
  require_gates_in( c, basis, ambient_clone( ambient ), to_string( ambient ) );
  Evaluator f{ c, basis };
  auto id = identify_points( f, ambient );
  if ( !id )
    throw InternalError( "evaluations contradict the ambient clone" );
  return *id;
}

namespace
{

Candidates candidates_T( std::vector<CircuitDag> const& F, Basis const& basis, bool up )
{
  Ambient const amb = up ? Ambient::MT1 : Ambient::MT0;
  CloneDesc const upper = named( up ? "PT^∞_1" : "PT^∞_0" );
  Candidates c;
  c.c0 = bottom();
  bool constant_side = false;
  for ( auto const& g : F )
  {
    Evaluator e{ g, basis };
    uint64_t const base = up ? 0 : e.ones();
    // for T1, g(0) = 1 puts [F] outside P_0; the fallback must keep this
    if ( e( base ) == up )
      constant_side = true;
    auto id = identify_points( e, amb );
    if ( !id )
    {
      c.fallback = true;
      continue;
    }
    if ( !c.fallback )
      c.c0 = join( c.c0, id->clone );
  }
  if ( c.fallback )
    c.c0 = constant_side ? of( BoolFun::constant( 1, up ) ) : bottom();
  c.c1 = join( c.c0, upper );
  return c;
}

Candidates candidates_D( std::vector<CircuitDag> const& F, Basis const& basis )
{
  Candidates c;
  bool some_one = false;
  bool spread = false;
  bool m_zero = false, m_many = false;
  for ( auto const& g : F )
  {
    Evaluator e{ g, basis };
    bool const g0 = e( 0 );
    unsigned diff = 0, m = 0;
    for ( unsigned i = 0; i < e.n(); ++i )
    {
      bool const gi = e( uint64_t( 1 ) << i );
      diff += gi != g0;
      m += gi;
    }
    some_one |= g0;
    spread |= diff > 1;
    m_zero |= !g0 && m == 0;
    m_many |= !g0 && m > 1;
  }
  if ( some_one )
  {
    c.c0 = named( spread ? "AD" : "UD" );
    c.c1 = named( "D" );
    return c;
  }
  if ( m_zero && m_many )
  {
    c.fallback = true;
    c.c0 = bottom();
  }
  else if ( m_zero )
    c.c0 = named( "DM" );
  else if ( m_many )
    c.c0 = named( "AP" );
  else
    c.c0 = bottom();
  c.c1 = join( c.c0, named( "DP" ) );
  return c;
}

} // namespace

Candidates candidate_clones( std::vector<CircuitDag> const& F, Basis const& basis, CandidateVariant v )
{
  CloneDesc const amb = named( v == CandidateVariant::T1 ? "T^∞_1" : v == CandidateVariant::T0 ? "T^∞_0" : "D" );
  std::string const what = v == CandidateVariant::T1 ? "T^∞_1" : v == CandidateVariant::T0 ? "T^∞_0" : "D";
  for ( auto const& g : F )
  {
    if ( g.arity() > kMaxEvalArity )
      throw CapacityError( "fast paths evaluate circuits of arity at most 64" );
    require_gates_in( g, basis, amb, what );
  }
  if ( v == CandidateVariant::D )
    return candidates_D( F, basis );
  return candidates_T( F, basis, v == CandidateVariant::T1 );
}

SmallClassOracle exhaustive_oracle( Basis const& basis, unsigned max_arity )
{
  auto check = [basis, max_arity]( CircuitDag const& c, RelTag tag ) {
    if ( c.arity() > max_arity )
      throw RefusalError( "the exhaustive oracle is limited to arity " + std::to_string( max_arity ) );
    return preserves_specialized( truth_table( c, basis, max_arity ), { tag } );
  };
  return { [check]( CircuitDag const& c ) { return check( c, RelTag::LE ); },
           [check]( CircuitDag const& c ) { return check( c, RelTag::AFF ); } };
}

CandidateDecision decide_by_candidates( std::vector<CircuitDag> const& F, CircuitDag const& f, Basis const& basis,
                                        CandidateVariant v, SmallClassOracle const& oracle )
{
  CandidateDecision d;
  d.of_F = candidate_clones( F, basis, v );
  d.of_f = candidate_clones( { f }, basis, v );
  bool const d_case = v == CandidateVariant::D;
  auto all = [&]( auto const& pred ) {
    for ( auto const& g : F )
    {
      if ( !pred( g ) )
        return false;
    }
    return true;
  };
  auto F_small = [&] { return all( oracle.in_M ) || ( d_case && all( oracle.in_A ) ); };
  auto f_small = [&] { return oracle.in_M( f ) || ( d_case && oracle.in_A( f ) ); };
  if ( leq( d.of_f.c0, d.of_F.c0 ) )
  {
    d.branch = CandidateBranch::Lower;
    d.member = !F_small() || f_small();
  }
  else if ( leq( d.of_f.c0, d.of_F.c1 ) )
  {
    d.branch = CandidateBranch::Upper;
    d.member = !F_small();
  }
  else
  {
    d.branch = CandidateBranch::Outside;
    d.member = false;
  }
  return d;
}

Classification classify_clone( CloneDesc const& c )
{
  for ( char const* small : { "MT^∞_0", "MT^∞_1", "E", "V", "A", "DM" } )
  {
    if ( leq( c, named( small ) ) )
      return { c, "P" };
  }
  for ( char const* mid : { "T^∞_0", "PT^∞_0", "T^∞_1", "PT^∞_1", "D", "DP" } )
  {
    if ( c == named( mid ) )
      return { c, "coDP-complete" };
  }
  auto finite = []( Level l ) { return l != kInfinite; };
  bool const on_arm = ( finite( c.arm0 ) && c.arm1 <= 1 ) || ( finite( c.arm1 ) && c.arm0 <= 1 );
  if ( c.flags == 0 && on_arm )
  {
    if ( leq( named( "P" ), c ) )
      return { c, "Θᵖ₂-complete" };
    return { c, "Θᵖ₂-complete(randomized)" };
  }
  if ( c.flags == kLE && on_arm )
  {
    if ( leq( named( "MPT^2_0" ), c ) || leq( named( "MPT^2_1" ), c ) )
      return { c, "coDP-hard-in-Θᵖ₂" };
    return { c, "in-Θᵖ₂" };
  }
  throw InternalError( "clone " + name( c ) + " fits no case of the classification" );
}

Classification classify_basis( Basis const& B )
{
  return classify_clone( clone_of( B.functions() ) );
}

} // namespace clonelab
