// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/fastpaths.hpp>
#include <clonelab/gadgets.hpp>
#include <clonelab/lattice.hpp>
#include <clonelab/relations.hpp>
#include <clonelab/synth.hpp>
#include <clonelab/thresholds.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace clonelab;

namespace
{

// tolerances and sample sizes
constexpr unsigned kRandomOracleCases = 10000;
constexpr unsigned kRandomArity4 = 10000;
constexpr unsigned kMinGadgetInstances = 200;
constexpr unsigned kMaxGadgetArity = 14;
constexpr unsigned kMinComposerInstances = 100;
constexpr double kSigmaResidual = 1e-12;
constexpr double kSigmaRatioTolerance = 4.0;
constexpr unsigned kThresholdSamples = 500;
constexpr double kSuccessSlack = 0.05;
constexpr unsigned kFrequencySamples = 10000;
constexpr double kFrequencySigmas = 3.0;
constexpr unsigned kFastPathCircuits = 1000;
constexpr unsigned kFastPathMaxArity = 10;
constexpr unsigned kCandidateCases = 400;
constexpr unsigned kConversionCircuits = 200;

struct Outcome
{
  bool pass = true;
  std::string detail;
  unsigned failures = 0;

  void fail( std::string const& why )
  {
    if ( failures++ < 3 )
      detail += ( detail.empty() ? "" : "; " ) + why;
    pass = false;
  }
};

std::mt19937_64& rng()
{
  static std::mt19937_64 r( 20261014 );
  return r;
}

uint64_t below( uint64_t n )
{
  return std::uniform_int_distribution<uint64_t>( 0, n - 1 )( rng() );
}

BoolFun random_fun( unsigned arity )
{
  BoolFun f( arity );
  for ( auto& w : f.words() )
    w = rng()();
  f.mask_tail();
  return f;
}

BoolFun fn( char const* n )
{
  return *builtin_function( n );
}

Basis gates_basis( std::vector<BoolFun> const& F )
{
  std::vector<Gate> g;
  for ( std::size_t i = 0; i < F.size(); ++i )
    g.push_back( { "G" + std::to_string( i ), F[i] } );
  return Basis( "F", g );
}

CircuitDag random_circuit( Basis const& b, unsigned n, unsigned gates )
{
  CircuitDag c( n );
  std::vector<uint32_t> ids;
  for ( unsigned i = 0; i < n; ++i )
    ids.push_back( c.add_var( i ) );
  for ( unsigned g = 0; g < gates; ++g )
  {
    auto const& G = b.gates()[below( b.size() )];
    std::vector<uint32_t> in;
    for ( unsigned j = 0; j < G.fun.arity(); ++j )
    {
      // favour recent nodes so the circuit is deep and uses most gates
      uint64_t span = std::min<uint64_t>( ids.size(), 2 * n + 2 );
      in.push_back( below( 3 ) ? ids[ids.size() - 1 - below( span )] : ids[below( ids.size() )] );
    }
    ids.push_back( c.add_gate( G.name, in ) );
  }
  c.set_output( ids.back() );
  return c;
}

/// True iff f is unchanged on every assignment by the circuit pair, by direct evaluation.
bool same_on_all_assignments( CircuitDag const& a, Basis const& ba, CircuitDag const& b, Basis const& bb )
{
  if ( a.arity() != b.arity() )
    return false;
  for ( uint64_t x = 0; x < ( uint64_t( 1 ) << a.arity() ); ++x )
  {
    if ( eval( a, ba, { a.arity(), x } ) != eval( b, bb, { b.arity(), x } ) )
      return false;
  }
  return true;
}

std::string str( double x )
{
  char buf[64];
  std::snprintf( buf, sizeof buf, "%.4g", x );
  return buf;
}

// 1 ------------------------------------------------------------------------

Outcome oracle_equivalence()
{
  Outcome o;
  std::vector<BoolFun> op2;
  for ( uint64_t b = 0; b < 16; ++b )
    op2.push_back( BoolFun::from_bits( 2, b ) );
  std::vector<std::vector<BoolFun>> sets{ {} };
  for ( unsigned i = 0; i < 16; ++i )
  {
    sets.push_back( { op2[i] } );
    for ( unsigned j = i + 1; j < 16; ++j )
      sets.push_back( { op2[i], op2[j] } );
  }
  uint64_t queries = 0;
  for ( auto const& F : sets )
  {
    auto b = gates_basis( F );
    Closure c2( b, 2 ), c3( b, 3 );
    for ( auto const& f : op2 )
    {
      ++queries;
      if ( member( f, F ).member != c2.contains( f ) )
        o.fail( "binary " + f.to_string() );
    }
    for ( uint64_t t = 0; t < 256; ++t )
    {
      auto f = BoolFun::from_bits( 3, t );
      ++queries;
      if ( member( f, F ).member != c3.contains( f ) )
        o.fail( "ternary " + f.to_string() );
    }
  }
  for ( unsigned i = 0; i < kRandomOracleCases; ++i )
  {
    std::vector<BoolFun> F;
    unsigned k = 1 + below( 2 );
    for ( unsigned j = 0; j < k; ++j )
      F.push_back( random_fun( 1 + below( 3 ) ) );
    auto f = random_fun( 3 );
    ++queries;
    Closure c( gates_basis( F ), 3, f );
    if ( member( f, F ).member != c.contains( f ) )
      o.fail( "random case " + std::to_string( i ) );
  }
  o.detail = std::to_string( queries ) + " queries, " + std::to_string( o.failures ) + " mismatches" +
             ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 2 ------------------------------------------------------------------------

Outcome threshold_clones()
{
  Outcome o;
  unsigned pairs = 0;
  for ( unsigned n = 1; n <= 7; ++n )
  {
    for ( unsigned t = 0; t <= n + 1; ++t )
    {
      ++pairs;
      auto table = BoolFun::from_predicate( n, [t]( uint64_t a ) { return unsigned( std::popcount( a ) ) >= t; } );
      if ( threshold_clone( n, t ) != clone_of( { table } ) )
        o.fail( "n=" + std::to_string( n ) + " t=" + std::to_string( t ) );
    }
  }
  o.detail = std::to_string( pairs ) + " pairs, " + std::to_string( o.failures ) + " mismatches" +
             ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 3 ------------------------------------------------------------------------

bool has_bounding_variable( BoolFun const& f, bool alpha )
{
  for ( unsigned i = 0; i < f.arity(); ++i )
  {
    bool ok = true;
    for ( uint64_t a = 0; a < f.size() && ok; ++a )
    {
      bool xi = ( a >> i ) & 1;
      ok = alpha ? ( !xi || f( a ) ) : ( !f( a ) || xi );
    }
    if ( ok )
      return true;
  }
  return false;
}

Outcome arm_cutoff()
{
  Outcome o;
  unsigned checked = 0;
  auto check = [&]( BoolFun const& f ) {
    for ( bool alpha : { false, true } )
    {
      ++checked;
      bool inf = arm_level( f, alpha ) == kInfinite;
      auto r = standard_relation( { alpha ? RelTag::R1 : RelTag::R0, f.arity() } );
      bool pres = preserves( f, r ).preserved;
      bool bound = has_bounding_variable( f, alpha );
      if ( inf != pres || pres != bound )
        o.fail( f.to_string() + " alpha=" + std::to_string( alpha ) );
    }
  };
  for ( uint64_t b = 0; b < 256; ++b )
    check( BoolFun::from_bits( 3, b ) );
  for ( unsigned i = 0; i < kRandomArity4; ++i )
    check( random_fun( 4 ) );
  o.detail = std::to_string( checked ) + " (f, alpha) checks, " + std::to_string( o.failures ) + " violations" +
             ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 4 ------------------------------------------------------------------------

Outcome worked_example()
{
  Outcome o;
  auto f = BoolFun::from_predicate( 3, []( uint64_t a ) { return ( a & 1 ) && ( a & 6 ); } );
  // columns <a0, a1> with a0 or a1, row j at bit j
  Relation r( 2, { 1, 2, 3 } );
  auto p = preserves( f, r );
  if ( p.preserved )
    o.fail( "x and (y or z) preserves x or y" );
  else if ( !p.witness || p.witness->to_inline() != "1 0 0 / 0 1 1" )
    o.fail( "witness " + ( p.witness ? p.witness->to_inline() : std::string( "missing" ) ) );
  auto maj = BoolFun::from_predicate( 3, []( uint64_t a ) { return std::popcount( a ) >= 2; } );
  unsigned preserved = 0;
  for ( uint64_t m = 0; m < 16; ++m )
  {
    std::vector<uint64_t> cols;
    for ( uint64_t c = 0; c < 4; ++c )
    {
      if ( ( m >> c ) & 1 )
        cols.push_back( c );
    }
    if ( preserves( maj, Relation( 2, cols ) ).preserved )
      ++preserved;
    else
      o.fail( "majority fails relation " + std::to_string( m ) );
  }
  o.detail = "witness " + ( p.witness ? p.witness->to_inline() : std::string( "-" ) ) + ", majority preserves " +
             std::to_string( preserved ) + "/16 binary relations" + ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 5 ------------------------------------------------------------------------

Cnf random_cnf( unsigned vars, unsigned clauses )
{
  std::vector<std::vector<int>> cl;
  for ( unsigned c = 0; c < clauses; ++c )
  {
    std::vector<int> lits;
    unsigned len = 1 + below( std::min( vars, 3u ) );
    for ( unsigned l = 0; l < len; ++l )
    {
      int v = int( 1 + below( vars ) );
      lits.push_back( below( 2 ) ? v : -v );
    }
    cl.push_back( lits );
  }
  return Cnf( vars, cl );
}

Term random_term( std::vector<std::string> const& gates, std::vector<unsigned> const& arities, unsigned n,
                  unsigned depth )
{
  if ( depth == 0 || below( 4 ) == 0 )
    return Term::var( unsigned( below( n ) ) );
  auto g = below( gates.size() );
  std::vector<Term> ch;
  for ( unsigned i = 0; i < arities[g]; ++i )
    ch.push_back( random_term( gates, arities, n, depth - 1 ) );
  return Term::gate( gates[g], ch );
}

/// Same function, children of every symmetric gate rotated.
Term rotate( Term const& t )
{
  if ( t.is_var() )
    return t;
  std::vector<Term> ch;
  for ( auto const& c : t.children() )
    ch.push_back( rotate( c ) );
  if ( t.name() == "MAJ" || t.name() == "OR" )
    std::rotate( ch.begin(), ch.begin() + 1, ch.end() );
  return Term::gate( t.name(), ch );
}

Outcome gadget_dichotomies()
{
  Outcome o;
  unsigned instances = 0, positive = 0;
  auto expect = [&]( std::string const& what, CloneDesc const& got, CloneDesc const& want ) {
    if ( got != want )
      o.fail( what + ": got " + name( got ) + ", expected " + name( want ) );
  };
  auto arity_ok = [&]( unsigned a, std::string const& what ) {
    if ( a > kMaxGadgetArity )
      o.fail( what + " arity " + std::to_string( a ) );
  };

  // f_phi
  for ( unsigned i = 0; i < 60; ++i )
  {
    auto cnf = random_cnf( 1 + unsigned( below( 4 ) ), 1 + unsigned( below( 5 ) ) );
    auto phi = cnf.to_formula();
    auto g = gadget_f_phi( phi );
    arity_ok( g.arity, "f_phi" );
    ++instances;
    auto c = clone_of( { g.table() } );
    positive += cnf.satisfiable();
    if ( !cnf.satisfiable() )
      expect( "f_phi unsat", c, bottom() );
    else
    {
      for ( char const* big : { "M", "A", "D", "T^2_0", "T^2_1" } )
      {
        if ( leq( c, named( big ) ) )
          o.fail( std::string( "f_phi sat inside " ) + big );
      }
    }
  }

  // f_vec with ↛, g_vec with x and (y -> z)
  auto const nimp = fn( "NOTIMPLIES" );
  auto const ptg = gadget_pt_generator().table();
  for ( unsigned i = 0; i < 80; ++i )
  {
    unsigned n = 1 + unsigned( below( 2 ) );
    std::vector<Formula> phis;
    unsigned s = 0;
    for ( unsigned j = 0; j < n; ++j )
    {
      auto cnf = random_cnf( 1 + unsigned( below( n == 1 ? 4 : 2 ) ), 1 + unsigned( below( 4 ) ) );
      s += cnf.satisfiable();
      phis.push_back( cnf.to_formula() );
    }
    unsigned m = std::max( ( n + 1 ) * ( n + 1 ), 6u ), t = m - n - 1;
    unsigned k = ( t + s ) / ( s + 1 );
    positive += s > 0;
    bool g = i % 2;
    auto gad = g ? gadget_g_vec( phis ) : gadget_f_vec( phis );
    arity_ok( gad.formula.arity, g ? "g_vec" : "f_vec" );
    ++instances;
    auto c = clone_of( { g ? ptg : nimp, gad.formula.table() } );
    expect( g ? "g_vec" : "f_vec", c, named( ( g ? "PT^" : "T^" ) + std::to_string( k ) + "_0" ) );
  }

  // h gadgets over DM and MPT^inf_1 formulas
  Basis const majb = basis_from_list( "MAJ" );
  Basis const mptb = basis_from_list( "OR,3:ae" );
  for ( unsigned i = 0; i < 90; ++i )
  {
    unsigned kind = i % 3;
    unsigned n = 2 + unsigned( below( 3 ) );
    Basis const& b = kind == 2 ? mptb : majb;
    std::vector<std::string> gates = kind == 2 ? std::vector<std::string>{ "OR", "G0" } : std::vector<std::string>{ "MAJ" };
    std::vector<unsigned> ar = kind == 2 ? std::vector<unsigned>{ 2, 3 } : std::vector<unsigned>{ 3 };
    auto tf = random_term( gates, ar, n, 3 );
    auto tg = below( 2 ) ? rotate( tf ) : random_term( gates, ar, n, 3 );
    Formula f{ tf, n, b }, gg{ tg, n, b };
    bool eq = equivalent( f, gg );
    positive += eq;
    ++instances;
    if ( kind == 0 )
    {
      auto h = gadget_h_DP( f, gg );
      arity_ok( h.arity, "h_DP" );
      expect( "h_DP", clone_of( { h.table() } ), named( eq ? "DM" : "DP" ) );
    }
    else if ( kind == 1 )
    {
      auto h = gadget_h_MPT21( f, gg );
      arity_ok( h.arity, "h_MPT21" );
      expect( "h_MPT21", clone_of( { h.table() } ), named( eq ? "DM" : "MPT^2_1" ) );
    }
    else
    {
      auto h = gadget_h_PT1( f, gg );
      arity_ok( h.arity, "h_PT1" );
      expect( "h_PT1", clone_of( { h.table() } ), eq ? bottom() : named( "PT^∞_1" ) );
    }
  }
  if ( instances < kMinGadgetInstances )
    o.fail( "only " + std::to_string( instances ) + " instances" );
  if ( positive == 0 || positive == instances )
    o.fail( "one-sided sample" );
  o.detail = std::to_string( instances ) + " instances (" + std::to_string( positive ) + " satisfiable or equivalent), " +
             std::to_string( o.failures ) + " mismatches" +
             ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 6 ------------------------------------------------------------------------

/// Audit of a membership answer independent of the decision procedure.
bool audit( BoolFun const& f, std::vector<BoolFun> const& F, Membership const& m )
{
  if ( !m.member )
  {
    if ( !m.separator || !m.witness )
      return false;
    auto r = standard_relation( *m.separator );
    if ( !verify_witness( f, r, *m.witness ) )
      return false;
    for ( auto const& g : F )
    {
      if ( !preserves_specialized( g, *m.separator ) )
        return false;
    }
    return true;
  }
  for ( auto id : family_Rn( f.arity() ) )
  {
    bool all = true;
    for ( auto const& g : F )
      all = all && preserves_specialized( g, id );
    if ( all && !preserves_specialized( f, id ) )
      return false;
  }
  return true;
}

Outcome composer_parity()
{
  Outcome o;
  unsigned instances = 0, closure_checked = 0;
  std::set<unsigned> js;
  for ( unsigned n = 1; n <= 3; ++n )
  {
    for ( unsigned j = 1; j <= 2 * n; ++j )
    {
      for ( unsigned v = 0; v < 10; ++v )
      {
        auto p = make_promise_instance( n, j, 2, v );
        if ( p.check() != j )
          o.fail( "promise prefix" );
        auto inst = compose_cmp_instance( p );
        auto F = inst.generators();
        auto f = inst.target();
        auto m = member( f, F );
        ++instances;
        js.insert( j );
        if ( m.member != ( j % 2 == 0 ) )
          o.fail( "n=" + std::to_string( n ) + " j=" + std::to_string( j ) + " variant " + std::to_string( v ) );
        if ( f.arity() <= kClosureMaxArity )
        {
          ++closure_checked;
          if ( Closure( gates_basis( F ), f.arity(), f ).contains( f ) != m.member )
            o.fail( "closure disagrees" );
        }
        else if ( !audit( f, F, m ) )
          o.fail( "audit failed at n=" + std::to_string( n ) + " j=" + std::to_string( j ) );
      }
    }
  }
  if ( instances < kMinComposerInstances || js.size() != 6 )
    o.fail( "coverage" );
  for ( unsigned n = 1; n <= 6; ++n )
  {
    unsigned m = std::max( ( n + 1 ) * ( n + 1 ), 6u ), t = m - n - 1;
    auto p = threshold_gadget_params( n );
    if ( p.m != m || p.t != t )
      o.fail( "gadget parameters n=" + std::to_string( n ) );
    for ( unsigned s = 0; s < n; ++s )
    {
      if ( !( p.k( s ) > p.k( s + 1 ) ) || p.k( s + 1 ) < 2 )
        o.fail( "k not strictly descending at n=" + std::to_string( n ) );
    }
  }
  o.detail = std::to_string( instances ) + " instances (j = 1..6), " + std::to_string( closure_checked ) +
             " closure-checked, others audited; " + std::to_string( o.failures ) + " mismatches" +
             ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 7 ------------------------------------------------------------------------

long double amp( unsigned k, long double x )
{
  return ( k + 1 ) * std::pow( x, (long double)k ) - k * std::pow( x, (long double)( k + 1 ) );
}

long double sigma_by_bisection( unsigned k )
{
  long double lo = 0.5L, hi = 1.0L - 1e-18L;
  for ( int i = 0; i < 200; ++i )
  {
    long double mid = ( lo + hi ) / 2;
    ( amp( k, mid ) < mid ? lo : hi ) = mid;
  }
  return ( lo + hi ) / 2;
}

Outcome sigma_numerics()
{
  Outcome o;
  double worst = 0;
  for ( unsigned k = 3; k <= 10; ++k )
  {
    double s = sigma( k );
    double res = double( std::fabs( amp( k, s ) - s ) );
    worst = std::max( worst, res );
    if ( !( res < kSigmaResidual ) )
      o.fail( "residual " + str( res ) + " at k=" + std::to_string( k ) );
    if ( std::fabs( double( sigma_by_bisection( k ) ) - s ) > 1e-12 )
      o.fail( "disagrees with bisection at k=" + std::to_string( k ) );
    double inv = 1 / s;
    if ( !( inv > 1 && inv < 2 ) )
      o.fail( "1/sigma out of (1,2) at k=" + std::to_string( k ) );
  }
  std::vector<double> c;
  for ( unsigned k : { 20u, 40u, 80u } )
  {
    double s = sigma( k );
    c.push_back( std::fabs( s - ( 1 - 2.0 / ( double( k ) * k ) ) ) * k * k * k );
  }
  for ( std::size_t i = 1; i < c.size(); ++i )
  {
    double r = c[i] / c[i - 1];
    if ( !( r <= kSigmaRatioTolerance && r >= 1 / kSigmaRatioTolerance ) )
      o.fail( "ratio " + str( r ) );
  }
  o.detail = "max residual " + str( worst ) + ", k^3 deviation " + str( c[0] ) + " / " + str( c[1] ) + " / " +
             str( c[2] ) + ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 8 ------------------------------------------------------------------------

Outcome randomized_thresholds()
{
  Outcome o;
  unsigned const k = 3, n = 12, e = 3;
  unsigned const t = unsigned( std::ceil( sigma( k ) * n ) ) + 1;
  auto const target = BoolFun::from_predicate( n, [t]( uint64_t a ) { return unsigned( std::popcount( a ) ) >= t; } );
  unsigned ok = 0;
  for ( unsigned i = 0; i < kThresholdSamples; ++i )
  {
    auto r = RandomStream::from_seed( 1000 + i, uint64_t( 1 ) << 24 );
    ok += random_threshold_formula( n, t, e, r, k ).truth_table() == target;
  }
  double rate = double( ok ) / kThresholdSamples;
  double need = 1 - std::ldexp( 1.0, -int( e ) ) - kSuccessSlack;
  if ( rate < need )
    o.fail( "success rate " + str( rate ) );

  // per-weight frequencies of a depth-3 tree
  uint64_t const N = pick_N( k, t, n );
  unsigned const depth = 3;
  std::string freq;
  for ( unsigned w : { 0u, t - 1, t, n } )
  {
    std::vector<bool> pos( N );
    for ( uint64_t p = 0; p < N; ++p )
      pos[p] = p < n ? p < w : w == n;
    long double p0 = 0;
    for ( bool b : pos )
      p0 += b;
    p0 /= N;
    long double p = p0;
    for ( unsigned d = 0; d < depth; ++d )
      p = amp( k, p );
    unsigned hits = 0;
    auto r = RandomStream::from_seed( 77 + w, uint64_t( 1 ) << 24 );
    for ( unsigned s = 0; s < kFrequencySamples; ++s )
      hits += sample_threshold_tree( k, N, n, depth, r ).eval_positions( pos );
    double obs = double( hits ) / kFrequencySamples;
    double sd = std::sqrt( double( p * ( 1 - p ) ) / kFrequencySamples );
    if ( std::fabs( obs - double( p ) ) > kFrequencySigmas * sd + 1e-12 )
      o.fail( "weight " + std::to_string( w ) + ": observed " + str( obs ) + ", expected " + str( double( p ) ) );
    freq += " w=" + std::to_string( w ) + ":" + str( obs ) + "/" + str( double( p ) );
  }
  o.detail = "t=" + std::to_string( t ) + ", success " + std::to_string( ok ) + "/" + std::to_string( kThresholdSamples ) +
             " (need " + str( need ) + "), depth-3 frequencies" + freq + ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 9 ------------------------------------------------------------------------

Outcome fast_paths()
{
  Outcome o;
  struct Amb
  {
    Ambient a;
    char const* gates;
  };
  std::vector<Amb> ambs{ { Ambient::V, "OR,ZERO,ONE" },      { Ambient::E, "AND,ZERO,ONE" },
                         { Ambient::A, "XOR,XOR3,NOT,ONE" }, { Ambient::DM, "MAJ" },
                         { Ambient::MT1, "OR,3:ae,ONE" },    { Ambient::MT0, "AND,3:8a,ZERO" } };
  unsigned circuits = 0;
  for ( auto const& a : ambs )
  {
    auto b = basis_from_list( a.gates );
    for ( unsigned i = 0; i < kFastPathCircuits; ++i )
    {
      unsigned n = 1 + unsigned( below( kFastPathMaxArity ) );
      auto c = random_circuit( b, n, 1 + unsigned( below( 3 * n + 4 ) ) );
      ++circuits;
      auto id = identify_restricted( c, b, a.a );
      if ( id.clone != clone_of( { truth_table( c, b ) } ) )
        o.fail( to_string( a.a ) + ": " + id.form );
    }
  }

  struct Var
  {
    CandidateVariant v;
    char const* gates;
  };
  std::vector<Var> vars{ { CandidateVariant::T1, "IMP,3:ae,3:ea,OR,ONE" },
                         { CandidateVariant::T0, "NOTIMPLIES,3:8a,3:a8,AND,ZERO" },
                         { CandidateVariant::D, "MAJ,NOT,XOR3" } };
  unsigned branches[3] = { 0, 0, 0 };
  for ( auto const& v : vars )
  {
    auto b = basis_from_list( v.gates );
    auto oracle = exhaustive_oracle( b );
    for ( unsigned i = 0; i < kCandidateCases; ++i )
    {
      std::vector<CircuitDag> F;
      std::vector<BoolFun> Ft;
      for ( unsigned j = 0, k = 1 + unsigned( below( 2 ) ); j < k; ++j )
      {
        unsigned n = 1 + unsigned( below( 4 ) );
        F.push_back( random_circuit( b, n, 1 + unsigned( below( 5 ) ) ) );
        Ft.push_back( truth_table( F.back(), b ) );
      }
      unsigned n = 1 + unsigned( below( 5 ) );
      auto f = random_circuit( b, n, 1 + unsigned( below( 6 ) ) );
      auto d = decide_by_candidates( F, f, b, v.v, oracle );
      auto const &C0 = d.of_F.c0, &C1 = d.of_F.c1, &D0 = d.of_f.c0, &D1 = d.of_f.c1;
      if ( !leq( C0, C1 ) || !leq( D0, D1 ) )
        o.fail( "C0 not below C1" );
      bool const lower = leq( D0, C0 );
      bool const upper = leq( D1, C1 ) && !lower;
      bool const outside = !leq( D1, C1 );
      if ( leq( D1, C1 ) != leq( D0, C1 ) )
        o.fail( "C1' below C1 differs from C0' below C1" );
      if ( int( lower ) + int( upper ) + int( outside ) != 1 )
        o.fail( "case conditions not exclusive" );
      auto expected = lower ? CandidateBranch::Lower : upper ? CandidateBranch::Upper : CandidateBranch::Outside;
      if ( d.branch != expected )
        o.fail( "branch mismatch" );
      ++branches[int( d.branch )];
      if ( d.member != member( truth_table( f, b ), Ft ).member )
        o.fail( "decision disagrees with membership" );
    }
  }

  // classification under change of generators
  unsigned sets = 0;
  for ( auto const& nc : named_clones() )
  {
    std::vector<BoolFun> G;
    for ( auto const& g : nc.generators )
      G.push_back( *builtin_function( g ) );
    auto base = classify_clone( clone_of( G ) ).label;
    ++sets;
    if ( base != classify_clone( nc.desc ).label )
      o.fail( "label of " + nc.name );
    if ( G.empty() )
      continue;
    // all members of arity <= 3 reached by the closure, and the generators plus one extra member
    auto cl = Closure( gates_basis( G ), 3 ).members();
    std::vector<BoolFun> alt;
    for ( auto const& f : cl )
    {
      if ( !( f == BoolFun::projection( 3, 0 ) || f == BoolFun::projection( 3, 1 ) || f == BoolFun::projection( 3, 2 ) ) )
        alt.push_back( f );
    }
    if ( clone_of( alt ) == nc.desc )
    {
      ++sets;
      if ( classify_clone( clone_of( alt ) ).label != base )
        o.fail( "label changes for ternary generators of " + nc.name );
    }
    auto more = G;
    more.push_back( cl[below( cl.size() )] );
    ++sets;
    if ( classify_clone( clone_of( more ) ).label != base )
      o.fail( "label changes with a redundant generator of " + nc.name );
    std::vector<Gate> gg;
    for ( std::size_t i = 0; i < more.size(); ++i )
      gg.push_back( { "H" + std::to_string( i ), more[i] } );
    if ( classify_basis( Basis( "alt", gg ) ).label != base )
      o.fail( "classify_basis differs for " + nc.name );
  }
  o.detail = std::to_string( circuits ) + " restricted circuits, " + std::to_string( 3 * kCandidateCases ) +
             " candidate cases (branches " + std::to_string( branches[0] ) + "/" + std::to_string( branches[1] ) + "/" +
             std::to_string( branches[2] ) + "), " + std::to_string( sets ) + " generator sets; " +
             std::to_string( o.failures ) + " mismatches" + ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

// 10 -----------------------------------------------------------------------

bool message_has( std::exception const& e, std::string const& s )
{
  return std::string( e.what() ).find( s ) != std::string::npos;
}

/// The relation named after "fails to preserve" is preserved by every gate of `to` and refuted by f.
bool separator_checks( std::exception const& e, BoolFun const& f, Basis const& to )
{
  std::string const msg = e.what(), key = "fails to preserve ";
  auto at = msg.find( key );
  if ( at == std::string::npos )
    return false;
  auto const sep = msg.substr( at + key.size() );
  for ( auto id : family_Rn( std::max( f.arity(), 4u ) ) )
  {
    if ( id.to_string() != sep )
      continue;
    auto r = standard_relation( id );
    if ( preserves( f, r ).preserved )
      return false;
    for ( auto const& g : to.gates() )
    {
      if ( !preserves( g.fun, r ).preserved )
        return false;
    }
    return true;
  }
  return false;
}

Outcome conversion_soundness()
{
  Outcome o;
  struct Pair
  {
    char const* from;
    char const* to;
  };
  std::vector<Pair> pairs{ { "AND,OR,NOT", "NAND" },   { "MAJ,NOT", "AND,OR,NOT" }, { "XOR,ONE", "NAND" },
                           { "AND,OR", "MAJ,ZERO,ONE" }, { "IMP", "NOR" },          { "NOTIMPLIES,MAJ", "IMP,NOT" } };
  unsigned converted = 0, eliminated = 0, refused = 0;
  for ( unsigned i = 0; i < kConversionCircuits; ++i )
  {
    auto const& p = pairs[i % pairs.size()];
    auto from = basis_from_list( p.from ), to = basis_from_list( p.to );
    unsigned n = 1 + unsigned( below( 10 ) );
    auto c = random_circuit( from, n, 1 + unsigned( below( 12 ) ) );
    auto r = convert_basis( c, from, to );
    ++converted;
    if ( !same_on_all_assignments( c, from, r, to ) )
      o.fail( std::string( "convert " ) + p.from + " -> " + p.to );
    for ( auto const& nd : r.nodes() )
    {
      if ( !nd.is_var && !to.find( nd.gate ) )
        o.fail( "foreign gate " + nd.gate );
    }
  }

  // constants: circuits over [to, 0, 1]
  auto const to = basis_from_list( "AND,OR" );
  auto const from = basis_from_list( "AND,OR,ZERO,ONE" );
  for ( unsigned i = 0; eliminated < kConversionCircuits && i < 20 * kConversionCircuits; ++i )
  {
    unsigned n = 1 + unsigned( below( 10 ) );
    auto c = random_circuit( from, n, 1 + unsigned( below( 12 ) ) );
    // the function must be monotone and non-constant to lie in [and, or]
    auto f = truth_table( c, from );
    bool in_to = !f.is_constant();
    try
    {
      auto r = eliminate_constants( c, from, to, ConstantMode::Both );
      ++eliminated;
      if ( !in_to )
        o.fail( "constant function not refused" );
      if ( !same_on_all_assignments( c, from, r, to ) )
        o.fail( "eliminate_constants changed the function" );
    }
    catch ( RefusalError const& e )
    {
      ++refused;
      if ( in_to )
        o.fail( std::string( "wrongly refused: " ) + e.what() );
      else if ( !separator_checks( e, f, to ) )
        o.fail( std::string( "diagnosis: " ) + e.what() );
    }
  }

  if ( eliminated < kConversionCircuits )
    o.fail( "too few eliminations" );

  // hypothesis violations
  auto expect_refusal = [&]( std::function<void()> const& run, std::string const& diag, std::string const& what ) {
    try
    {
      run();
      o.fail( what + " not refused" );
    }
    catch ( RefusalError const& e )
    {
      ++refused;
      if ( !message_has( e, diag ) )
        o.fail( what + ": " + e.what() );
    }
  };
  auto const x0 = Term::var( 0 ), x1 = Term::var( 1 );
  auto const orz = basis_from_list( "OR,ZERO" ), ando = basis_from_list( "AND,ONE" );
  auto c0 = to_dag( Term::gate( "OR", { x0, Term::gate( "OR", { x1, Term::gate( "ZERO", { x0 } ) } ) } ), 2 );
  expect_refusal( [&] { eliminate_constants( c0, orz, basis_from_list( "OR" ), ConstantMode::Zero ); }, "needs and",
                  "0 without and" );
  auto c1 = to_dag( Term::gate( "AND", { x0, Term::gate( "AND", { x1, Term::gate( "ONE", { x0 } ) } ) } ), 2 );
  expect_refusal( [&] { eliminate_constants( c1, ando, basis_from_list( "AND" ), ConstantMode::One ); }, "needs or",
                  "1 without or" );
  auto const notb = basis_from_list( "NOT" ), xorb = basis_from_list( "XOR" ), dmb = basis_from_list( "MAJ,NOT" );
  auto cn = to_dag( Term::gate( "NOT", { x0 } ), 1 );
  auto cx = to_dag( Term::gate( "XOR", { x0, x1 } ), 2 );
  for ( auto const& [c, b, t, g, what] :
        { std::tuple{ &cn, &notb, &to, "NOT", "negation into [and, or]" }, std::tuple{ &cx, &xorb, &dmb, "XOR", "xor into D" } } )
  {
    try
    {
      convert_basis( *c, *b, *t );
      o.fail( std::string( what ) + " not refused" );
    }
    catch ( RefusalError const& e )
    {
      ++refused;
      if ( !separator_checks( e, b->at( g ).fun, *t ) )
        o.fail( std::string( what ) + ": " + e.what() );
    }
  }

  o.detail = std::to_string( converted ) + " conversions, " + std::to_string( eliminated ) + " eliminations, " +
             std::to_string( refused ) + " refusals; " + std::to_string( o.failures ) + " failures" +
             ( o.detail.empty() ? "" : ": " + o.detail );
  return o;
}

} // namespace

int main()
{
  struct Criterion
  {
    char const* title;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{ { "oracle equivalence", oracle_equivalence },
                              { "threshold clones n <= 7", threshold_clones },
                              { "arm cutoff", arm_cutoff },
                              { "worked preservation example", worked_example },
                              { "gadget dichotomies", gadget_dichotomies },
                              { "composer parity", composer_parity },
                              { "sigma numerics", sigma_numerics },
                              { "randomized threshold formulas", randomized_thresholds },
                              { "fast-path consistency", fast_paths },
                              { "conversion soundness", conversion_soundness } };
  bool ok = true;
  unsigned i = 0;
  for ( auto const& c : all )
  {
    ++i;
    auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try
    {
      r = c.run();
    }
    catch ( std::exception const& e )
    {
      r.pass = false;
      r.detail = std::string( "exception: " ) + e.what();
    }
    double secs = std::chrono::duration<double>( std::chrono::steady_clock::now() - t0 ).count();
    std::printf( "%s %2u %s: %s [%.1fs]\n", r.pass ? "PASS" : "FAIL", i, c.title, r.detail.c_str(), secs );
    std::fflush( stdout );
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
