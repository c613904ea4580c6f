#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/gadgets.hpp>

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace clonelab
{

BoolFun Formula::table( unsigned max_arity ) const
{
  return truth_table( term, basis, arity, max_arity );
}

Cnf::Cnf( unsigned num_vars, std::vector<std::vector<int>> clauses )
    : num_vars_( num_vars ), clauses_( std::move( clauses ) )
{
  for ( auto const& c : clauses_ )
  {
    for ( int l : c )
    {
      if ( l == 0 || unsigned( std::abs( l ) ) > num_vars_ )
        throw InputError( "literal " + std::to_string( l ) + " outside 1.." + std::to_string( num_vars_ ) );
    }
  }
}

Cnf Cnf::parse_dimacs( std::string_view text )
{
  std::istringstream is{ std::string( text ) };
  std::string line;
  std::optional<unsigned> header_vars;
  std::vector<std::vector<int>> clauses;
  std::vector<int> cur;
  unsigned max_var = 0;
  std::size_t offset = 0;
  while ( std::getline( is, line ) )
  {
    std::size_t const line_start = offset;
    offset += line.size() + 1;
    auto first = line.find_first_not_of( " \t\r" );
    if ( first == std::string::npos || line[first] == 'c' || line[first] == '%' )
      continue;
    if ( line[first] == 'p' )
    {
      std::istringstream ls( line.substr( first + 1 ) );
      std::string fmt;
      unsigned v = 0, c = 0;
      if ( !( ls >> fmt >> v >> c ) || fmt != "cnf" )
        throw ParseError( "malformed DIMACS header", line_start + first );
      header_vars = v;
      continue;
    }
    std::istringstream ls( line );
    std::string tok;
    while ( ls >> tok )
    {
      char* end = nullptr;
      long v = std::strtol( tok.c_str(), &end, 10 );
      if ( *end != '\0' )
        throw ParseError( "invalid literal '" + tok + "'", line_start );
      if ( v == 0 )
      {
        clauses.push_back( cur );
        cur.clear();
        continue;
      }
      max_var = std::max( max_var, unsigned( std::labs( v ) ) );
      cur.push_back( int( v ) );
    }
  }
  if ( !cur.empty() )
    clauses.push_back( cur );
  unsigned vars = header_vars ? *header_vars : max_var;
  if ( max_var > vars )
    throw InputError( "literal exceeds the declared variable count" );
  return Cnf( vars, std::move( clauses ) );
}

std::string Cnf::to_dimacs() const
{
  std::ostringstream os;
  os << "p cnf " << num_vars_ << " " << clauses_.size() << "\n";
  for ( auto const& c : clauses_ )
  {
    for ( int l : c )
      os << l << " ";
    os << "0\n";
  }
  return os.str();
}

bool Cnf::eval( uint64_t a ) const
{
  for ( auto const& c : clauses_ )
  {
    bool sat = false;
    for ( int l : c )
    {
      bool v = ( a >> ( std::abs( l ) - 1 ) ) & 1u;
      if ( v == ( l > 0 ) )
      {
        sat = true;
        break;
      }
    }
    if ( !sat )
      return false;
  }
  return true;
}

std::optional<uint64_t> Cnf::satisfying_assignment() const
{
  if ( num_vars_ > kMaxSatVars )
    throw CapacityError( "brute-force SAT is limited to " + std::to_string( kMaxSatVars ) + " variables" );
  for ( uint64_t a = 0; a < ( uint64_t( 1 ) << num_vars_ ); ++a )
  {
    if ( eval( a ) )
      return a;
  }
  return std::nullopt;
}

uint64_t Cnf::count_models() const
{
  if ( num_vars_ > kMaxSatVars )
    throw CapacityError( "brute-force SAT is limited to " + std::to_string( kMaxSatVars ) + " variables" );
  uint64_t n = 0;
  for ( uint64_t a = 0; a < ( uint64_t( 1 ) << num_vars_ ); ++a )
    n += eval( a );
  return n;
}

namespace
{

Term AND( Term a, Term b )
{
  return Term::gate( "AND", { std::move( a ), std::move( b ) } );
}

Term OR( Term a, Term b )
{
  return Term::gate( "OR", { std::move( a ), std::move( b ) } );
}

Term NOT( Term a )
{
  return Term::gate( "NOT", { std::move( a ) } );
}

Term balanced( std::vector<Term> items, Term ( *op )( Term, Term ) )
{
  while ( items.size() > 1 )
  {
    std::vector<Term> next;
    for ( std::size_t i = 0; i + 1 < items.size(); i += 2 )
      next.push_back( op( items[i], items[i + 1] ) );
    if ( items.size() % 2 )
      next.push_back( items.back() );
    items = std::move( next );
  }
  return items[0];
}

Term shifted( Term const& t, unsigned arity, unsigned offset )
{
  std::vector<Term> args;
  for ( unsigned i = 0; i < arity; ++i )
    args.push_back( Term::var( offset + i ) );
  return t.substitute( args );
}

Basis demorgan()
{
  return builtin_basis( "DeMorgan" );
}

Basis with_gates( Basis b, std::vector<std::string> const& names )
{
  for ( auto const& n : names )
  {
    if ( auto g = b.find( n ) )
    {
      if ( g->fun != *builtin_function( n ) )
        throw InputError( "basis gate " + n + " does not have its standard table" );
      continue;
    }
    b.add_gate( { n, *builtin_function( n ) } );
  }
  return b;
}

} // namespace

Formula Cnf::to_formula() const
{
  unsigned const arity = std::max( num_vars_, 1u );
  Term const x0 = Term::var( 0 );
  if ( clauses_.empty() )
    return { OR( x0, NOT( x0 ) ), arity, demorgan() };
  std::vector<Term> cls;
  for ( auto const& c : clauses_ )
  {
    if ( c.empty() )
    {
      cls.push_back( AND( x0, NOT( x0 ) ) );
      continue;
    }
    std::vector<Term> lits;
    for ( int l : c )
    {
      Term v = Term::var( unsigned( std::abs( l ) - 1 ) );
      lits.push_back( l > 0 ? v : NOT( v ) );
    }
    cls.push_back( balanced( std::move( lits ), OR ) );
  }
  return { balanced( std::move( cls ), AND ), arity, demorgan() };
}

bool satisfiable( Formula const& phi )
{
  if ( phi.arity > kMaxSatVars )
    throw CapacityError( "brute-force SAT is limited to " + std::to_string( kMaxSatVars ) + " variables" );
  return !phi.table().is_zero();
}

uint64_t count_models( Formula const& phi )
{
  if ( phi.arity > kMaxSatVars )
    throw CapacityError( "brute-force SAT is limited to " + std::to_string( kMaxSatVars ) + " variables" );
  return phi.table().count_ones();
}

bool equivalent( Formula const& a, Formula const& b )
{
  if ( a.arity != b.arity )
    throw InputError( "equivalence needs formulas of equal arity" );
  return a.table() == b.table();
}

Formula gadget_f_phi( Formula const& phi )
{
  Term const x = Term::var( 0 ), y = Term::var( 1 ), z = Term::var( 2 );
  Term const xp = AND( x, shifted( phi.term, phi.arity, 3 ) );
  Term const t = OR( AND( xp, y ), AND( NOT( xp ), z ) );
  return { t, 3 + phi.arity, with_gates( phi.basis, { "AND", "OR", "NOT" } ) };
}

CircuitDag gadget_C_a( CircuitDag const& c, Assignment const& a )
{
  if ( a.arity != c.arity() )
    throw InputError( "assignment arity does not match the circuit" );
  c.validate( demorgan() );
  CircuitDag out( 1 );
  auto const x = out.add_var( 0 );
  std::optional<uint32_t> nx;
  std::vector<uint32_t> map( c.nodes().size() );
  for ( std::size_t i = 0; i < c.nodes().size(); ++i )
  {
    auto const& nd = c.nodes()[i];
    if ( nd.is_var )
    {
      if ( a[nd.var] )
        map[i] = x;
      else
      {
        if ( !nx )
          nx = out.add_gate( "NOT", { x } );
        map[i] = *nx;
      }
      continue;
    }
    std::vector<uint32_t> ins;
    for ( auto in : nd.inputs )
      ins.push_back( map[in] );
    map[i] = out.add_gate( nd.gate, std::move( ins ) );
  }
  out.set_output( out.add_gate( "AND", { x, map[c.output()] } ) );
  return out.pruned();
}

unsigned ThresholdGadgetParams::k( unsigned s ) const
{
  if ( s > n )
    throw RangeError( "s must be at most n" );
  return ( t + s ) / ( s + 1 );
}

ThresholdGadgetParams threshold_gadget_params( unsigned n )
{
  if ( n == 0 )
    throw RangeError( "the threshold gadget needs n >= 1" );
  unsigned const m = std::max( ( n + 1 ) * ( n + 1 ), 6u );
  return { n, m, m - n - 1 };
}

namespace
{

struct Blocks
{
  ThresholdGadgetParams params;
  std::vector<Term> args;
  std::vector<unsigned> offsets;
  unsigned arity;
  Basis basis;
};

Blocks layout( std::vector<Formula> const& phis )
{
  Blocks b{ threshold_gadget_params( unsigned( phis.size() ) ), {}, {}, 0, demorgan() };
  unsigned next = b.params.m;
  for ( std::size_t i = 0; i < phis.size(); ++i )
  {
    b.offsets.push_back( next );
    b.args.push_back( AND( Term::var( unsigned( i ) ), shifted( phis[i].term, phis[i].arity, next ) ) );
    next += phis[i].arity;
    b.basis = b.basis.merged( phis[i].basis, "DeMorgan+" );
  }
  for ( unsigned i = unsigned( phis.size() ); i < b.params.m; ++i )
    b.args.push_back( Term::var( i ) );
  b.arity = next;
  return b;
}

} // namespace

ThresholdGadget gadget_f_vec( std::vector<Formula> const& phis )
{
  auto b = layout( phis );
  std::string const g = "THETA_" + std::to_string( b.params.m ) + "_" + std::to_string( b.params.t );
  b.basis = with_gates( b.basis, { g } );
  return { Formula{ Term::gate( g, b.args ), b.arity, std::move( b.basis ) }, b.params, b.offsets };
}

ThresholdGadget gadget_g_vec( std::vector<Formula> const& phis )
{
  auto f = gadget_f_vec( phis );
  unsigned const a = f.formula.arity;
  std::vector<Term> vars;
  for ( unsigned i = 0; i < a; ++i )
    vars.push_back( Term::var( i ) );
  Term const t = OR( f.formula.term, AND( Term::var( a ), balanced( std::move( vars ), AND ) ) );
  f.formula = Formula{ t, a + 1, f.formula.basis };
  return f;
}

Formula gadget_pt_generator()
{
  return { AND( Term::var( 0 ), OR( NOT( Term::var( 1 ) ), Term::var( 2 ) ) ), 3, demorgan() };
}

unsigned PromiseInstance::check() const
{
  if ( cnfs.empty() || cnfs.size() % 2 )
    throw InputError( "a promise instance needs an even, nonzero number of CNFs" );
  unsigned j = 0;
  while ( j < cnfs.size() && cnfs[j].satisfiable() )
    ++j;
  for ( std::size_t i = j; i < cnfs.size(); ++i )
  {
    if ( cnfs[i].satisfiable() )
      throw InputError( "promise violated: CNF " + std::to_string( i ) + " is satisfiable but CNF " +
                        std::to_string( j ) + " is not" );
  }
  if ( j == 0 )
    throw InputError( "promise violated: the first CNF is unsatisfiable" );
  if ( claimed_j && *claimed_j != j )
    throw InputError( "promise violated: claimed j = " + std::to_string( *claimed_j ) + " but the prefix has length " +
                      std::to_string( j ) );
  return j;
}

namespace
{

std::pair<std::vector<Formula>, std::vector<Formula>> split( PromiseInstance const& p )
{
  std::vector<Formula> even, odd;
  for ( std::size_t i = 0; i < p.cnfs.size(); ++i )
    ( i % 2 ? odd : even ).push_back( p.cnfs[i].to_formula() );
  return { even, odd };
}

} // namespace

std::vector<BoolFun> ComposedInstance::generators() const
{
  return { *builtin_function( "NOTIMPLIES" ), f_odd.formula.table() };
}

BoolFun ComposedInstance::target() const
{
  return f_even.formula.table();
}

ComposedInstance compose_cmp_instance( PromiseInstance const& p )
{
  unsigned const j = p.check();
  auto [even, odd] = split( p );
  return { gadget_f_vec( even ), gadget_f_vec( odd ), unsigned( even.size() ), j };
}

RandomizedComposedInstance compose_cmp_instance_randomized( PromiseInstance const& p, unsigned e, RandomStream& r,
                                                            unsigned k, std::optional<unsigned> depth )
{
  unsigned const j = p.check();
  auto [even, odd] = split( p );
  auto const params = threshold_gadget_params( unsigned( even.size() ) );
  auto T = random_threshold_formula( params.m, params.t, e, r, k, depth );
  Term const tt = T.to_term();
  auto build = [&]( std::vector<Formula> const& phis ) {
    auto b = layout( phis );
    b.basis = b.basis.merged( T.basis(), "DeMorgan+THETA" );
    return Formula{ tt.substitute( b.args ), b.arity, b.basis };
  };
  return { build( even ), build( odd ), std::move( T ), params, j };
}

PromiseInstance make_promise_instance( unsigned n, unsigned j, unsigned max_vars, unsigned variant )
{
  if ( n == 0 || j == 0 || j > 2 * n )
    throw RangeError( "need n >= 1 and 1 <= j <= 2n" );
  if ( max_vars == 0 )
    throw RangeError( "CNFs need at least one variable" );
  std::vector<Cnf> sat, unsat;
  sat.emplace_back( 1, std::vector<std::vector<int>>{ { 1 } } );
  sat.emplace_back( 1, std::vector<std::vector<int>>{ { -1 } } );
  unsat.emplace_back( 1, std::vector<std::vector<int>>{ { 1 }, { -1 } } );
  if ( max_vars >= 2 )
  {
    sat.emplace_back( 2, std::vector<std::vector<int>>{ { 1, 2 } } );
    sat.emplace_back( 2, std::vector<std::vector<int>>{ { 1 }, { -2 } } );
    sat.emplace_back( 2, std::vector<std::vector<int>>{ { -1, 2 }, { 1, -2 } } );
    unsat.emplace_back( 2, std::vector<std::vector<int>>{ { 1, 2 }, { -1 }, { -2 } } );
    unsat.emplace_back( 2, std::vector<std::vector<int>>{ { 1 }, { -1, 2 }, { -2 } } );
  }
  PromiseInstance p;
  for ( unsigned i = 0; i < 2 * n; ++i )
  {
    auto const& pool = i < j ? sat : unsat;
    p.cnfs.push_back( pool[( i + variant ) % pool.size()] );
  }
  p.claimed_j = j;
  return p;
}

namespace
{

void require_in( Formula const& f, CloneDesc const& c, char const* what )
{
  if ( !leq( clone_of( { f.table() } ), c ) )
    throw InputError( std::string( "gadget argument is not in " ) + what );
}

Basis merged_basis( Formula const& f, Formula const& g, std::vector<std::string> const& extra )
{
  return with_gates( f.basis.merged( g.basis, "gadget" ), extra );
}

} // namespace

Formula gadget_h_DP( Formula const& f, Formula const& g )
{
  if ( f.arity != g.arity )
    throw InputError( "gadget arguments must have equal arity" );
  require_in( f, named( "DM" ), "DM" );
  require_in( g, named( "DM" ), "DM" );
  unsigned const a = f.arity;
  Term const maj = Term::gate( "MAJ", { Term::var( a ), Term::var( a + 1 ), Term::var( a + 2 ) } );
  return { Term::gate( "XOR3", { f.term, g.term, maj } ), a + 3, merged_basis( f, g, { "XOR3", "MAJ" } ) };
}

Formula gadget_h_MPT21( Formula const& f, Formula const& g )
{
  if ( f.arity != g.arity )
    throw InputError( "gadget arguments must have equal arity" );
  require_in( f, named( "DM" ), "DM" );
  require_in( g, named( "DM" ), "DM" );
  unsigned const a = f.arity;
  return { Term::gate( "MAJ", { OR( f.term, g.term ), Term::var( a ), Term::var( a + 1 ) } ), a + 2,
           merged_basis( f, g, { "MAJ", "OR" } ) };
}

Formula gadget_h_PT1( Formula const& f, Formula const& g )
{
  if ( f.arity != g.arity )
    throw InputError( "gadget arguments must have equal arity" );
  require_in( f, named( "MPT^∞_1" ), "MPT^∞_1" );
  require_in( g, named( "MPT^∞_1" ), "MPT^∞_1" );
  unsigned const a = f.arity;
  return { OR( Term::var( a ), Term::gate( "XOR", { f.term, g.term } ) ), a + 1,
           merged_basis( f, g, { "OR", "XOR" } ) };
}

} // namespace clonelab
