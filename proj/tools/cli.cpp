#include "cli.hpp"

#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/fastpaths.hpp>
#include <clonelab/gadgets.hpp>
#include <clonelab/lattice.hpp>
#include <clonelab/synth.hpp>
#include <clonelab/thresholds.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

namespace clonelab::cli
{

using nlohmann::json;

namespace
{

struct Ctx
{
  std::istream& in;
  std::ostream& out;
  bool as_json = false;
  json doc = json::object();
  std::vector<std::string> lines;

  void line( std::string s ) { lines.push_back( std::move( s ) ); }
  void flush()
  {
    if ( as_json )
      out << doc.dump( 2 ) << '\n';
    else
    {
      for ( auto const& l : lines )
        out << l << '\n';
    }
  }
};

std::string trim( std::string s )
{
  auto const ws = " \t\r\n";
  auto b = s.find_first_not_of( ws );
  if ( b == std::string::npos )
    return {};
  return s.substr( b, s.find_last_not_of( ws ) - b + 1 );
}

/// "@path", "@-" or "-" read a file or stdin; anything else is literal text.
std::string read_source( std::string const& s, std::istream& in )
{
  if ( s == "-" || s == "@-" )
  {
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  if ( !s.empty() && s[0] == '@' )
  {
    std::ifstream f( s.substr( 1 ) );
    if ( !f )
      throw InputError( "cannot open '" + s.substr( 1 ) + "'" );
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
  }
  return s;
}

Basis load_basis( std::string const& list )
{
  if ( list == "DeMorgan" || list == "DeMorgan01" || list.rfind( "THETA(", 0 ) == 0 )
    return builtin_basis( list );
  return basis_from_list( list, list );
}

bool is_table_literal( std::string const& s )
{
  static std::regex const re( "^[0-9]+:[0-9a-fA-F]+$" );
  return std::regex_match( s, re );
}

bool is_netlist( std::string const& s )
{
  return s.rfind( "inputs", 0 ) == 0 || s.find( " = " ) != std::string::npos || s.find( "\nout" ) != std::string::npos;
}

struct Circuit
{
  Basis basis;
  CircuitDag dag;

  BoolFun table() const { return truth_table( dag, basis ); }
};

/*! Circuit from a table literal `n:hex`, a netlist or a prefix formula.
 *  A basis given explicitly must contain every gate used. */
Circuit load_circuit( std::string const& text, std::string const& basis_text, std::optional<unsigned> arity,
                      std::istream& in )
{
  auto src = trim( read_source( text, in ) );
  if ( is_table_literal( src ) )
  {
    auto f = BoolFun::parse( src );
    Basis b( "table", { Gate{ "G0", f } } );
    CircuitDag dag( std::max( 1u, f.arity() ) );
    std::vector<uint32_t> ins;
    for ( unsigned i = 0; i < f.arity(); ++i )
      ins.push_back( dag.add_var( i ) );
    if ( f.arity() == 0 )
      throw InputError( "table literals need arity at least 1" );
    dag.set_output( dag.add_gate( "G0", ins ) );
    return { b, dag };
  }
  Basis b = basis_text.empty() ? basis_for_formula( src ) : load_basis( basis_text );
  if ( is_netlist( src ) )
  {
    auto dag = parse_netlist( src, b );
    dag.validate( b );
    return { b, dag };
  }
  auto t = parse_formula( src, b );
  unsigned n = arity ? *arity : std::max( 1u, t.min_arity() );
  if ( t.min_arity() > n )
    throw InputError( "formula uses x" + std::to_string( t.min_arity() - 1 ) + " beyond the given arity" );
  return { b, to_dag( t, n ) };
}

Formula to_formula( Circuit const& c )
{
  return Formula{ to_term( c.dag ), c.dag.arity(), c.basis };
}

json clone_json( CloneDesc const& c )
{
  return { { "name", name( c ) }, { "descriptor", c.to_string() } };
}

std::string yes_no( bool b )
{
  return b ? "yes" : "no";
}

std::string fmt_double( double x )
{
  char buf[64];
  std::snprintf( buf, sizeof buf, "%.17g", x );
  return buf;
}

/// Parses 0/1 digit strings with x_0 first.
Assignment parse_assignment( std::string const& s, unsigned arity )
{
  if ( s.size() != arity )
    throw InputError( "assignment needs " + std::to_string( arity ) + " digits (x0 first)" );
  uint64_t bits = 0;
  for ( unsigned i = 0; i < arity; ++i )
  {
    if ( s[i] != '0' && s[i] != '1' )
      throw ParseError( "assignment digits must be 0 or 1", i );
    if ( s[i] == '1' )
      bits |= uint64_t( 1 ) << i;
  }
  return { arity, bits };
}

std::string assignment_string( uint64_t a, unsigned arity )
{
  std::string s;
  for ( unsigned i = 0; i < arity; ++i )
    s += ( ( a >> i ) & 1 ) ? '1' : '0';
  return s;
}

RandomStream make_stream( std::string const& hex, std::optional<uint64_t> seed, uint64_t length, std::istream& in )
{
  if ( !hex.empty() && seed )
    throw InputError( "give either -r or --seed, not both" );
  if ( !hex.empty() )
    return RandomStream::from_hex( trim( read_source( hex, in ) ) );
  if ( !seed )
    throw InputError( "a random stream is required: -r HEX or --seed S" );
  return RandomStream::from_seed( *seed, length );
}

/// Formulas given by --phi (prefix formulas) or --cnf (DIMACS text or @file).
std::vector<Formula> load_phis( std::vector<std::string> const& phis, std::vector<std::string> const& cnfs,
                                std::istream& in )
{
  if ( !phis.empty() && !cnfs.empty() )
    throw InputError( "give formulas either with --phi or with --cnf" );
  std::vector<Formula> out;
  for ( auto const& p : phis )
  {
    auto c = load_circuit( p, "", std::nullopt, in );
    out.push_back( to_formula( c ) );
  }
  for ( auto const& c : cnfs )
    out.push_back( Cnf::parse_dimacs( read_source( c, in ) ).to_formula() );
  if ( out.empty() )
    throw InputError( "no formulas given" );
  return out;
}

std::vector<Cnf> load_cnfs( std::vector<std::string> const& cnfs, std::istream& in )
{
  std::vector<Cnf> out;
  for ( auto const& c : cnfs )
    out.push_back( Cnf::parse_dimacs( read_source( c, in ) ) );
  return out;
}

void report_formula( Ctx& ctx, std::string const& key, Formula const& f, bool with_clone )
{
  ctx.line( key + ": " + print_formula( f.term ) );
  ctx.line( key + " arity: " + std::to_string( f.arity ) );
  json j{ { "formula", print_formula( f.term ) }, { "arity", f.arity } };
  if ( with_clone && f.arity <= kMaxArity )
  {
    auto c = clone_of( { f.table() } );
    ctx.line( key + " clone: " + name( c ) );
    j["clone"] = clone_json( c );
  }
  ctx.doc[key] = j;
}

void report_netlist( Ctx& ctx, std::string const& key, Formula const& f )
{
  auto dag = to_dag( f.term, f.arity );
  auto text = print_netlist( dag );
  ctx.line( "# " + key );
  std::istringstream is( text );
  for ( std::string l; std::getline( is, l ); )
    ctx.line( l );
  ctx.doc[key] = { { "netlist", text }, { "arity", f.arity }, { "gates", dag.gate_count() } };
}

} // namespace

int run( std::vector<std::string> const& args, std::istream& in, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Boolean clone toolkit" };
  app.require_subcommand( 1 );
  app.fallthrough();
  Ctx ctx{ in, out, false, json::object(), {} };
  app.add_flag( "--json", ctx.as_json, "Print a JSON document instead of text" );

  int code = kTrue;

  // shared option storage
  std::string f_text, g_text, F_text, basis_text, assign;
  std::optional<unsigned> arity;
  bool want_witness = false, want_explain = false, want_closure = false;

  auto* eval_cmd = app.add_subcommand( "eval", "Evaluate a function on one assignment" );
  eval_cmd->add_option( "-f,--function", f_text, "Formula, netlist or n:hex table" )->required();
  eval_cmd->add_option( "-a,--assignment", assign, "0/1 digits, x0 first" )->required();
  eval_cmd->add_option( "--basis", basis_text, "Basis of the formula" );
  eval_cmd->add_option( "-n,--arity", arity, "Arity of the formula" );
  eval_cmd->callback( [&] {
    auto c = load_circuit( f_text, basis_text, arity, in );
    bool v = eval( c.dag, c.basis, parse_assignment( assign, c.dag.arity() ) );
    ctx.line( v ? "1" : "0" );
    ctx.doc = { { "value", v } };
  } );

  auto* table_cmd = app.add_subcommand( "table", "Print the truth table as n:hex (least significant nibble first)" );
  table_cmd->add_option( "-f,--function", f_text )->required();
  table_cmd->add_option( "--basis", basis_text );
  table_cmd->add_option( "-n,--arity", arity );
  table_cmd->callback( [&] {
    auto t = load_circuit( f_text, basis_text, arity, in ).table();
    ctx.line( t.to_string() );
    ctx.doc = { { "arity", t.arity() }, { "table", t.to_string() } };
  } );

  auto* id_cmd = app.add_subcommand( "id", "Name the clone generated by a basis or a function" );
  id_cmd->add_option( "-F,--generators", F_text, "Comma separated gates or a named basis" );
  id_cmd->add_option( "-f,--function", f_text );
  id_cmd->add_option( "--basis", basis_text );
  id_cmd->callback( [&] {
    std::vector<BoolFun> F;
    if ( !F_text.empty() )
      F = load_basis( F_text ).functions();
    if ( !f_text.empty() )
      F.push_back( load_circuit( f_text, basis_text, std::nullopt, in ).table() );
    if ( F_text.empty() && f_text.empty() )
      throw InputError( "id needs -F or -f" );
    auto c = clone_of( F );
    ctx.line( name( c ) );
    ctx.doc = clone_json( c );
  } );

  auto* member_cmd = app.add_subcommand( "member", "Decide f in [F]; exit 0 for members, 1 otherwise" );
  member_cmd->add_option( "-f,--function", f_text )->required();
  member_cmd->add_option( "-F,--generators", F_text )->required();
  member_cmd->add_option( "--basis", basis_text, "Basis of the formula f" );
  member_cmd->add_option( "-n,--arity", arity );
  member_cmd->add_flag( "--witness", want_witness, "Require a witness term over F" );
  member_cmd->add_flag( "--explain", want_explain, "Show the separating relation and matrix" );
  member_cmd->add_flag( "--closure", want_closure, "Cross-check with the closure oracle (arity <= 4)" );
  member_cmd->callback( [&] {
    auto gens = load_basis( F_text );
    auto f = load_circuit( f_text, basis_text, arity, in ).table();
    auto m = member( f, gens.functions() );
    code = m.member ? kTrue : kFalse;
    ctx.doc["member"] = m.member;
    std::string text = m.member ? "member" : "not a member";
    if ( want_closure )
    {
      if ( f.arity() > kClosureMaxArity )
        throw CapacityError( "the closure oracle handles arity at most " + std::to_string( kClosureMaxArity ) );
      bool c = Closure( gens, f.arity(), f ).contains( f );
      if ( c != m.member )
        throw InternalError( "closure oracle disagrees with the invariant criterion" );
      ctx.doc["closure_agrees"] = true;
    }
    if ( m.member && ( want_witness || f.arity() <= kClosureMaxArity ) )
    {
      auto w = synthesize( f, gens );
      text += "; witness: " + print_formula( w );
      ctx.doc["witness"] = print_formula( w );
    }
    if ( !m.member )
    {
      ctx.doc["separator"] = m.separator->to_string();
      if ( want_explain )
      {
        text += "; separator: " + m.separator->to_string();
        if ( m.witness )
        {
          text += "; matrix: " + m.witness->to_inline();
          ctx.doc["matrix"] = m.witness->to_inline();
        }
        std::vector<std::string> consulted;
        for ( auto const& r : m.consulted )
          consulted.push_back( r.to_string() );
        ctx.doc["consulted"] = consulted;
      }
    }
    ctx.line( text );
  } );

  std::string from_text, to_text, constants;
  auto* convert_cmd = app.add_subcommand( "convert", "Rewrite a circuit over another basis" );
  convert_cmd->add_option( "-c,--circuit", f_text, "Netlist or formula (or @file)" )->required();
  convert_cmd->add_option( "--from", from_text, "Source basis (default: the gates used)" );
  convert_cmd->add_option( "--to", to_text, "Target basis" )->required();
  convert_cmd->add_option( "--constants", constants, "Eliminate constants: zero, one or both" )
      ->check( CLI::IsMember( { "zero", "one", "both" } ) );
  convert_cmd->callback( [&] {
    auto c = load_circuit( f_text, from_text, std::nullopt, in );
    auto to = load_basis( to_text );
    CircuitDag r = constants.empty()
                       ? convert_basis( c.dag, c.basis, to )
                       : eliminate_constants( c.dag, c.basis, to,
                                              constants == "zero"  ? ConstantMode::Zero
                                              : constants == "one" ? ConstantMode::One
                                                                   : ConstantMode::Both );
    auto text = print_netlist( r );
    std::istringstream is( text );
    for ( std::string l; std::getline( is, l ); )
      ctx.line( l );
    ctx.doc = { { "netlist", text }, { "gates", r.gate_count() }, { "depth", r.depth() } };
  } );

  unsigned thr_n = 0, thr_t = 0;
  bool want_table = false, want_circuit = false;
  auto* thr_cmd = app.add_subcommand( "thr", "Threshold function theta^n_t and its clone" );
  thr_cmd->add_option( "-n", thr_n )->required();
  thr_cmd->add_option( "-t", thr_t )->required();
  thr_cmd->add_flag( "--table", want_table );
  thr_cmd->add_flag( "--circuit", want_circuit, "Sorting network over DeMorgan" );
  thr_cmd->callback( [&] {
    if ( thr_t > thr_n + 1 || thr_n == 0 )
      throw RangeError( "thr needs n >= 1 and 0 <= t <= n+1" );
    auto c = threshold_clone( thr_n, thr_t );
    ctx.line( "clone: " + name( c ) );
    ctx.doc["clone"] = clone_json( c );
    if ( want_table )
    {
      auto t = theta( thr_n, thr_t ).to_string();
      ctx.line( "table: " + t );
      ctx.doc["table"] = t;
    }
    if ( want_circuit )
    {
      auto dag = theta_circuit( thr_n, thr_t );
      auto text = print_netlist( dag );
      std::istringstream is( text );
      for ( std::string l; std::getline( is, l ); )
        ctx.line( l );
      ctx.doc["netlist"] = text;
      ctx.doc["gates"] = dag.gate_count();
    }
  } );

  unsigned rt_e = 1, rt_k = 3;
  std::string rt_hex;
  std::optional<uint64_t> rt_seed;
  uint64_t rt_length = uint64_t( 1 ) << 24;
  std::optional<unsigned> rt_depth;
  unsigned rt_verify = 0;
  bool want_term = false;
  auto* rt_cmd = app.add_subcommand( "randthr", "Random THETA(k) formula for theta^n_t" );
  rt_cmd->add_option( "-n", thr_n )->required();
  rt_cmd->add_option( "-t", thr_t )->required();
  rt_cmd->add_option( "-e", rt_e, "Error exponent: failure probability at most 2^-e" );
  rt_cmd->add_option( "-k", rt_k, "Gate THETA_<k+1>_<k>" );
  rt_cmd->add_option( "-r,--random", rt_hex, "Random bits as hex (or @file)" );
  rt_cmd->add_option( "--seed", rt_seed, "Expand a seed (splitmix64) instead of -r" );
  rt_cmd->add_option( "--length", rt_length, "Bits per seeded stream" );
  rt_cmd->add_option( "--depth", rt_depth, "Override the tree depth" );
  rt_cmd->add_option( "--verify", rt_verify, "Draw this many samples and count exact successes" );
  rt_cmd->add_flag( "--term", want_term, "Print the formula" );
  rt_cmd->callback( [&] {
    auto stream = make_stream( rt_hex, rt_seed, rt_length, in );
    auto f = random_threshold_formula( thr_n, thr_t, rt_e, stream, rt_k, rt_depth );
    ctx.line( "N: " + std::to_string( f.N ) );
    ctx.line( "depth: " + std::to_string( f.depth ) );
    ctx.line( "leaves: " + std::to_string( f.leaves.size() ) );
    ctx.line( "bits used: " + std::to_string( stream.consumed() ) );
    ctx.doc = { { "N", f.N }, { "depth", f.depth }, { "leaves", f.leaves.size() }, { "bits_used", stream.consumed() } };
    bool const checkable = thr_n <= kMaxArity;
    BoolFun target = checkable ? theta( thr_n, thr_t ) : BoolFun();
    if ( checkable )
    {
      bool ok = f.truth_table() == target;
      ctx.line( "equals theta: " + yes_no( ok ) );
      ctx.doc["equals_theta"] = ok;
    }
    if ( want_term )
    {
      auto t = print_formula( f.to_term() );
      ctx.line( "formula: " + t );
      ctx.doc["formula"] = t;
    }
    if ( rt_verify > 0 )
    {
      if ( !checkable )
        throw CapacityError( "--verify needs n <= " + std::to_string( kMaxArity ) );
      unsigned ok = 0;
      for ( unsigned i = 0; i < rt_verify; ++i )
      {
        // seeded runs use one stream per sample, hex runs continue the given stream
        if ( rt_seed )
        {
          auto s = RandomStream::from_seed( *rt_seed + 1 + i, rt_length );
          ok += random_threshold_formula( thr_n, thr_t, rt_e, s, rt_k, rt_depth ).truth_table() == target;
        }
        else
          ok += random_threshold_formula( thr_n, thr_t, rt_e, stream, rt_k, rt_depth ).truth_table() == target;
      }
      ctx.line( "verify: " + std::to_string( ok ) + "/" + std::to_string( rt_verify ) );
      ctx.doc["verify"] = { { "samples", rt_verify }, { "successes", ok } };
    }
  } );

  // reduce
  auto* reduce_cmd = app.add_subcommand( "reduce", "Build reduction gadgets" );
  reduce_cmd->require_subcommand( 1 );
  std::vector<std::string> phis, cnfs;
  std::string h_f, h_g, instance;
  std::optional<unsigned> claimed_j;
  unsigned max_vars = 2;
  bool want_decide = false;

  auto add_phi_opts = [&]( CLI::App* c ) {
    c->add_option( "--phi", phis, "Prefix formula (repeatable)" );
    c->add_option( "--cnf", cnfs, "DIMACS text or @file (repeatable)" );
  };
  auto* fphi = reduce_cmd->add_subcommand( "f-phi", "f_phi(x,y,z,u) = ((x and phi) and y) or (not(x and phi) and z)" );
  add_phi_opts( fphi );
  fphi->callback( [&] {
    auto ph = load_phis( phis, cnfs, in );
    if ( ph.size() != 1 )
      throw InputError( "f-phi takes exactly one formula" );
    bool sat = satisfiable( ph[0] );
    ctx.line( "satisfiable: " + yes_no( sat ) );
    ctx.doc["satisfiable"] = sat;
    report_formula( ctx, "gadget", gadget_f_phi( ph[0] ), true );
  } );
  auto vec_cmd = [&]( char const* nm, char const* help, bool g ) {
    auto* c = reduce_cmd->add_subcommand( nm, help );
    add_phi_opts( c );
    c->callback( [&, g] {
      auto ph = load_phis( phis, cnfs, in );
      auto gad = g ? gadget_g_vec( ph ) : gadget_f_vec( ph );
      unsigned s = 0;
      std::vector<bool> sats;
      for ( auto const& p : ph )
      {
        sats.push_back( satisfiable( p ) );
        s += sats.back();
      }
      ctx.line( "m: " + std::to_string( gad.params.m ) + ", t: " + std::to_string( gad.params.t ) );
      ctx.line( "satisfiable count: " + std::to_string( s ) );
      ctx.doc["m"] = gad.params.m;
      ctx.doc["t"] = gad.params.t;
      ctx.doc["satisfiable"] = sats;
      report_formula( ctx, "gadget", gad.formula, true );
      ctx.line( "k: " + std::to_string( gad.params.k( s ) ) );
      ctx.doc["k"] = gad.params.k( s );
      if ( gad.formula.arity <= kMaxArity )
      {
        auto gen = g ? gadget_pt_generator().table() : *builtin_function( "NOTIMPLIES" );
        auto c = clone_of( { gen, gad.formula.table() } );
        std::string key = g ? "with x and (y -> z)" : "with NOTIMPLIES";
        ctx.line( "clone " + key + ": " + name( c ) );
        ctx.doc["clone_with_generator"] = clone_json( c );
      }
    } );
  };
  vec_cmd( "f-vec", "theta^m_t(x_i and phi_i, ...)", false );
  vec_cmd( "g-vec", "f_vec or (y and all variables)", true );
  auto h_cmd = [&]( char const* nm, char const* help, Formula ( *build )( Formula const&, Formula const& ) ) {
    auto* c = reduce_cmd->add_subcommand( nm, help );
    c->add_option( "--f", h_f )->required();
    c->add_option( "--g", h_g )->required();
    c->callback( [&, build] {
      auto f = to_formula( load_circuit( h_f, "", std::nullopt, in ) );
      auto g = to_formula( load_circuit( h_g, "", std::nullopt, in ) );
      if ( f.arity != g.arity )
      {
        unsigned n = std::max( f.arity, g.arity );
        f.arity = g.arity = n;
      }
      bool eq = equivalent( f, g );
      ctx.line( "f equivalent to g: " + yes_no( eq ) );
      ctx.doc["equivalent"] = eq;
      report_formula( ctx, "gadget", build( f, g ), true );
    } );
  };
  h_cmd( "h-dp", "f + g + theta^3_2(y0,y1,y2) for f, g in DM", &gadget_h_DP );
  h_cmd( "h-mpt21", "theta^3_2(f or g, y, z) for f, g in DM", &gadget_h_MPT21 );
  h_cmd( "h-pt1", "y or (f + g) for f, g in MPT^inf_1", &gadget_h_PT1 );

  auto promise = [&]() {
    PromiseInstance p;
    if ( !instance.empty() )
    {
      if ( !cnfs.empty() )
        throw InputError( "give either --instance or --cnf" );
      unsigned n = 0, j = 0, v = 0;
      char c1 = 0, c2 = 0;
      std::istringstream is( instance );
      is >> n >> c1 >> j;
      if ( !is || c1 != ',' )
        throw ParseError( "expected --instance n,j[,variant]", 0 );
      if ( is >> c2 )
      {
        if ( c2 != ',' || !( is >> v ) )
          throw ParseError( "expected --instance n,j[,variant]", 0 );
      }
      p = make_promise_instance( n, j, max_vars, v );
    }
    else
      p.cnfs = load_cnfs( cnfs, in );
    if ( claimed_j )
      p.claimed_j = claimed_j;
    return p;
  };
  auto add_promise_opts = [&]( CLI::App* c ) {
    c->add_option( "--cnf", cnfs, "DIMACS text or @file, in order (repeatable)" );
    c->add_option( "--instance", instance, "Synthetic promise instance n,j[,variant] with 2n CNFs" );
    c->add_option( "--max-vars", max_vars, "Variables per synthetic CNF" );
    c->add_option( "--j", claimed_j, "Claimed length of the satisfiable prefix" );
  };
  auto* comp = reduce_cmd->add_subcommand( "compose", "Instance ({NOTIMPLIES, f_odd}, f_even) from a promise instance" );
  add_promise_opts( comp );
  comp->add_flag( "--decide", want_decide, "Decide membership of f_even" );
  comp->callback( [&] {
    auto p = promise();
    auto inst = compose_cmp_instance( p );
    ctx.line( "j: " + std::to_string( inst.j ) );
    ctx.line( "expected member: " + yes_no( inst.expected_member() ) );
    ctx.doc["j"] = inst.j;
    ctx.doc["expected_member"] = inst.expected_member();
    report_netlist( ctx, "f_odd", inst.f_odd.formula );
    report_netlist( ctx, "f_even", inst.f_even.formula );
    if ( want_decide )
    {
      bool m = member( inst.target(), inst.generators() ).member;
      ctx.line( m ? "member" : "not a member" );
      ctx.doc["member"] = m;
      code = m ? kTrue : kFalse;
    }
  } );
  auto* comp_r = reduce_cmd->add_subcommand( "compose-rand", "Composer with a random THETA(k) formula in place of theta^m_t" );
  add_promise_opts( comp_r );
  comp_r->add_option( "-e", rt_e );
  comp_r->add_option( "-k", rt_k );
  comp_r->add_option( "-r,--random", rt_hex );
  comp_r->add_option( "--seed", rt_seed );
  comp_r->add_option( "--length", rt_length );
  comp_r->add_option( "--depth", rt_depth );
  comp_r->add_flag( "--decide", want_decide );
  comp_r->callback( [&] {
    auto p = promise();
    auto stream = make_stream( rt_hex, rt_seed, rt_length, in );
    auto inst = compose_cmp_instance_randomized( p, rt_e, stream, rt_k, rt_depth );
    ctx.line( "j: " + std::to_string( inst.j ) );
    ctx.line( "threshold N: " + std::to_string( inst.threshold.N ) + ", depth: " + std::to_string( inst.threshold.depth ) );
    ctx.doc["j"] = inst.j;
    ctx.doc["expected_member"] = inst.j % 2 == 0;
    ctx.doc["threshold"] = { { "N", inst.threshold.N }, { "depth", inst.threshold.depth } };
    report_netlist( ctx, "f_odd", inst.f_odd );
    report_netlist( ctx, "f_even", inst.f_even );
    if ( want_decide )
    {
      bool m = member( inst.f_even.table(), { builtin_function( "NOTIMPLIES" ).value(), inst.f_odd.table() } ).member;
      ctx.line( m ? "member" : "not a member" );
      ctx.doc["member"] = m;
      code = m ? kTrue : kFalse;
    }
  } );

  // lattice
  std::string la, lb;
  auto* lat = app.add_subcommand( "lattice", "Post's lattice operations on names or descriptors" );
  lat->require_subcommand( 1 );
  auto* leq_cmd = lat->add_subcommand( "leq", "Exit 0 iff A is a subclone of B" );
  leq_cmd->add_option( "A", la )->required();
  leq_cmd->add_option( "B", lb )->required();
  leq_cmd->callback( [&] {
    bool r = leq( named( la ), named( lb ) );
    code = r ? kTrue : kFalse;
    ctx.line( r ? "yes" : "no" );
    ctx.doc = { { "leq", r } };
  } );
  auto bin = [&]( char const* nm, CloneDesc ( *op )( CloneDesc const&, CloneDesc const& ) ) {
    auto* c = lat->add_subcommand( nm );
    c->add_option( "A", la )->required();
    c->add_option( "B", lb )->required();
    c->callback( [&, op] {
      auto r = op( named( la ), named( lb ) );
      ctx.line( name( r ) );
      ctx.doc = clone_json( r );
    } );
  };
  bin( "meet", &meet );
  bin( "join", &join );
  auto* name_cmd = lat->add_subcommand( "name", "Canonical name and descriptor" );
  name_cmd->add_option( "A", la )->required();
  name_cmd->callback( [&] {
    auto c = named( la );
    ctx.line( name( c ) + " " + c.to_string() );
    ctx.doc = clone_json( c );
  } );

  std::string B_text;
  auto* cls = app.add_subcommand( "classify", "Complexity of the circuit membership problem for a basis" );
  cls->add_option( "-B,--basis", B_text )->required();
  cls->callback( [&] {
    auto c = classify_basis( load_basis( B_text ) );
    ctx.line( c.label );
    ctx.doc = { { "label", c.label }, { "clone", clone_json( c.clone ) } };
  } );

  unsigned sk = 3;
  bool want_params = false;
  auto* sig = app.add_subcommand( "sigma", "Interior fixed point of (k+1)x^k - kx^(k+1)" );
  sig->add_option( "-k", sk )->required();
  sig->add_flag( "--params", want_params, "Also print the convergence constants" );
  sig->callback( [&] {
    double s = sigma( sk );
    ctx.line( fmt_double( s ) );
    ctx.doc = { { "k", sk }, { "sigma", s } };
    if ( want_params )
    {
      auto p = amplifier_params( sk );
      ctx.line( "epsilon0 " + fmt_double( p.epsilon0 ) + " gamma0 " + fmt_double( p.gamma0 ) );
      ctx.line( "epsilon1 " + fmt_double( p.epsilon1 ) + " gamma1 " + fmt_double( p.gamma1 ) );
      ctx.doc["epsilon0"] = p.epsilon0;
      ctx.doc["gamma0"] = p.gamma0;
      ctx.doc["epsilon1"] = p.epsilon1;
      ctx.doc["gamma1"] = p.gamma1;
    }
  } );

  std::string g_basis;
  auto* eq = app.add_subcommand( "equiv", "Exit 0 iff f and g agree everywhere" );
  eq->add_option( "-f", f_text )->required();
  eq->add_option( "-g", g_text )->required();
  eq->add_option( "--basis", basis_text, "Basis of f" );
  eq->add_option( "--gbasis", g_basis, "Basis of g" );
  eq->add_option( "-n,--arity", arity );
  eq->callback( [&] {
    auto f = load_circuit( f_text, basis_text, arity, in ).table();
    auto g = load_circuit( g_text, g_basis, arity, in ).table();
    unsigned n = std::max( f.arity(), g.arity() );
    f = extend( f, n );
    g = extend( g, n );
    auto diff = f ^ g;
    bool same = diff.is_zero();
    code = same ? kTrue : kFalse;
    ctx.doc["equivalent"] = same;
    if ( same )
      ctx.line( "equivalent" );
    else
    {
      uint64_t a = 0;
      while ( !diff.get( a ) )
        ++a;
      ctx.line( "not equivalent; differ at " + assignment_string( a, n ) );
      ctx.doc["counterexample"] = assignment_string( a, n );
    }
  } );

  std::string ambient;
  auto* fast = app.add_subcommand( "fast", "Identify [f] by evaluation for circuits over a restricted basis" );
  fast->add_option( "-f,--function", f_text )->required();
  fast->add_option( "--ambient", ambient, "V, E, A, DM, MT1 or MT0" )->required();
  fast->add_option( "--basis", basis_text );
  fast->add_option( "-n,--arity", arity );
  fast->callback( [&] {
    auto c = load_circuit( f_text, basis_text, arity, in );
    auto id = identify_restricted( c.dag, c.basis, ambient_from_string( ambient ) );
    ctx.line( name( id.clone ) + "; " + id.form + "; evaluations: " + std::to_string( id.evaluations ) );
    ctx.doc = { { "clone", clone_json( id.clone ) }, { "form", id.form }, { "evaluations", id.evaluations } };
  } );

  std::vector<char const*> argv;
  for ( auto const& a : args )
    argv.push_back( a.c_str() );
  try
  {
    app.parse( int( argv.size() ), argv.data() );
  }
  catch ( CLI::ParseError const& e )
  {
    return app.exit( e, out, err ) == 0 ? kTrue : kInputError;
  }
  catch ( InputError const& e )
  {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
  catch ( CapacityError const& e )
  {
    err << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  }
  catch ( LogicError const& e )
  {
    err << "refused: " << e.what() << '\n';
    return kLogicError;
  }
  catch ( std::exception const& e )
  {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  ctx.flush();
  return code;
}

} // namespace clonelab::cli
