#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/lattice.hpp>
#include <clonelab/synth.hpp>

#include <unordered_map>

namespace clonelab
{

Closure::Closure( Basis basis, unsigned arity, std::optional<BoolFun> target, uint64_t budget )
    : basis_( std::move( basis ) ), arity_( arity )
{
  if ( arity == 0 )
    throw InputError( "closure arity must be >= 1" );
  if ( arity > kClosureMaxArity )
    throw CapacityError( "closure arity " + std::to_string( arity ) + " exceeds the oracle cap of " +
                         std::to_string( kClosureMaxArity ) );
  if ( target && target->arity() != arity )
    throw InputError( "closure target has the wrong arity" );

  unsigned const width = 1u << arity;
  uint32_t const mask = width == 32 ? ~0u : ( ( 1u << width ) - 1u );
  uint64_t const universe = uint64_t( 1 ) << width;
  layer_.assign( universe, -1 );
  gate_.assign( universe, 0 );
  child_offset_.assign( universe, 0 );

  std::vector<uint64_t> seen( ( universe + 63 ) / 64, 0 );
  auto mark = [&]( uint32_t t ) { seen[t >> 6] |= uint64_t( 1 ) << ( t & 63 ); };
  std::optional<uint32_t> goal;
  if ( target )
    goal = uint32_t( target->bits() );

  for ( unsigned i = 0; i < arity; ++i )
  {
    uint32_t p = uint32_t( BoolFun::projection( arity, i ).bits() );
    if ( layer_[p] < 0 )
    {
      layer_[p] = 0;
      mark( p );
      order_.push_back( p );
    }
  }
  if ( goal && layer_[*goal] >= 0 )
  {
    complete_ = false;
    return;
  }

  struct Found
  {
    uint32_t table;
    uint32_t gate;
    std::vector<uint32_t> children;
  };

  uint64_t work = 0;
  std::size_t last_begin = 0;
  for ( int32_t round = 0;; ++round )
  {
    std::size_t const end = order_.size();
    if ( last_begin == end || end == universe )
      break;
    std::vector<Found> found;
    bool hit = false;
    for ( uint32_t gi = 0; gi < basis_.size() && !hit; ++gi )
    {
      BoolFun const& g = basis_.gates()[gi].fun;
      unsigned const k = g.arity();
      unsigned const pre = k - 1;
      std::vector<std::size_t> pos( pre, 0 );
      while ( !hit )
      {
        bool prefix_new = false;
        for ( auto p : pos )
          prefix_new |= p >= last_begin;
        uint32_t A = 0, B = 0, C = 0;
        for ( uint32_t q = 0; q < ( 1u << pre ); ++q )
        {
          uint32_t m = mask;
          for ( unsigned j = 0; j < pre; ++j )
          {
            uint32_t c = order_[pos[j]];
            m &= ( ( q >> j ) & 1u ) ? c : ~c;
          }
          bool g0 = g.get( q );
          bool g1 = g.get( q | ( uint64_t( 1 ) << pre ) );
          if ( g0 && g1 )
            A |= m;
          else if ( g1 )
            B |= m;
          else if ( g0 )
            C |= m;
        }
        std::size_t const from = prefix_new ? 0 : last_begin;
        work += end - from;
        if ( work > budget )
          throw CapacityError( "closure exceeded its budget of " + std::to_string( budget ) + " applications" );
        for ( std::size_t li = from; li < end; ++li )
        {
          uint32_t const c = order_[li];
          uint32_t const out = ( A | ( B & c ) | ( C & ~c ) ) & mask;
          if ( ( seen[out >> 6] >> ( out & 63 ) ) & 1u )
            continue;
          mark( out );
          layer_[out] = round + 1;
          Found fd{ out, gi, {} };
          for ( auto p : pos )
            fd.children.push_back( order_[p] );
          fd.children.push_back( c );
          found.push_back( std::move( fd ) );
          if ( ( goal && out == *goal ) || end + found.size() == universe )
          {
            hit = true;
            break;
          }
        }
        if ( pre == 0 )
          break;
        bool done = true;
        for ( std::size_t j = pre; j-- > 0; )
        {
          if ( ++pos[j] < end )
          {
            done = false;
            break;
          }
          pos[j] = 0;
        }
        if ( done )
          break;
      }
    }
    for ( auto& fd : found )
    {
      gate_[fd.table] = fd.gate;
      child_offset_[fd.table] = uint32_t( children_.size() );
      children_.insert( children_.end(), fd.children.begin(), fd.children.end() );
      order_.push_back( fd.table );
    }
    if ( hit )
    {
      complete_ = order_.size() == universe;
      break;
    }
    last_begin = end;
  }
}

uint32_t Closure::index_of( BoolFun const& f ) const
{
  if ( f.arity() != arity_ )
    throw InputError( "function arity " + std::to_string( f.arity() ) + " does not match closure arity " +
                      std::to_string( arity_ ) );
  return uint32_t( f.bits() );
}

bool Closure::contains( BoolFun const& f ) const
{
  return layer_[index_of( f )] >= 0;
}

std::vector<BoolFun> Closure::members() const
{
  std::vector<BoolFun> v;
  v.reserve( order_.size() );
  for ( auto t : order_ )
    v.push_back( BoolFun::from_bits( arity_, t ) );
  return v;
}

std::optional<unsigned> Closure::layer( BoolFun const& f ) const
{
  auto l = layer_[index_of( f )];
  if ( l < 0 )
    return std::nullopt;
  return unsigned( l );
}

Term Closure::build( uint32_t t, std::vector<std::optional<Term>>& memo ) const
{
  if ( memo[t] )
    return *memo[t];
  Term res = Term::var( 0 );
  if ( layer_[t] == 0 )
  {
    for ( unsigned i = 0; i < arity_; ++i )
    {
      if ( BoolFun::projection( arity_, i ).bits() == t )
        res = Term::var( i );
    }
  }
  else
  {
    auto const& g = basis_.gates()[gate_[t]];
    std::vector<Term> ch;
    for ( unsigned j = 0; j < g.fun.arity(); ++j )
      ch.push_back( build( children_[child_offset_[t] + j], memo ) );
    res = Term::gate( g.name, std::move( ch ) );
  }
  memo[t] = res;
  return res;
}

Term Closure::witness( BoolFun const& f ) const
{
  auto t = index_of( f );
  if ( layer_[t] < 0 )
    throw LogicError( "function " + f.to_string() + " was not derived by the closure" );
  std::vector<std::optional<Term>> memo( layer_.size() );
  return build( t, memo );
}

Closure closure( std::vector<BoolFun> const& F, unsigned arity )
{
  std::vector<Gate> gates;
  for ( std::size_t i = 0; i < F.size(); ++i )
    gates.push_back( { "G" + std::to_string( i ), F[i] } );
  return Closure( Basis( "F", std::move( gates ) ), arity );
}

Term synthesize( BoolFun const& f, Basis const& F )
{
  if ( f.arity() > kClosureMaxArity )
    throw CapacityError( "synthesis is limited to arity " + std::to_string( kClosureMaxArity ) );
  auto m = member( f, F.functions() );
  if ( !m.member )
    throw LogicError( "function " + f.to_string() + " is not in the clone of basis " + F.name() +
                      ": it fails to preserve " + m.separator->to_string() );
  Closure cl( F, f.arity(), f );
  if ( !cl.contains( f ) )
    throw InternalError( "closure missed a member function " + f.to_string() );
  Term t = cl.witness( f );
  if ( truth_table( t, F, f.arity() ) != f )
    throw InternalError( "synthesized term does not compute " + f.to_string() );
  return t;
}

namespace
{

uint32_t instantiate( CircuitDag& out, Term const& t, std::vector<uint32_t> const& inputs,
                      std::unordered_map<void const*, uint32_t>& memo )
{
  if ( t.is_var() )
  {
    if ( t.var_index() >= inputs.size() )
      throw InternalError( "definition uses a variable beyond the gate arity" );
    return inputs[t.var_index()];
  }
  auto it = memo.find( t.id() );
  if ( it != memo.end() )
    return it->second;
  std::vector<uint32_t> ch;
  for ( auto const& c : t.children() )
    ch.push_back( instantiate( out, c, inputs, memo ) );
  auto id = out.add_gate( t.name(), std::move( ch ) );
  memo.emplace( t.id(), id );
  return id;
}

Term definition_for( Gate const& g, Basis const& from, Basis const& to )
{
  for ( auto const& h : to.gates() )
  {
    if ( h.fun == g.fun )
    {
      std::vector<Term> vars;
      for ( unsigned i = 0; i < g.fun.arity(); ++i )
        vars.push_back( Term::var( i ) );
      return Term::gate( h.name, std::move( vars ) );
    }
  }
  if ( auto d = from.definition( g.name, to.name() ) )
    return d->term;
  auto m = member( g.fun, to.functions() );
  if ( !m.member )
    throw RefusalError( "gate " + g.name + " is not in the clone of basis " + to.name() + ": it fails to preserve " +
                        m.separator->to_string() );
  return synthesize( g.fun, to );
}

} // namespace

CircuitDag convert_basis( CircuitDag const& c, Basis const& from, Basis const& to, unsigned verify_arity )
{
  c.validate( from );
  std::unordered_map<std::string, Term> defs;
  CircuitDag out( c.arity() );
  std::vector<uint32_t> map( c.nodes().size() );
  for ( std::size_t i = 0; i < c.nodes().size(); ++i )
  {
    auto const& nd = c.nodes()[i];
    if ( nd.is_var )
    {
      map[i] = out.add_var( nd.var );
      continue;
    }
    auto it = defs.find( nd.gate );
    if ( it == defs.end() )
      it = defs.emplace( nd.gate, definition_for( from.at( nd.gate ), from, to ) ).first;
    std::vector<uint32_t> ins;
    for ( auto in : nd.inputs )
      ins.push_back( map[in] );
    std::unordered_map<void const*, uint32_t> memo;
    map[i] = instantiate( out, it->second, ins, memo );
  }
  out.set_output( map[c.output()] );
  out = out.pruned();
  if ( c.arity() <= verify_arity && truth_table( out, to ) != truth_table( c, from ) )
    throw InternalError( "basis conversion changed the computed function" );
  return out;
}

namespace
{

std::string fresh_name( Basis const& b, std::string stem )
{
  while ( b.find( stem ) )
    stem += "'";
  return stem;
}

uint32_t balanced( CircuitDag& out, Term const& op, std::vector<uint32_t> ids )
{
  while ( ids.size() > 1 )
  {
    std::vector<uint32_t> next;
    for ( std::size_t i = 0; i + 1 < ids.size(); i += 2 )
    {
      std::unordered_map<void const*, uint32_t> memo;
      next.push_back( instantiate( out, op, { ids[i], ids[i + 1] }, memo ) );
    }
    if ( ids.size() % 2 )
      next.push_back( ids.back() );
    ids = std::move( next );
  }
  return ids[0];
}

} // namespace

CircuitDag eliminate_constants( CircuitDag const& c, Basis const& from, Basis const& to, ConstantMode mode,
                                unsigned verify_arity )
{
  c.validate( from );
  bool const use0 = mode != ConstantMode::One;
  bool const use1 = mode != ConstantMode::Zero;
  auto const target = to.functions();
  auto const AND = *builtin_function( "AND" );
  auto const OR = *builtin_function( "OR" );
  auto const ZERO = *builtin_function( "ZERO" );
  auto const ONE = *builtin_function( "ONE" );
  if ( use0 && !member( AND, target ).member )
    throw RefusalError( "eliminating 0 needs and in the clone of basis " + to.name() );
  if ( use1 && !member( OR, target ).member )
    throw RefusalError( "eliminating 1 needs or in the clone of basis " + to.name() );

  auto const f = truth_table( c, from, std::max( verify_arity, 20u ) );
  auto m = member( f, target );
  if ( !m.member )
    throw RefusalError( "the computed function is not in the clone of basis " + to.name() +
                        ": it fails to preserve " + m.separator->to_string() );

  Basis ext = to;
  std::string const zname = fresh_name( to, "ZERO" );
  std::string const oname = fresh_name( to, "ONE" );
  if ( use0 )
    ext.add_gate( { zname, ZERO } );
  if ( use1 )
    ext.add_gate( { oname, ONE } );
  std::string ext_name = to.name() + "+const";
  ext = Basis( ext_name, ext.gates() );
  auto mid = convert_basis( c, from, ext, verify_arity );

  CircuitDag out( c.arity() );
  std::vector<uint32_t> map( mid.nodes().size() );
  std::optional<uint32_t> conj, disj;
  std::optional<Term> zero_def, one_def;
  bool const zero_in = use0 && member( ZERO, target ).member;
  bool const one_in = use1 && member( ONE, target ).member;
  auto all_vars = [&] {
    std::vector<uint32_t> ids;
    for ( unsigned i = 0; i < c.arity(); ++i )
      ids.push_back( out.add_var( i ) );
    return ids;
  };
  for ( std::size_t i = 0; i < mid.nodes().size(); ++i )
  {
    auto const& nd = mid.nodes()[i];
    if ( nd.is_var )
    {
      map[i] = out.add_var( nd.var );
      continue;
    }
    std::vector<uint32_t> ins;
    for ( auto in : nd.inputs )
      ins.push_back( map[in] );
    std::unordered_map<void const*, uint32_t> memo;
    bool const is0 = use0 && nd.gate == zname;
    bool const is1 = use1 && nd.gate == oname;
    if ( is0 && zero_in )
    {
      if ( !zero_def )
        zero_def = synthesize( ZERO, to );
      map[i] = instantiate( out, *zero_def, ins, memo );
    }
    else if ( is0 )
    {
      if ( !conj )
        conj = balanced( out, synthesize( AND, to ), all_vars() );
      map[i] = *conj;
    }
    else if ( is1 && one_in )
    {
      if ( !one_def )
        one_def = synthesize( ONE, to );
      map[i] = instantiate( out, *one_def, ins, memo );
    }
    else if ( is1 )
    {
      if ( !disj )
        disj = balanced( out, synthesize( OR, to ), all_vars() );
      map[i] = *disj;
    }
    else
    {
      map[i] = out.add_gate( nd.gate, ins );
    }
  }
  out.set_output( map[mid.output()] );
  out = out.pruned();
  if ( c.arity() <= verify_arity && truth_table( out, to ) != f )
    throw InternalError( "constant elimination changed the computed function" );
  return out;
}

} // namespace clonelab
