#include <clonelab/error.hpp>
#include <clonelab/term.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <sstream>

namespace clonelab
{

Term Term::var( unsigned index )
{
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->index = index;
  return Term( std::move( n ) );
}

Term Term::gate( std::string name, std::vector<Term> children )
{
  auto n = std::make_shared<Node>();
  n->name = std::move( name );
  n->children = std::move( children );
  return Term( std::move( n ) );
}

unsigned Term::min_arity() const
{
  std::unordered_map<void const*, unsigned> memo;
  std::function<unsigned( Term const& )> rec = [&]( Term const& t ) -> unsigned {
    if ( t.is_var() )
      return t.var_index() + 1;
    auto it = memo.find( t.id() );
    if ( it != memo.end() )
      return it->second;
    unsigned m = 0;
    for ( auto const& c : t.children() )
      m = std::max( m, rec( c ) );
    memo.emplace( t.id(), m );
    return m;
  };
  return rec( *this );
}

uint64_t Term::size() const
{
  std::unordered_map<void const*, uint64_t> memo;
  constexpr uint64_t cap = std::numeric_limits<uint64_t>::max();
  std::function<uint64_t( Term const& )> rec = [&]( Term const& t ) -> uint64_t {
    if ( t.is_var() )
      return 1;
    auto it = memo.find( t.id() );
    if ( it != memo.end() )
      return it->second;
    uint64_t s = 1;
    for ( auto const& c : t.children() )
    {
      uint64_t cs = rec( c );
      s = ( cap - s < cs ) ? cap : s + cs;
    }
    memo.emplace( t.id(), s );
    return s;
  };
  return rec( *this );
}

unsigned Term::depth() const
{
  std::unordered_map<void const*, unsigned> memo;
  std::function<unsigned( Term const& )> rec = [&]( Term const& t ) -> unsigned {
    if ( t.is_var() )
      return 0;
    auto it = memo.find( t.id() );
    if ( it != memo.end() )
      return it->second;
    unsigned d = 0;
    for ( auto const& c : t.children() )
      d = std::max( d, rec( c ) );
    memo.emplace( t.id(), d + 1 );
    return d + 1;
  };
  return rec( *this );
}

bool Term::operator==( Term const& o ) const
{
  if ( node_ == o.node_ )
    return true;
  if ( is_var() != o.is_var() )
    return false;
  if ( is_var() )
    return var_index() == o.var_index();
  if ( name() != o.name() || children().size() != o.children().size() )
    return false;
  for ( std::size_t i = 0; i < children().size(); ++i )
  {
    if ( children()[i] != o.children()[i] )
      return false;
  }
  return true;
}

Term Term::substitute( std::vector<Term> const& args ) const
{
  std::unordered_map<void const*, Term> memo;
  std::function<Term( Term const& )> rec = [&]( Term const& t ) -> Term {
    if ( t.is_var() )
    {
      if ( t.var_index() >= args.size() )
        throw InputError( "substitution has no argument for x" + std::to_string( t.var_index() ) );
      return args[t.var_index()];
    }
    auto it = memo.find( t.id() );
    if ( it != memo.end() )
      return it->second;
    std::vector<Term> ch;
    ch.reserve( t.children().size() );
    for ( auto const& c : t.children() )
      ch.push_back( rec( c ) );
    Term r = Term::gate( t.name(), std::move( ch ) );
    memo.emplace( t.id(), r );
    return r;
  };
  return rec( *this );
}

/* Basis */

Basis::Basis( std::string name, std::vector<Gate> gates ) : name_( std::move( name ) )
{
  for ( auto& g : gates )
    add_gate( std::move( g ) );
}

Gate const* Basis::find( std::string_view gate ) const
{
  auto it = index_.find( std::string( gate ) );
  return it == index_.end() ? nullptr : &gates_[it->second];
}

Gate const& Basis::at( std::string_view gate ) const
{
  auto g = find( gate );
  if ( !g )
    throw InputError( "unknown gate '" + std::string( gate ) + "' in basis " + name_ );
  return *g;
}

std::vector<BoolFun> Basis::functions() const
{
  std::vector<BoolFun> fs;
  for ( auto const& g : gates_ )
    fs.push_back( g.fun );
  return fs;
}

void Basis::add_gate( Gate g )
{
  if ( g.name.empty() )
    throw InputError( "gate names must be non-empty" );
  if ( g.name.size() >= 2 && g.name[0] == 'x' &&
       std::all_of( g.name.begin() + 1, g.name.end(), []( char c ) { return std::isdigit( (unsigned char)c ); } ) )
    throw InputError( "gate name '" + g.name + "' collides with variable syntax" );
  if ( index_.count( g.name ) )
    throw InputError( "duplicate gate name '" + g.name + "'" );
  index_.emplace( g.name, gates_.size() );
  gates_.push_back( std::move( g ) );
}

Basis Basis::merged( Basis const& other, std::string name ) const
{
  Basis b( std::move( name ), gates_ );
  for ( auto const& g : other.gates_ )
  {
    if ( auto mine = b.find( g.name ) )
    {
      if ( mine->fun != g.fun )
        throw InputError( "gate '" + g.name + "' has conflicting definitions" );
      continue;
    }
    b.add_gate( g );
  }
  return b;
}

void Basis::add_definition( std::string const& gate, Definition def, Basis const& target )
{
  auto const& g = at( gate );
  if ( def.target_basis != target.name() )
    throw InputError( "definition target basis name mismatch" );
  if ( truth_table( def.term, target, g.fun.arity() ) != g.fun )
    throw InputError( "definition of gate '" + gate + "' does not evaluate to its table" );
  definitions_[gate].push_back( std::move( def ) );
}

Definition const* Basis::definition( std::string_view gate, std::string_view target_basis ) const
{
  auto it = definitions_.find( gate );
  if ( it == definitions_.end() )
    return nullptr;
  for ( auto const& d : it->second )
  {
    if ( d.target_basis == target_basis )
      return &d;
  }
  return nullptr;
}

/* Assignment */

Assignment assignment_from_string( std::string_view bits )
{
  if ( bits.empty() || bits.size() > 64 )
    throw InputError( "assignment must have between 1 and 64 bits" );
  Assignment a{ unsigned( bits.size() ), 0 };
  for ( std::size_t i = 0; i < bits.size(); ++i )
  {
    if ( bits[i] == '1' )
      a.bits |= uint64_t( 1 ) << i;
    else if ( bits[i] != '0' )
      throw ParseError( "assignment characters must be 0 or 1", i );
  }
  return a;
}

std::string assignment_to_string( Assignment const& a )
{
  std::string s;
  for ( unsigned i = 0; i < a.arity; ++i )
    s.push_back( a[i] ? '1' : '0' );
  return s;
}

/* CircuitDag */

CircuitDag::CircuitDag( unsigned arity ) : arity_( arity )
{
  if ( arity == 0 )
    throw InputError( "circuits need at least one input" );
  var_nodes_.assign( arity, -1 );
}

uint32_t CircuitDag::output() const
{
  if ( !output_ )
    throw InputError( "circuit has no output" );
  return *output_;
}

uint32_t CircuitDag::add_var( unsigned i )
{
  if ( i >= arity_ )
    throw InputError( "variable x" + std::to_string( i ) + " exceeds circuit arity " + std::to_string( arity_ ) );
  if ( var_nodes_[i] >= 0 )
    return uint32_t( var_nodes_[i] );
  Node n;
  n.is_var = true;
  n.var = i;
  nodes_.push_back( std::move( n ) );
  var_nodes_[i] = int64_t( nodes_.size() - 1 );
  return uint32_t( nodes_.size() - 1 );
}

uint32_t CircuitDag::add_gate( std::string gate, std::vector<uint32_t> inputs )
{
  for ( auto in : inputs )
  {
    if ( in >= nodes_.size() )
      throw InputError( "gate input refers to a node that does not precede it" );
  }
  Node n;
  n.gate = std::move( gate );
  n.inputs = std::move( inputs );
  nodes_.push_back( std::move( n ) );
  return uint32_t( nodes_.size() - 1 );
}

void CircuitDag::set_output( uint32_t id )
{
  if ( id >= nodes_.size() )
    throw InputError( "output refers to a missing node" );
  output_ = id;
}

std::size_t CircuitDag::gate_count() const
{
  return std::count_if( nodes_.begin(), nodes_.end(), []( Node const& n ) { return !n.is_var; } );
}

unsigned CircuitDag::depth() const
{
  std::vector<unsigned> d( nodes_.size(), 0 );
  for ( std::size_t i = 0; i < nodes_.size(); ++i )
  {
    if ( nodes_[i].is_var )
      continue;
    unsigned m = 0;
    for ( auto in : nodes_[i].inputs )
      m = std::max( m, d[in] );
    d[i] = m + 1;
  }
  return d[output()];
}

void CircuitDag::validate( Basis const& basis ) const
{
  for ( auto const& n : nodes_ )
  {
    if ( n.is_var )
      continue;
    auto const& g = basis.at( n.gate );
    if ( g.fun.arity() != n.inputs.size() )
      throw InputError( "gate " + n.gate + " expects " + std::to_string( g.fun.arity() ) + " inputs, got " +
                        std::to_string( n.inputs.size() ) );
  }
  output();
}

CircuitDag CircuitDag::pruned() const
{
  std::vector<char> live( nodes_.size(), 0 );
  live[output()] = 1;
  for ( std::size_t i = nodes_.size(); i-- > 0; )
  {
    if ( !live[i] )
      continue;
    for ( auto in : nodes_[i].inputs )
      live[in] = 1;
  }
  CircuitDag r( arity_ );
  std::vector<uint32_t> map( nodes_.size(), 0 );
  for ( std::size_t i = 0; i < nodes_.size(); ++i )
  {
    if ( !live[i] )
      continue;
    auto const& n = nodes_[i];
    if ( n.is_var )
      map[i] = r.add_var( n.var );
    else
    {
      std::vector<uint32_t> ins;
      for ( auto in : n.inputs )
        ins.push_back( map[in] );
      map[i] = r.add_gate( n.gate, std::move( ins ) );
    }
  }
  r.set_output( map[output()] );
  return r;
}

bool CircuitDag::operator==( CircuitDag const& o ) const
{
  return print_netlist( *this ) == print_netlist( o );
}

CircuitDag to_dag( Term const& t, unsigned arity )
{
  CircuitDag dag( std::max( 1u, arity ) );
  std::unordered_map<void const*, uint32_t> memo;
  std::function<uint32_t( Term const& )> rec = [&]( Term const& s ) -> uint32_t {
    if ( s.is_var() )
      return dag.add_var( s.var_index() );
    auto it = memo.find( s.id() );
    if ( it != memo.end() )
      return it->second;
    std::vector<uint32_t> ins;
    ins.reserve( s.children().size() );
    for ( auto const& c : s.children() )
      ins.push_back( rec( c ) );
    uint32_t id = dag.add_gate( s.name(), std::move( ins ) );
    memo.emplace( s.id(), id );
    return id;
  };
  dag.set_output( rec( t ) );
  return dag;
}

Term to_term( CircuitDag const& c )
{
  std::vector<Term> terms;
  terms.reserve( c.nodes().size() );
  for ( auto const& n : c.nodes() )
  {
    if ( n.is_var )
      terms.push_back( Term::var( n.var ) );
    else
    {
      std::vector<Term> ch;
      for ( auto in : n.inputs )
        ch.push_back( terms[in] );
      terms.push_back( Term::gate( n.gate, std::move( ch ) ) );
    }
  }
  return terms[c.output()];
}

namespace
{

std::vector<Gate const*> resolve_gates( CircuitDag const& c, Basis const& basis )
{
  std::vector<Gate const*> gates( c.nodes().size(), nullptr );
  for ( std::size_t i = 0; i < c.nodes().size(); ++i )
  {
    auto const& n = c.nodes()[i];
    if ( n.is_var )
      continue;
    gates[i] = &basis.at( n.gate );
    if ( gates[i]->fun.arity() != n.inputs.size() )
      throw InputError( "gate " + n.gate + " expects " + std::to_string( gates[i]->fun.arity() ) +
                        " inputs, got " + std::to_string( n.inputs.size() ) );
  }
  return gates;
}

} // namespace

bool eval( CircuitDag const& c, Basis const& basis, Assignment const& a )
{
  if ( a.arity != c.arity() )
    throw InputError( "assignment arity " + std::to_string( a.arity ) + " does not match circuit arity " +
                      std::to_string( c.arity() ) );
  auto gates = resolve_gates( c, basis );
  std::vector<char> val( c.nodes().size(), 0 );
  for ( std::size_t i = 0; i < c.nodes().size(); ++i )
  {
    auto const& n = c.nodes()[i];
    if ( n.is_var )
    {
      val[i] = a[n.var];
      continue;
    }
    uint64_t idx = 0;
    for ( std::size_t j = 0; j < n.inputs.size(); ++j )
      idx |= uint64_t( val[n.inputs[j]] ) << j;
    val[i] = gates[i]->fun.get( idx );
  }
  return val[c.output()];
}

bool eval( Term const& t, Basis const& basis, Assignment const& a )
{
  if ( t.min_arity() > a.arity )
    throw InputError( "assignment arity " + std::to_string( a.arity ) + " is smaller than the term's variables" );
  return eval( to_dag( t, a.arity ), basis, a );
}

BoolFun apply_gate( BoolFun const& gate, std::vector<BoolFun const*> const& children )
{
  unsigned const k = gate.arity();
  if ( children.size() != k )
    throw InputError( "gate arity does not match child count" );
  unsigned const n = children[0]->arity();
  for ( auto c : children )
  {
    if ( c->arity() != n )
      throw InputError( "children of a gate must share one arity" );
  }
  BoolFun out( n );
  auto& ow = out.words();
  std::size_t const words = ow.size();
  if ( k <= 5 )
  {
    uint64_t const ones = gate.count_ones();
    bool const use_zeros = ones > gate.size() / 2;
    for ( uint64_t p = 0; p < gate.size(); ++p )
    {
      if ( gate.get( p ) == use_zeros )
        continue;
      for ( std::size_t w = 0; w < words; ++w )
      {
        uint64_t t = ~uint64_t( 0 );
        for ( unsigned j = 0; j < k; ++j )
          t &= ( ( p >> j ) & 1u ) ? children[j]->words()[w] : ~children[j]->words()[w];
        ow[w] |= t;
      }
    }
    if ( use_zeros )
    {
      for ( auto& w : ow )
        w = ~w;
    }
    out.mask_tail();
    return out;
  }
  unsigned const bits = n >= 6 ? 64u : ( 1u << n );
  for ( std::size_t w = 0; w < words; ++w )
  {
    uint64_t r = 0;
    for ( unsigned b = 0; b < bits; ++b )
    {
      uint64_t idx = 0;
      for ( unsigned j = 0; j < k; ++j )
        idx |= ( ( children[j]->words()[w] >> b ) & 1u ) << j;
      r |= uint64_t( gate.get( idx ) ) << b;
    }
    ow[w] = r;
  }
  return out;
}

BoolFun truth_table( CircuitDag const& c, Basis const& basis, unsigned max_arity )
{
  if ( c.arity() > max_arity || c.arity() > kMaxArity )
    throw CapacityError( "circuit arity " + std::to_string( c.arity() ) + " exceeds the exhaustive cap of " +
                         std::to_string( std::min( max_arity, kMaxArity ) ) );
  auto gates = resolve_gates( c, basis );
  auto const& nodes = c.nodes();
  std::vector<std::size_t> last_use( nodes.size(), 0 );
  for ( std::size_t i = 0; i < nodes.size(); ++i )
  {
    for ( auto in : nodes[i].inputs )
      last_use[in] = i;
  }
  uint32_t const out = c.output();
  std::vector<std::optional<BoolFun>> tables( nodes.size() );
  for ( std::size_t i = 0; i <= out; ++i )
  {
    auto const& n = nodes[i];
    if ( n.is_var )
      tables[i] = BoolFun::projection( c.arity(), n.var );
    else
    {
      std::vector<BoolFun const*> ch;
      for ( auto in : n.inputs )
        ch.push_back( &*tables[in] );
      tables[i] = apply_gate( gates[i]->fun, ch );
      for ( auto in : n.inputs )
      {
        if ( last_use[in] == i && in != out )
          tables[in].reset();
      }
    }
  }
  return *tables[out];
}

BoolFun truth_table( Term const& t, Basis const& basis, unsigned arity, unsigned max_arity )
{
  if ( t.min_arity() > arity )
    throw InputError( "term uses variables beyond arity " + std::to_string( arity ) );
  return truth_table( to_dag( t, arity ), basis, max_arity );
}

/* Formula syntax */

namespace
{

struct Token
{
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize( std::string_view text )
{
  std::vector<Token> toks;
  std::size_t i = 0;
  while ( i < text.size() )
  {
    if ( std::isspace( (unsigned char)text[i] ) )
    {
      ++i;
      continue;
    }
    std::size_t j = i;
    while ( j < text.size() && !std::isspace( (unsigned char)text[j] ) )
      ++j;
    toks.push_back( { std::string( text.substr( i, j - i ) ), i } );
    i = j;
  }
  return toks;
}

std::optional<unsigned> parse_var( std::string const& tok )
{
  if ( tok.size() < 2 || tok[0] != 'x' )
    return std::nullopt;
  unsigned v = 0;
  for ( std::size_t i = 1; i < tok.size(); ++i )
  {
    if ( !std::isdigit( (unsigned char)tok[i] ) )
      return std::nullopt;
    v = v * 10 + unsigned( tok[i] - '0' );
    if ( v > 1000000 )
      return std::nullopt;
  }
  return v;
}

} // namespace

Term parse_formula( std::string_view text, Basis const& basis )
{
  auto toks = tokenize( text );
  std::size_t pos = 0;
  std::function<Term()> rec = [&]() -> Term {
    if ( pos >= toks.size() )
      throw ParseError( "unexpected end of formula", text.size() );
    auto const& tok = toks[pos++];
    if ( auto v = parse_var( tok.text ) )
      return Term::var( *v );
    auto g = basis.find( tok.text );
    if ( !g )
      throw ParseError( "unknown gate '" + tok.text + "'", tok.pos );
    std::vector<Term> ch;
    for ( unsigned i = 0; i < g->fun.arity(); ++i )
    {
      if ( pos >= toks.size() )
        throw ParseError( "gate '" + tok.text + "' expects " + std::to_string( g->fun.arity() ) + " arguments",
                          text.size() );
      ch.push_back( rec() );
    }
    return Term::gate( tok.text, std::move( ch ) );
  };
  Term t = rec();
  if ( pos != toks.size() )
    throw ParseError( "trailing tokens after formula", toks[pos].pos );
  return t;
}

std::string print_formula( Term const& t )
{
  std::string out;
  std::function<void( Term const& )> rec = [&]( Term const& s ) {
    if ( !out.empty() )
      out.push_back( ' ' );
    if ( s.is_var() )
    {
      out += "x" + std::to_string( s.var_index() );
      return;
    }
    out += s.name();
    for ( auto const& c : s.children() )
      rec( c );
  };
  rec( t );
  return out;
}

CircuitDag parse_netlist( std::string_view text, Basis const& basis )
{
  struct Line
  {
    std::vector<Token> toks;
  };
  std::vector<Line> lines;
  std::size_t start = 0;
  while ( start <= text.size() )
  {
    std::size_t end = text.find( '\n', start );
    if ( end == std::string_view::npos )
      end = text.size();
    auto line = text.substr( start, end - start );
    auto hash = line.find( '#' );
    if ( hash != std::string_view::npos )
      line = line.substr( 0, hash );
    auto toks = tokenize( line );
    for ( auto& t : toks )
      t.pos += start;
    if ( !toks.empty() )
      lines.push_back( { std::move( toks ) } );
    start = end + 1;
  }
  if ( lines.empty() )
    throw ParseError( "empty netlist", 0 );

  std::optional<unsigned> declared;
  std::size_t first = 0;
  if ( lines[0].toks[0].text == "inputs" )
  {
    auto const& tk = lines[0].toks;
    if ( tk.size() != 2 || !std::all_of( tk[1].text.begin(), tk[1].text.end(), ::isdigit ) )
      throw ParseError( "expected 'inputs <n>'", tk[0].pos );
    declared = unsigned( std::stoul( tk[1].text ) );
    if ( *declared == 0 || *declared > 64 )
      throw ParseError( "declared input count out of range", tk[1].pos );
    first = 1;
  }

  unsigned max_var = 0;
  bool any_var = false;
  for ( std::size_t l = first; l < lines.size(); ++l )
  {
    for ( auto const& t : lines[l].toks )
    {
      if ( auto v = parse_var( t.text ) )
      {
        max_var = std::max( max_var, *v );
        any_var = true;
      }
    }
  }
  unsigned arity = declared ? *declared : ( any_var ? max_var + 1 : 1 );
  if ( any_var && max_var >= arity )
    throw ParseError( "variable x" + std::to_string( max_var ) + " exceeds declared inputs", 0 );

  CircuitDag dag( arity );
  std::unordered_map<std::string, uint32_t> ids;
  auto is_id = []( std::string const& s ) {
    return s.size() >= 2 && s[0] == 'n' &&
           std::all_of( s.begin() + 1, s.end(), []( char c ) { return std::isdigit( (unsigned char)c ); } );
  };
  auto ref = [&]( Token const& t ) -> uint32_t {
    if ( auto v = parse_var( t.text ) )
      return dag.add_var( *v );
    if ( !is_id( t.text ) )
      throw ParseError( "expected a node id or variable, got '" + t.text + "'", t.pos );
    auto it = ids.find( t.text );
    if ( it == ids.end() )
      throw ParseError( "node " + t.text + " is used before its definition (cycles and forward references are rejected)",
                        t.pos );
    return it->second;
  };

  bool have_out = false;
  for ( std::size_t l = first; l < lines.size(); ++l )
  {
    auto const& tk = lines[l].toks;
    if ( tk[0].text == "out" )
    {
      if ( have_out )
        throw ParseError( "multiple output lines", tk[0].pos );
      if ( tk.size() != 2 )
        throw ParseError( "expected 'out <id>'", tk[0].pos );
      dag.set_output( ref( tk[1] ) );
      have_out = true;
      continue;
    }
    if ( have_out )
      throw ParseError( "lines after the output line", tk[0].pos );
    if ( tk.size() < 3 || tk[1].text != "=" )
      throw ParseError( "expected '<id> = <gate> <args>'", tk[0].pos );
    if ( !is_id( tk[0].text ) )
      throw ParseError( "node ids must look like n<digits>", tk[0].pos );
    if ( ids.count( tk[0].text ) )
      throw ParseError( "node " + tk[0].text + " defined twice", tk[0].pos );
    auto g = basis.find( tk[2].text );
    if ( !g )
      throw ParseError( "unknown gate '" + tk[2].text + "'", tk[2].pos );
    if ( g->fun.arity() != tk.size() - 3 )
      throw ParseError( "gate " + tk[2].text + " expects " + std::to_string( g->fun.arity() ) + " inputs", tk[2].pos );
    std::vector<uint32_t> ins;
    for ( std::size_t i = 3; i < tk.size(); ++i )
      ins.push_back( ref( tk[i] ) );
    ids.emplace( tk[0].text, dag.add_gate( tk[2].text, std::move( ins ) ) );
  }
  if ( !have_out )
    throw ParseError( "netlist has no output line", text.size() );
  return dag;
}

std::string print_netlist( CircuitDag const& c )
{
  std::ostringstream os;
  unsigned max_var = 0;
  bool any_var = false;
  for ( auto const& n : c.nodes() )
  {
    if ( n.is_var )
    {
      max_var = std::max( max_var, n.var );
      any_var = true;
    }
  }
  if ( !any_var || max_var + 1 != c.arity() )
    os << "inputs " << c.arity() << "\n";
  std::vector<std::string> names( c.nodes().size() );
  unsigned next = 1;
  for ( std::size_t i = 0; i < c.nodes().size(); ++i )
  {
    auto const& n = c.nodes()[i];
    if ( n.is_var )
    {
      names[i] = "x" + std::to_string( n.var );
      continue;
    }
    names[i] = "n" + std::to_string( next++ );
    os << names[i] << " = " << n.gate;
    for ( auto in : n.inputs )
      os << " " << names[in];
    os << "\n";
  }
  os << "out " << names[c.output()] << "\n";
  return os.str();
}

} // namespace clonelab
