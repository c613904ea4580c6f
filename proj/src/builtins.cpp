#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>

#include <bit>
#include <cctype>
#include <sstream>

namespace clonelab
{

BoolFun theta( unsigned n, unsigned t )
{
  if ( n == 0 )
    throw RangeError( "threshold arity must be >= 1" );
  if ( t > n + 1 )
    throw RangeError( "threshold t must satisfy 0 <= t <= n+1" );
  return BoolFun::from_predicate( n, [t]( uint64_t a ) { return unsigned( std::popcount( a ) ) >= t; } );
}

namespace
{

std::optional<std::pair<unsigned, unsigned>> parse_theta_name( std::string_view name )
{
  constexpr std::string_view prefix = "THETA_";
  if ( name.substr( 0, prefix.size() ) != prefix )
    return std::nullopt;
  auto rest = name.substr( prefix.size() );
  auto us = rest.find( '_' );
  if ( us == std::string_view::npos || us == 0 || us + 1 >= rest.size() )
    return std::nullopt;
  auto digits = []( std::string_view s ) {
    for ( char c : s )
    {
      if ( !std::isdigit( (unsigned char)c ) )
        return false;
    }
    return !s.empty() && s.size() <= 3;
  };
  auto a = rest.substr( 0, us );
  auto b = rest.substr( us + 1 );
  if ( !digits( a ) || !digits( b ) )
    return std::nullopt;
  return std::make_pair( unsigned( std::stoul( std::string( a ) ) ), unsigned( std::stoul( std::string( b ) ) ) );
}

} // namespace

std::optional<BoolFun> builtin_function( std::string_view name )
{
  if ( name == "AND" )
    return BoolFun::from_bits( 2, 0x8 );
  if ( name == "OR" )
    return BoolFun::from_bits( 2, 0xe );
  if ( name == "NOT" )
    return BoolFun::from_bits( 1, 0x1 );
  if ( name == "NAND" )
    return BoolFun::from_bits( 2, 0x7 );
  if ( name == "NOR" )
    return BoolFun::from_bits( 2, 0x1 );
  if ( name == "XOR" )
    return BoolFun::from_bits( 2, 0x6 );
  if ( name == "XNOR" )
    return BoolFun::from_bits( 2, 0x9 );
  if ( name == "IMP" )
    return BoolFun::from_bits( 2, 0xd ); // x0 -> x1
  if ( name == "NOTIMPLIES" )
    return BoolFun::from_bits( 2, 0x2 ); // x0 and not x1
  if ( name == "ID" )
    return BoolFun::from_bits( 1, 0x2 );
  if ( name == "ZERO" )
    return BoolFun::from_bits( 1, 0x0 );
  if ( name == "ONE" )
    return BoolFun::from_bits( 1, 0x3 );
  if ( name == "MAJ" )
    return theta( 3, 2 );
  if ( name == "XOR3" )
    return BoolFun::from_bits( 3, 0x96 );
  if ( auto nt = parse_theta_name( name ) )
  {
    if ( nt->first == 0 || nt->first > kMaxArity || nt->second > nt->first + 1 )
      return std::nullopt;
    return theta( nt->first, nt->second );
  }
  return std::nullopt;
}

std::vector<std::string> builtin_function_names()
{
  return { "AND", "OR", "NOT", "NAND", "NOR", "XOR", "XNOR", "IMP", "NOTIMPLIES", "ID", "ZERO", "ONE", "MAJ", "XOR3" };
}

Basis builtin_basis( std::string_view name )
{
  auto gate = []( char const* n ) { return Gate{ n, *builtin_function( n ) }; };
  if ( name == "DeMorgan" )
    return Basis( "DeMorgan", { gate( "AND" ), gate( "OR" ), gate( "NOT" ) } );
  if ( name == "DeMorgan01" )
    return Basis( "DeMorgan01", { gate( "AND" ), gate( "OR" ), gate( "NOT" ), gate( "ZERO" ), gate( "ONE" ) } );
  if ( name.substr( 0, 6 ) == "THETA(" && name.back() == ')' )
  {
    auto inner = std::string( name.substr( 6, name.size() - 7 ) );
    unsigned k = 0;
    try
    {
      k = unsigned( std::stoul( inner ) );
    }
    catch ( std::exception const& )
    {
      throw InputError( "THETA(k) needs a decimal k" );
    }
    if ( k == 0 || k + 1 > kMaxArity )
      throw InputError( "THETA(k) needs 1 <= k < " + std::to_string( kMaxArity ) );
    std::string g = "THETA_" + std::to_string( k + 1 ) + "_" + std::to_string( k );
    return Basis( std::string( name ), { Gate{ g, theta( k + 1, k ) } } );
  }
  if ( auto f = builtin_function( name ) )
    return Basis( std::string( name ), { Gate{ std::string( name ), *f } } );
  throw InputError( "unknown basis '" + std::string( name ) + "'" );
}

Basis basis_from_list( std::string_view list, std::string name )
{
  Basis b( std::move( name ), {} );
  std::size_t start = 0;
  unsigned anon = 0;
  while ( start <= list.size() )
  {
    auto end = list.find( ',', start );
    if ( end == std::string_view::npos )
      end = list.size();
    std::string item( list.substr( start, end - start ) );
    while ( !item.empty() && std::isspace( (unsigned char)item.back() ) )
      item.pop_back();
    while ( !item.empty() && std::isspace( (unsigned char)item.front() ) )
      item.erase( item.begin() );
    if ( item.empty() )
    {
      if ( list.empty() )
        break;
      throw InputError( "empty item in function list" );
    }
    if ( item.find( ':' ) != std::string::npos )
    {
      auto f = BoolFun::parse( item );
      b.add_gate( Gate{ "G" + std::to_string( anon++ ), f } );
    }
    else if ( auto f = builtin_function( item ) )
    {
      if ( !b.find( item ) )
        b.add_gate( Gate{ item, *f } );
    }
    else
    {
      throw InputError( "unknown function '" + item + "'" );
    }
    start = end + 1;
  }
  return b;
}

Basis basis_for_formula( std::string_view text )
{
  Basis b( "builtin", {} );
  std::istringstream is{ std::string( text ) };
  std::string tok;
  while ( is >> tok )
  {
    if ( b.find( tok ) )
      continue;
    if ( auto f = builtin_function( tok ) )
      b.add_gate( Gate{ tok, *f } );
  }
  return b;
}

} // namespace clonelab
