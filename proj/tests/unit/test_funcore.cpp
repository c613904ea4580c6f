#include <clonelab/bool_fun.hpp>
#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/term.hpp>

#include <doctest.h>

using namespace clonelab;

TEST_CASE( "table literals use least significant nibble first" )
{
  auto f = BoolFun::parse( "2:8" );
  CHECK( f == *builtin_function( "AND" ) );
  CHECK( BoolFun::parse( "3:8e" ) == *builtin_function( "MAJ" ) );
  CHECK( builtin_function( "MAJ" )->to_string() == "3:8e" );
  auto g = BoolFun::parse( "5:0123abcd" );
  CHECK( BoolFun::parse( g.to_string() ) == g );
  CHECK_THROWS_AS( BoolFun::parse( "2:xyz" ), ParseError );
  CHECK_THROWS_AS( BoolFun::parse( "2:888" ), InputError );
}

TEST_CASE( "variable i is bit i of the assignment" )
{
  auto p = BoolFun::projection( 3, 1 );
  for ( uint64_t a = 0; a < 8; ++a )
    CHECK( p( a ) == bool( ( a >> 1 ) & 1 ) );
  CHECK( dual( *builtin_function( "AND" ) ) == *builtin_function( "OR" ) );
  CHECK( dual( *builtin_function( "MAJ" ) ) == *builtin_function( "MAJ" ) );
}

TEST_CASE( "prefix formulas" )
{
  auto b = builtin_basis( "DeMorgan" );
  auto t = parse_formula( "OR AND x0 NOT x1 AND NOT x0 x1", b );
  CHECK( t.min_arity() == 2 );
  CHECK( truth_table( t, b, 2 ) == *builtin_function( "XOR" ) );
  CHECK( print_formula( t ) == "OR AND x0 NOT x1 AND NOT x0 x1" );
  CHECK( eval( t, b, Assignment{ 2, 1 } ) );
  CHECK_FALSE( eval( t, b, Assignment{ 2, 3 } ) );
  CHECK_THROWS_AS( parse_formula( "AND x0", b ), ParseError );
  CHECK_THROWS_AS( parse_formula( "AND x0 x1 x2", b ), ParseError );
  CHECK_THROWS_AS( parse_formula( "XOR x0 x1", b ), ParseError );
}

TEST_CASE( "netlists round trip and reject forward references" )
{
  auto b = builtin_basis( "DeMorgan" );
  auto text = "n1 = AND x0 x1\nn2 = NOT n1\nout n2\n";
  auto c = parse_netlist( text, b );
  CHECK( c.arity() == 2 );
  CHECK( truth_table( c, b ) == *builtin_function( "NAND" ) );
  CHECK( parse_netlist( print_netlist( c ), b ) == c );
  CHECK_THROWS_AS( parse_netlist( "n1 = NOT n2\nn2 = NOT x0\nout n1\n", b ), ParseError );
  CHECK_THROWS_AS( parse_netlist( "n1 = NOT x0\n", b ), ParseError );
  auto d = parse_netlist( "inputs 4\nn1 = OR x0 x2\nout n1\n", b );
  CHECK( d.arity() == 4 );
}

TEST_CASE( "dag and term views agree" )
{
  auto b = builtin_basis( "DeMorgan" );
  auto t = parse_formula( "AND OR x0 x1 OR x0 x2", b );
  auto dag = to_dag( t, 3 );
  CHECK( truth_table( dag, b ) == truth_table( t, b, 3 ) );
  CHECK( truth_table( to_term( dag ), b, 3 ) == truth_table( t, b, 3 ) );
  CHECK( dag.depth() == 2 );
}

TEST_CASE( "truth tables respect the capacity cap" )
{
  auto b = builtin_basis( "DeMorgan" );
  auto t = parse_formula( "OR x0 x30", b );
  CHECK_THROWS_AS( truth_table( t, b, 31, 20 ), CapacityError );
}

TEST_CASE( "basis lists" )
{
  auto b = basis_from_list( "AND,NOT,3:8e" );
  CHECK( b.size() == 3 );
  CHECK( b.at( "G0" ).fun == *builtin_function( "MAJ" ) );
  CHECK_THROWS_AS( basis_from_list( "FROB" ), InputError );
  CHECK( builtin_basis( "THETA(3)" ).at( "THETA_4_3" ).fun == theta( 4, 3 ) );
}
