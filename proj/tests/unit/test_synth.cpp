#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/lattice.hpp>
#include <clonelab/synth.hpp>

#include <doctest.h>

using namespace clonelab;

TEST_CASE( "closure sizes" )
{
  CHECK( closure( { *builtin_function( "NAND" ) }, 2 ).size() == 16 );
  CHECK( closure( { theta( 3, 2 ), *builtin_function( "NOT" ) }, 2 ).size() == 4 );
  CHECK( closure( { *builtin_function( "AND" ), *builtin_function( "OR" ) }, 3 ).size() == 18 );
  CHECK( closure( { *builtin_function( "XOR" ) }, 2 ).size() == 4 );
}

TEST_CASE( "closure agrees with membership at arity 3" )
{
  std::vector<BoolFun> F{ *builtin_function( "IMP" ) };
  auto c = closure( F, 3 );
  for ( uint64_t bits = 0; bits < 256; ++bits )
  {
    auto f = BoolFun::from_bits( 3, bits );
    CHECK( c.contains( f ) == member( f, F ).member );
  }
}

TEST_CASE( "synthesized witnesses compute the target" )
{
  auto b = builtin_basis( "DeMorgan" );
  auto t = synthesize( *builtin_function( "XOR" ), b );
  CHECK( truth_table( t, b, 2 ) == *builtin_function( "XOR" ) );
  auto nb = builtin_basis( "NAND" );
  auto maj = synthesize( theta( 3, 2 ), nb );
  CHECK( truth_table( maj, nb, 3 ) == theta( 3, 2 ) );
  CHECK_THROWS_AS( synthesize( *builtin_function( "NOT" ), basis_from_list( "AND,OR" ) ), LogicError );
  CHECK_THROWS_AS( synthesize( theta( 5, 3 ), b ), CapacityError );
}

TEST_CASE( "basis conversion" )
{
  auto from = builtin_basis( "DeMorgan" );
  auto c = to_dag( parse_formula( "OR AND x0 NOT x1 AND x2 x3", from ), 4 );
  auto to = builtin_basis( "NAND" );
  auto r = convert_basis( c, from, to );
  CHECK( truth_table( r, to ) == truth_table( c, from ) );
  for ( auto const& nd : r.nodes() )
  {
    if ( !nd.is_var )
      CHECK( nd.gate == "NAND" );
  }
  CHECK_THROWS_AS( convert_basis( c, from, basis_from_list( "AND,OR" ) ), RefusalError );
}

TEST_CASE( "constant elimination" )
{
  auto from = basis_from_list( "AND,OR,ZERO" );
  auto to = basis_from_list( "AND,OR" );
  auto c = to_dag( parse_formula( "OR AND x0 x1 AND x2 ZERO x0", from ), 3 );
  auto r = eliminate_constants( c, from, to, ConstantMode::Zero );
  CHECK( truth_table( r, to ) == truth_table( c, from ) );
  // the function itself must lie in [to]
  auto z = to_dag( parse_formula( "ZERO x0", from ), 1 );
  CHECK_THROWS_AS( eliminate_constants( z, from, to, ConstantMode::Zero ), RefusalError );
  // 0 needs AND in the target
  CHECK_THROWS_AS( eliminate_constants( c, from, basis_from_list( "OR" ), ConstantMode::Zero ), RefusalError );
}
