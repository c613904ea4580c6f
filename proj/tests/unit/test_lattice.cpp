#include <clonelab/builtins.hpp>
#include <clonelab/lattice.hpp>

#include <doctest.h>

using namespace clonelab;

namespace
{
std::vector<BoolFun> gens( std::vector<std::string> const& names )
{
  std::vector<BoolFun> F;
  for ( auto const& n : names )
    F.push_back( *builtin_function( n ) );
  return F;
}
} // namespace

TEST_CASE( "generator sets of the named clones" )
{
  for ( auto const& nc : named_clones() )
  {
    CAPTURE( nc.name );
    CHECK( clone_of( gens( nc.generators ) ) == nc.desc );
    CHECK( named( nc.name ) == nc.desc );
    CHECK( named( name( nc.desc ) ) == nc.desc );
  }
}

TEST_CASE( "familiar clones" )
{
  CHECK( clone_of( gens( { "AND", "NOT" } ) ) == top() );
  CHECK( clone_of( gens( { "NAND" } ) ) == top() );
  CHECK( name( clone_of( gens( { "THETA_3_2", "NOT" } ) ) ) == "D" );
  CHECK( name( clone_of( gens( { "AND", "OR" } ) ) ) == "MP" );
  CHECK( name( clone_of( gens( { "IMP" } ) ) ) == "T^∞_1" );
  CHECK( clone_of( {} ) == bottom() );
  CHECK( name( bottom() ) == "⊥" );
  CHECK( name( top() ) == "⊤" );
}

TEST_CASE( "order, meet and join" )
{
  CHECK( leq( named( "DM" ), named( "D" ) ) );
  CHECK( leq( named( "DM" ), named( "M" ) ) );
  CHECK_FALSE( leq( named( "D" ), named( "M" ) ) );
  CHECK( meet( named( "D" ), named( "M" ) ) == named( "DM" ) );
  CHECK( join( named( "E" ), named( "V" ) ) == named( "M" ) );
  CHECK( join( named( "A" ), named( "M" ) ) == top() );
  CHECK( leq( named( "T^3_1" ), named( "T^2_1" ) ) );
  CHECK( meet( named( "T^2_1" ), named( "T^3_1" ) ) == named( "T^3_1" ) );
  CHECK( dual( named( "T^∞_1" ) ) == named( "T^∞_0" ) );
  CHECK( dual( named( "E" ) ) == named( "V" ) );
}

TEST_CASE( "descriptors serialize" )
{
  for ( auto const& c : all_clones( 3 ) )
    CHECK( CloneDesc::parse( c.to_string() ) == c );
}

TEST_CASE( "the lattice up to arm level 5 has 70 clones" )
{
  auto all = all_clones( 5 );
  CHECK( all.size() == 70 );
  for ( auto const& c : all )
    CHECK( canonicalize( c ) == c );
}

TEST_CASE( "membership names a separating relation" )
{
  auto F = gens( { "AND", "OR" } );
  auto m = member( *builtin_function( "NOT" ), F );
  CHECK_FALSE( m.member );
  REQUIRE( m.separator );
  CHECK( m.separator->tag == RelTag::LE );
  CHECK( member( *builtin_function( "MAJ" ), F ).member );
  CHECK( member( *builtin_function( "XOR" ), gens( { "AND", "NOT" } ) ).member );
  CHECK( member( theta( 5, 2 ), gens( { "THETA_4_2", "IMP" } ) ).member );
  auto t = member( theta( 4, 2 ), gens( { "THETA_5_2", "IMP" } ) );
  CHECK_FALSE( t.member );
  REQUIRE( t.separator );
  CHECK( t.separator->tag == RelTag::R1 );
  CHECK( t.separator->m == 4 );
}
