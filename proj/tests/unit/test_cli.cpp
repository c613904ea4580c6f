#include "cli.hpp"

#include <doctest.h>

#include <sstream>

using namespace clonelab::cli;

namespace
{
struct Result
{
  int code;
  std::string out;
  std::string err;
};

Result cli( std::vector<std::string> args, std::string const& input = "" )
{
  args.insert( args.begin(), "clonelab" );
  std::istringstream in( input );
  std::ostringstream out, err;
  int code = run( args, in, out, err );
  return { code, out.str(), err.str() };
}
} // namespace

TEST_CASE( "member" )
{
  auto r = cli( { "member", "-f", "OR x0 x1", "-F", "AND,NOT" } );
  CHECK( r.code == kTrue );
  CHECK( r.out.rfind( "member; witness: ", 0 ) == 0 );
  auto n = cli( { "member", "-f", "NOT x0", "-F", "AND,OR", "--explain" } );
  CHECK( n.code == kFalse );
  CHECK( n.out == "not a member; separator: LE; matrix: 0 / 1\n" );
  auto c = cli( { "member", "-f", "MAJ x0 x1 x2", "-F", "NAND", "--closure" } );
  CHECK( c.code == kTrue );
}

TEST_CASE( "id, classify, lattice" )
{
  CHECK( cli( { "id", "-F", "THETA_3_2,NOT" } ).out == "D\n" );
  CHECK( cli( { "classify", "-B", "NOTIMPLIES" } ).out == "coDP-complete\n" );
  CHECK( cli( { "lattice", "leq", "DM", "D" } ).code == kTrue );
  CHECK( cli( { "lattice", "leq", "D", "DM" } ).code == kFalse );
  CHECK( cli( { "lattice", "meet", "D", "M" } ).out == "DM\n" );
  CHECK( cli( { "lattice", "join", "E", "V" } ).out == "M\n" );
}

TEST_CASE( "tables and evaluation" )
{
  CHECK( cli( { "table", "-f", "AND x0 x1" } ).out == "2:8\n" );
  CHECK( cli( { "eval", "-f", "MAJ x0 x1 x2", "-a", "101" } ).out == "1\n" );
  CHECK( cli( { "eval", "-f", "3:8e", "-a", "100" } ).out == "0\n" );
  CHECK( cli( { "equiv", "-f", "XOR x0 x1", "-g", "OR AND x0 NOT x1 AND NOT x0 x1" } ).code == kTrue );
  auto d = cli( { "equiv", "-f", "AND x0 x1", "-g", "OR x0 x1" } );
  CHECK( d.code == kFalse );
  CHECK( d.out == "not equivalent; differ at 10\n" );
}

TEST_CASE( "stdin netlists" )
{
  auto r = cli( { "table", "-f", "-" }, "n1 = NAND x0 x1\nout n1\n" );
  CHECK( r.code == kTrue );
  CHECK( r.out == "2:7\n" );
}

TEST_CASE( "json mirror" )
{
  auto r = cli( { "id", "-F", "AND,OR", "--json" } );
  CHECK( r.out.find( "\"name\": \"MP\"" ) != std::string::npos );
  auto s = cli( { "--json", "sigma", "-k", "3" } );
  CHECK( s.out.find( "\"sigma\": 0.767591879" ) != std::string::npos );
}

TEST_CASE( "error codes" )
{
  CHECK( cli( { "member", "-f", "AND x0", "-F", "AND" } ).code == kInputError );
  CHECK( cli( { "nonsense" } ).code == kInputError );
  CHECK( cli( { "member", "-f", "x0", "-F", "NOPE" } ).code == kInputError );
  CHECK( cli( { "member", "-f", "OR x0 OR x1 OR x2 OR x3 x4", "-F", "AND,NOT", "--witness" } ).code == kCapacityError );
  CHECK( cli( { "convert", "-c", "NOT x0", "--to", "AND,OR" } ).code == kLogicError );
  CHECK( cli( { "fast", "-f", "AND x0 x1", "--ambient", "V" } ).code == kLogicError );
}

TEST_CASE( "randthr is reproducible" )
{
  std::vector<std::string> args{ "randthr", "-n", "6", "-t", "6", "-e", "2", "--seed", "9", "--verify", "3" };
  auto a = cli( args );
  auto b = cli( args );
  CHECK( a.code == kTrue );
  CHECK( a.out == b.out );
  auto h = cli( { "randthr", "-n", "4", "-t", "4", "-e", "1", "--depth", "1", "-r", "0123456789abcdef" } );
  CHECK( h.code == kTrue );
  CHECK( h.out.find( "leaves: 4" ) != std::string::npos );
  CHECK( cli( { "randthr", "-n", "4", "-t", "4", "-e", "1", "--depth", "3", "-r", "00" } ).code == kInputError );
}

TEST_CASE( "reduce" )
{
  auto r = cli( { "reduce", "f-phi", "--cnf", "1 0 -1 0" } );
  CHECK( r.out.find( "gadget clone: ⊥" ) != std::string::npos );
  auto c = cli( { "reduce", "compose", "--instance", "1,2", "--decide" } );
  CHECK( c.code == kTrue );
  auto o = cli( { "reduce", "compose", "--instance", "1,1", "--decide" } );
  CHECK( o.code == kFalse );
  CHECK( cli( { "reduce", "h-mpt21", "--f", "MAJ x0 x1 x2", "--g", "MAJ x0 x1 x2" } ).out.find( "gadget clone: DM" ) !=
         std::string::npos );
}
