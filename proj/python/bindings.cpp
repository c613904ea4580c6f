#include <clonelab/builtins.hpp>
#include <clonelab/error.hpp>
#include <clonelab/fastpaths.hpp>
#include <clonelab/lattice.hpp>
#include <clonelab/synth.hpp>
#include <clonelab/thresholds.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace clonelab;

namespace
{

Basis basis_of( std::string const& list )
{
  if ( list == "DeMorgan" || list == "DeMorgan01" || list.rfind( "THETA(", 0 ) == 0 )
    return builtin_basis( list );
  return basis_from_list( list, list );
}

/// Table literal `n:hex` or prefix formula over builtin gates.
BoolFun fun_of( std::string const& text, std::optional<unsigned> arity )
{
  if ( text.find( ':' ) != std::string::npos )
    return BoolFun::parse( text );
  auto b = basis_for_formula( text );
  auto t = parse_formula( text, b );
  return truth_table( t, b, arity ? *arity : std::max( 1u, t.min_arity() ) );
}

std::vector<BoolFun> funs_of( std::vector<std::string> const& F )
{
  std::vector<BoolFun> r;
  for ( auto const& s : F )
    r.push_back( fun_of( s, std::nullopt ) );
  return r;
}

} // namespace

PYBIND11_MODULE( _clonelab, m )
{
  m.doc() = "Boolean clones: membership, identification, thresholds";

  py::register_exception<InputError>( m, "InputError", PyExc_ValueError );
  py::register_exception<CapacityError>( m, "CapacityError", PyExc_RuntimeError );
  py::register_exception<LogicError>( m, "LogicError", PyExc_RuntimeError );

  py::class_<CloneDesc>( m, "Clone" )
      .def_static( "named", []( std::string const& s ) { return named( s ); } )
      .def_property_readonly( "name", []( CloneDesc const& c ) { return name( c ); } )
      .def_property_readonly( "descriptor", &CloneDesc::to_string )
      .def( "__le__", []( CloneDesc const& a, CloneDesc const& b ) { return leq( a, b ); } )
      .def( "__eq__", []( CloneDesc const& a, CloneDesc const& b ) { return a == b; } )
      .def( "__and__", []( CloneDesc const& a, CloneDesc const& b ) { return meet( a, b ); } )
      .def( "__or__", []( CloneDesc const& a, CloneDesc const& b ) { return join( a, b ); } )
      .def( "__hash__", []( CloneDesc const& c ) { return py::hash( py::str( c.to_string() ) ); } )
      .def( "__repr__", []( CloneDesc const& c ) { return "Clone(" + name( c ) + ")"; } );

  m.def( "table", []( std::string const& text, std::optional<unsigned> arity ) { return fun_of( text, arity ).to_string(); },
         py::arg( "formula" ), py::arg( "arity" ) = py::none(), "Truth table as n:hex" );
  m.def( "clone_of", []( std::vector<std::string> const& F ) { return clone_of( funs_of( F ) ); },
         "Clone generated by tables or formulas" );
  m.def( "basis_clone", []( std::string const& basis ) { return clone_of( basis_of( basis ).functions() ); },
         "Clone generated by a basis such as 'AND,NOT'" );
  m.def(
      "member",
      []( std::string const& f, std::string const& basis ) {
        auto fn = fun_of( f, std::nullopt );
        auto r = member( fn, basis_of( basis ).functions() );
        py::dict d;
        d["member"] = r.member;
        d["separator"] = r.separator ? py::object( py::str( r.separator->to_string() ) ) : py::object( py::none() );
        d["matrix"] = r.witness ? py::object( py::str( r.witness->to_inline() ) ) : py::object( py::none() );
        return d;
      },
      py::arg( "f" ), py::arg( "basis" ) );
  m.def(
      "synthesize",
      []( std::string const& f, std::string const& basis ) {
        return print_formula( synthesize( fun_of( f, std::nullopt ), basis_of( basis ) ) );
      },
      py::arg( "f" ), py::arg( "basis" ) );
  m.def(
      "convert",
      []( std::string const& formula, std::string const& to ) {
        auto b = basis_for_formula( formula );
        auto t = parse_formula( formula, b );
        auto dag = to_dag( t, std::max( 1u, t.min_arity() ) );
        return print_netlist( convert_basis( dag, b, basis_of( to ) ) );
      },
      py::arg( "formula" ), py::arg( "to" ), "Netlist over the target basis" );
  m.def( "classify", []( std::string const& basis ) { return classify_basis( basis_of( basis ) ).label; } );
  m.def(
      "identify_restricted",
      []( std::string const& formula, std::string const& ambient ) {
        auto b = basis_for_formula( formula );
        auto t = parse_formula( formula, b );
        auto id = identify_restricted( to_dag( t, std::max( 1u, t.min_arity() ) ), b, ambient_from_string( ambient ) );
        return py::make_tuple( id.clone, id.form );
      },
      py::arg( "formula" ), py::arg( "ambient" ) );
  m.def( "threshold_clone", &threshold_clone, py::arg( "n" ), py::arg( "t" ) );
  m.def( "sigma", &sigma, py::arg( "k" ) );
  m.def( "pick_N", &pick_N, py::arg( "k" ), py::arg( "t" ), py::arg( "n" ) );
  m.def( "choose_depth", &choose_depth, py::arg( "k" ), py::arg( "N" ), py::arg( "n" ), py::arg( "e" ) );
  m.def(
      "random_threshold",
      []( unsigned n, unsigned t, unsigned e, uint64_t seed, uint64_t length, unsigned k ) {
        auto r = RandomStream::from_seed( seed, length );
        auto f = random_threshold_formula( n, t, e, r, k );
        py::dict d;
        d["N"] = f.N;
        d["depth"] = f.depth;
        d["leaves"] = f.leaves;
        d["equals_theta"] = n <= kMaxArity ? py::object( py::bool_( f.truth_table() == theta( n, t ) ) )
                                           : py::object( py::none() );
        return d;
      },
      py::arg( "n" ), py::arg( "t" ), py::arg( "e" ), py::arg( "seed" ), py::arg( "length" ) = uint64_t( 1 ) << 24,
      py::arg( "k" ) = 3 );
}
