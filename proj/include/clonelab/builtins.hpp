#pragma once

#include <clonelab/bool_fun.hpp>
#include <clonelab/term.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonelab
{

/// Threshold function: 1 iff at least t of the n inputs are 1.
BoolFun theta( unsigned n, unsigned t );

/*! \brief Named gate functions.
 *
 * AND OR NOT NAND NOR XOR XNOR IMP NOTIMPLIES ID ZERO ONE MAJ XOR3 and
 * THETA_<n>_<t>. ZERO and ONE are unary constants.
 */
std::optional<BoolFun> builtin_function( std::string_view name );
std::vector<std::string> builtin_function_names();

/*! \brief Named bases.
 *
 * DeMorgan, DeMorgan01, NAND, IMP, NOTIMPLIES, THETA(k) (the single gate
 * THETA_<k+1>_<k>), or any builtin gate name as a singleton basis.
 */
Basis builtin_basis( std::string_view name );

/*! \brief Basis from a comma separated list.
 *
 * Items are builtin gate names or `arity:hex` tables (named G0, G1, ...).
 */
Basis basis_from_list( std::string_view list, std::string name = "custom" );

/// Basis holding the builtin gates referenced by the tokens of a formula.
Basis basis_for_formula( std::string_view text );

} // namespace clonelab
