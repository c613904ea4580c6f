#pragma once

#include <clonelab/bool_fun.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clonelab
{

/*! \brief Immutable formula tree over named gates.
 *
 * Copies share nodes, so repeated subterms cost nothing; printing and
 * size() see the unravelled tree.
 */
class Term
{
public:
  static Term var( unsigned index );
  static Term gate( std::string name, std::vector<Term> children );

  bool is_var() const noexcept { return node_->is_var; }
  unsigned var_index() const noexcept { return node_->index; }
  std::string const& name() const noexcept { return node_->name; }
  std::vector<Term> const& children() const noexcept { return node_->children; }

  /// One more than the largest variable index (0 for variable-free terms).
  unsigned min_arity() const;
  /// Number of nodes of the unravelled tree (saturating).
  uint64_t size() const;
  unsigned depth() const;

  /// Identity of the shared node, used for DAG embedding.
  void const* id() const noexcept { return node_.get(); }

  bool operator==( Term const& o ) const;
  bool operator!=( Term const& o ) const { return !( *this == o ); }

  /// Replaces x_i by args[i].
  Term substitute( std::vector<Term> const& args ) const;

private:
  struct Node
  {
    bool is_var = false;
    unsigned index = 0;
    std::string name;
    std::vector<Term> children;
  };
  explicit Term( std::shared_ptr<Node const> n ) : node_( std::move( n ) ) {}
  std::shared_ptr<Node const> node_;
};

struct Gate
{
  std::string name;
  BoolFun fun;
};

/// Expression of a gate in terms of another basis (referenced by name).
struct Definition
{
  std::string target_basis;
  Term term;
};

/// Named finite set of gates.
class Basis
{
public:
  Basis() = default;
  Basis( std::string name, std::vector<Gate> gates );

  std::string const& name() const noexcept { return name_; }
  std::vector<Gate> const& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }

  Gate const* find( std::string_view gate ) const;
  Gate const& at( std::string_view gate ) const;
  std::vector<BoolFun> functions() const;

  /// Adds a gate; the name must be new.
  void add_gate( Gate g );
  /// Union with another basis; gates with the same name must agree.
  Basis merged( Basis const& other, std::string name ) const;

  /// Registers a definition after checking it evaluates to the gate's table.
  void add_definition( std::string const& gate, Definition def, Basis const& target );
  Definition const* definition( std::string_view gate, std::string_view target_basis ) const;

private:
  std::string name_;
  std::vector<Gate> gates_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<Definition>, std::less<>> definitions_;
};

struct Assignment
{
  unsigned arity;
  uint64_t bits;

  bool operator[]( unsigned i ) const noexcept { return ( bits >> i ) & 1u; }
};

/// Builds an assignment from a string of 0/1 characters, x_0 first.
Assignment assignment_from_string( std::string_view bits );
std::string assignment_to_string( Assignment const& a );

/*! \brief Circuit as a topologically ordered node list.
 *
 * Node inputs always refer to earlier nodes, so cycles cannot be built.
 */
class CircuitDag
{
public:
  struct Node
  {
    bool is_var = false;
    unsigned var = 0;
    std::string gate;
    std::vector<uint32_t> inputs;
  };

  explicit CircuitDag( unsigned arity = 1 );

  unsigned arity() const noexcept { return arity_; }
  std::vector<Node> const& nodes() const noexcept { return nodes_; }
  uint32_t output() const;
  bool has_output() const noexcept { return output_.has_value(); }

  /// Node of variable x_i (created once).
  uint32_t add_var( unsigned i );
  uint32_t add_gate( std::string gate, std::vector<uint32_t> inputs );
  void set_output( uint32_t id );

  std::size_t gate_count() const;
  unsigned depth() const;

  /// Checks gate names and in-degrees against a basis.
  void validate( Basis const& basis ) const;
  /// Copy without nodes unreachable from the output.
  CircuitDag pruned() const;

  bool operator==( CircuitDag const& o ) const;

private:
  unsigned arity_;
  std::vector<Node> nodes_;
  std::vector<int64_t> var_nodes_;
  std::optional<uint32_t> output_;
};

/// Embeds a term as a DAG, sharing identical node objects.
CircuitDag to_dag( Term const& t, unsigned arity );
/// Unravels a DAG into a tree-shaped term (shared nodes stay shared in memory).
Term to_term( CircuitDag const& c );

bool eval( Term const& t, Basis const& basis, Assignment const& a );
bool eval( CircuitDag const& c, Basis const& basis, Assignment const& a );

/// Exhaustive evaluation; capacity error when arity exceeds max_arity.
BoolFun truth_table( Term const& t, Basis const& basis, unsigned arity, unsigned max_arity = kMaxArity );
BoolFun truth_table( CircuitDag const& c, Basis const& basis, unsigned max_arity = kMaxArity );

/// Table of gate(children) where all children share one arity.
BoolFun apply_gate( BoolFun const& gate, std::vector<BoolFun const*> const& children );

Term parse_formula( std::string_view text, Basis const& basis );
std::string print_formula( Term const& t );

CircuitDag parse_netlist( std::string_view text, Basis const& basis );
std::string print_netlist( CircuitDag const& c );

} // namespace clonelab
