#pragma once

#include <clonelab/bool_fun.hpp>
#include <clonelab/lattice.hpp>
#include <clonelab/term.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonelab
{

/*! \brief Sorting-network circuit for theta^n_t over DeMorgan.
 *
 * Batcher's odd-even merge network on the next power of two, with the
 * padding lines fixed to 0 and folded away. The output is line t-1 of the
 * descending sort. For n <= 16 the result is checked against the table.
 */
CircuitDag theta_circuit( unsigned n, unsigned t );

/// Clone generated by theta^n_t.
CloneDesc threshold_clone( unsigned n, unsigned t );

/// One step of the amplification map f(x) = (k+1)x^k - kx^(k+1).
double amplify( unsigned k, double x );

/// The fixed point of the amplification map in (1/2, 1).
double sigma( unsigned k );

/// p_d for p_0 = p0.
double recurrence( unsigned k, double p0, unsigned d );

/*! \brief Constants of the convergence analysis for one k.
 *
 * Near sigma, |f(x)-sigma| >= gamma0 |x-sigma| whenever |x-sigma| <= epsilon0;
 * near the end points, f(x) <= gamma1 x^2 and f(1-x) >= 1 - gamma1 x^2
 * whenever x <= epsilon1, with gamma1 epsilon1 < 1.
 */
struct AmplifierParams
{
  unsigned k;
  double sigma;
  double epsilon0;
  double gamma0;
  double epsilon1;
  double gamma1;
};

AmplifierParams amplifier_params( unsigned k );

/// floor(t / sigma_k), found from the sign change of x^k - (k+1)t^(k-1)x + kt^k.
uint64_t pick_N( unsigned k, uint64_t t, uint64_t n );

/// Least d taking both critical weights within 2^-(n+e) of their limits.
unsigned choose_depth( unsigned k, uint64_t N, unsigned n, unsigned e );

/*! \brief Finite bit string consumed from the front.
 *
 * Hex text is read left to right, each digit most significant bit first.
 * Seeded streams expand the seed with splitmix64 into `length` bits.
 */
class RandomStream
{
public:
  static RandomStream from_hex( std::string_view hex );
  static RandomStream from_seed( uint64_t seed, uint64_t length );

  bool next_bit();
  /// Next `width` bits as an integer, first bit most significant.
  uint64_t next_bits( unsigned width );
  /// Uniform value in [0, bound) by rejection from ceil(log2 bound)-bit chunks.
  uint64_t uniform( uint64_t bound );

  uint64_t length() const noexcept { return length_; }
  uint64_t consumed() const noexcept { return cursor_; }
  uint64_t remaining() const noexcept { return length_ - cursor_; }

private:
  RandomStream() = default;

  std::vector<uint8_t> nibbles_;
  bool seeded_ = false;
  uint64_t seed_ = 0;
  uint64_t word_ = 0;
  uint64_t length_ = 0;
  uint64_t cursor_ = 0;
};

/// Conjunction of x_0..x_{n-1} as a balanced term over THETA_<k+1>_<k>.
Term theta_and_term( unsigned k, unsigned n );

/*! \brief Complete (k+1)-ary tree of THETA_<k+1>_<k> gates.
 *
 * Leaves are listed left to right and name positions 0..N-1; positions
 * below n are the variables, the others stand for the conjunction of all
 * variables.
 */
struct ThresholdFormula
{
  unsigned k = 3;
  unsigned n = 1;
  uint64_t N = 1;
  unsigned depth = 0;
  std::vector<uint32_t> leaves;

  std::string gate_name() const;
  Basis basis() const;
  Term to_term() const;
  /// The tree on an assignment to all N positions (bit j = position j).
  bool eval_positions( std::vector<bool> const& a ) const;
  /// Table of the formula over its n variables; arity at most 24.
  BoolFun truth_table() const;
};

/// Tree with uniformly sampled leaves, consumed leaf by leaf.
ThresholdFormula sample_threshold_tree( unsigned k, uint64_t N, unsigned n, unsigned depth, RandomStream& r );

/*! \brief Random formula equal to theta^n_t with probability >= 1 - 2^-e.
 *
 * Requires k >= 3 and sigma_k n < t <= n. N = pick_N(k, t, n); the depth
 * is choose_depth(k, N, n, e) unless overridden.
 */
ThresholdFormula random_threshold_formula( unsigned n, unsigned t, unsigned e, RandomStream& r, unsigned k = 3,
                                           std::optional<unsigned> depth = std::nullopt );

} // namespace clonelab
