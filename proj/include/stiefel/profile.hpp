#pragma once

#include <optional>
#include <string>

#include "stiefel/rings.hpp"

namespace stiefel {

/**
 * Arithmetic facts about a valuation ring A, its residue field and its
 * quotient field, as consumed by the unit-vector and connectivity conditions.
 *
 * Every number is an upper bound that is known to hold (usually exact); an
 * empty optional means no usable bound is recorded, and conditions that need
 * it are reported as not established. A field is treated as the valuation
 * ring of its trivial valuation, so it is its own residue and quotient field
 * and counts as henselian.
 */
struct ArithmeticProfile {
  RingDescriptor ring;
  std::optional<unsigned> m_ring;          // m_A
  std::optional<unsigned> pythagoras_residue;  // P(residue field)
  std::optional<unsigned> m_quotient;      // m_K
  std::optional<unsigned> pythagoras_quotient;  // P(K)
  bool henselian = false;
  bool residue_formally_real = false;
  bool quotient_formally_real = false;

  /// Known values for F_p, Q, Z_(p) and Z/p^N (read as Z_p). Throws for Z.
  static ArithmeticProfile for_ring(const RingDescriptor& ring);
  std::string describe() const;
};

}  // namespace stiefel
