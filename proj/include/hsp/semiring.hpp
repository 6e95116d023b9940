/*
 * Scalar semirings for the tensor core.
 *
 * Every tensor in this library is a dense array of scalars drawn from a
 * commutative semiring equipped with an involution ("dagger" on scalars).
 * Three semirings are supported:
 *
 *   ComplexF   : complex doubles, involution = complex conjugation
 *   RealF      : doubles, involution = identity
 *   BooleanRig : {0,1} with OR as addition and AND as multiplication;
 *                idempotent, no subtraction, involution = identity
 *
 * The semiring is a compile-time choice: tensors over different semirings
 * are different types and cannot be mixed.  Each trait struct provides the
 * value type, the ring operations, the involution, and equality semantics
 * (Boolean comparisons are exact; the float semirings compare with an
 * absolute tolerance supplied by the caller).
 */
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <type_traits>

namespace hsp {

struct ComplexF {
  using value_type = std::complex<double>;
  static constexpr bool exact = false;
  static std::string name() { return "complex"; }
  static value_type zero() { return {0.0, 0.0}; }
  static value_type one() { return {1.0, 0.0}; }
  static value_type add(value_type a, value_type b) { return a + b; }
  static value_type mul(value_type a, value_type b) { return a * b; }
  static value_type involve(value_type a) { return std::conj(a); }
  // |a - b| used for residuals in law reports.
  static double abs_diff(value_type a, value_type b) { return std::abs(a - b); }
  static value_type from_int(std::int64_t n) {
    return {static_cast<double>(n), 0.0};
  }
};

struct RealF {
  using value_type = double;
  static constexpr bool exact = false;
  static std::string name() { return "real"; }
  static value_type zero() { return 0.0; }
  static value_type one() { return 1.0; }
  static value_type add(value_type a, value_type b) { return a + b; }
  static value_type mul(value_type a, value_type b) { return a * b; }
  static value_type involve(value_type a) { return a; }
  static double abs_diff(value_type a, value_type b) {
    return a > b ? a - b : b - a;
  }
  static value_type from_int(std::int64_t n) { return static_cast<double>(n); }
};

// The boolean semiring is a rig, not a ring: 1 + 1 = 1 and nothing has an
// additive inverse.  It is the "possibilistic" scalar theory -- a tensor
// entry records only whether a transition is possible.
struct BooleanRig {
  using value_type = std::uint8_t;  // 0 or 1
  static constexpr bool exact = true;
  static std::string name() { return "boolean"; }
  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static value_type add(value_type a, value_type b) { return a | b; }
  static value_type mul(value_type a, value_type b) { return a & b; }
  static value_type involve(value_type a) { return a; }
  static double abs_diff(value_type a, value_type b) {
    return a == b ? 0.0 : 1.0;
  }
  // Semiring sum of n copies of 1: zero iff n == 0.
  static value_type from_int(std::int64_t n) { return n != 0 ? 1 : 0; }
};

// Embed a scalar into the complex plane for uniform reporting.
template <typename R>
std::complex<double> to_complex(const typename R::value_type& v) {
  if constexpr (std::is_same_v<R, ComplexF>) {
    return v;
  } else {
    return {static_cast<double>(v), 0.0};
  }
}

}  // namespace hsp
