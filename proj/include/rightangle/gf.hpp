#pragma once

// Arithmetic in F_q = F_p[t]/(mu(t)), q = p^k, and vectors over F_q^n.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rightangle::gf {

using Coeff = std::uint32_t;

/// An element of F_q stored as its packed polynomial-basis code
/// sum_i coeffs[i] * p^i (coefficients little-endian). For k = 1 the code is
/// the residue itself. Codes are always < q, so equality is code equality.
class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint32_t code) : code_(code) {}

  constexpr std::uint32_t code() const noexcept { return code_; }
  constexpr bool is_zero() const noexcept { return code_ == 0; }

  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

 private:
  std::uint32_t code_ = 0;
};

// Largest supported field order; codes must fit in 16 bits for the tables.
inline constexpr std::uint32_t kMaxOrder = 1u << 16;

class FieldSpec {
 public:
  /// Validates p, k and the modulus (little-endian, length k + 1, monic,
  /// irreducible). For k = 1 any monic linear modulus is normalised to t.
  static FieldSpec make(std::uint32_t p, std::uint32_t k, std::vector<Coeff> modulus);

  std::uint32_t p() const noexcept { return impl_->p; }
  std::uint32_t k() const noexcept { return impl_->k; }
  std::uint32_t q() const noexcept { return impl_->q; }
  const std::vector<Coeff>& modulus() const noexcept { return impl_->modulus; }
  bool odd_characteristic() const noexcept { return impl_->p != 2; }

  FieldElement zero() const noexcept { return FieldElement(0); }
  FieldElement one() const noexcept { return FieldElement(1); }
  /// Image of an integer in the prime subfield.
  FieldElement from_int(std::int64_t v) const;
  /// Throws OutOfRange for a wrong length or a coefficient >= p.
  FieldElement from_coeffs(std::span<const Coeff> coeffs) const;
  /// Throws OutOfRange when code >= q.
  FieldElement from_code(std::uint64_t code) const;
  std::vector<Coeff> coeffs(FieldElement a) const;

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }
  FieldElement mul(FieldElement a, FieldElement b) const;
  /// Throws DivisionByZero for a = 0.
  FieldElement inv(FieldElement a) const;
  /// Square-and-multiply; 0^0 = 1.
  FieldElement pow(FieldElement a, std::uint64_t e) const;

  /// Bare integer for k = 1, "[c0,c1,...]" otherwise.
  std::string to_string(FieldElement a) const;
  /// Human-readable name such as "F_9 (t^2+1)".
  std::string describe() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.impl_ == b.impl_ ||
           (a.p() == b.p() && a.k() == b.k() && a.modulus() == b.modulus());
  }

 private:
  struct Impl {
    std::uint32_t p = 0;
    std::uint32_t k = 0;
    std::uint32_t q = 0;
    std::vector<Coeff> modulus;
    // Dense tables, present when q <= kTableLimit.
    std::vector<std::uint16_t> add_table;
    std::vector<std::uint16_t> mul_table;
    std::vector<std::uint16_t> neg_table;
    std::vector<std::uint16_t> inv_table;
  };
  static constexpr std::uint32_t kTableLimit = 256;

  explicit FieldSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  FieldElement add_slow(FieldElement a, FieldElement b) const;
  FieldElement mul_slow(FieldElement a, FieldElement b) const;
  FieldElement neg_slow(FieldElement a) const;

  std::shared_ptr<const Impl> impl_;
};

bool is_prime(std::uint64_t v);
/// Returns {p, k} with q = p^k, or {0, 0} when q is not a prime power.
struct PrimePower {
  std::uint32_t p = 0;
  std::uint32_t k = 0;
};
PrimePower factor_prime_power(std::uint64_t q);

/// Polynomial product a*b reduced mod the monic modulus, all over F_p.
/// Coefficient vectors are little-endian; the result has length deg(modulus).
std::vector<Coeff> poly_mulmod(std::span<const Coeff> a, std::span<const Coeff> b,
                               std::span<const Coeff> modulus, std::uint32_t p);
/// Irreducibility over F_p: root-absence for degree <= 3, trial division by
/// every monic polynomial of degree <= deg/2 otherwise.
bool is_irreducible(std::span<const Coeff> modulus, std::uint32_t p);

/// Field-order -> modulus table. The built-in table covers
/// q in {2,3,4,5,7,8,9,11,13,25,27,49}; every entry is re-validated when the
/// table is built, so a bad entry fails at load.
class ModulusTable {
 public:
  static ModulusTable builtin();

  /// Adds or replaces the entry for p^k after validating it.
  void set(std::uint32_t p, std::uint32_t k, std::vector<Coeff> modulus);
  /// Field for q. Prime q always works; a prime power missing from the table
  /// gets the lexicographically first monic irreducible of degree k.
  FieldSpec field(std::uint64_t q) const;
  std::vector<std::uint32_t> orders() const;

 private:
  std::map<std::uint32_t, FieldSpec> fields_;
};

/// Built-in table lookup.
FieldSpec standard_field(std::uint64_t q);

/// A vector in F_q^n. The field is carried by the owning container.
struct Point {
  std::vector<FieldElement> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  friend auto operator<=>(const Point&, const Point&) = default;
};

Point add(const FieldSpec& f, const Point& u, const Point& v);
Point sub(const FieldSpec& f, const Point& u, const Point& v);
Point scale(const FieldSpec& f, FieldElement lambda, const Point& u);
/// Standard bilinear form sum_i u_i v_i. Throws DimensionMismatch.
FieldElement inner_product(const FieldSpec& f, const Point& u, const Point& v);
Point zero_point(std::size_t n);
std::string to_string(const FieldSpec& f, const Point& u);

}  // namespace rightangle::gf
