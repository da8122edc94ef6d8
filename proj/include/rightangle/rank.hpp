#pragma once

// Dense matrices and 3-tensors over F_q, exact matrix rank, the P-matrix and
// T-tensor constructions, the polynomial tensor f(x,y,z), and explicit
// slice decompositions with a pointwise checker.

#include <cstddef>
#include <optional>
#include <vector>

#include "rightangle/geometry.hpp"
#include "rightangle/gf.hpp"

namespace rightangle::rank {

using geometry::BigInt;
using geometry::PointSet;
using gf::FieldElement;
using gf::FieldSpec;

/// Default bound on |A| for dense A x A x A tables (m^3 entries).
inline constexpr std::size_t kDefaultTensorCap = 64;

class MatrixFq {
 public:
  MatrixFq(FieldSpec field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), entries_(rows * cols) {}

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  FieldElement at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  FieldElement& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const std::vector<FieldElement>& entries() const noexcept { return entries_; }

  static MatrixFq identity(const FieldSpec& f, std::size_t m);
  MatrixFq transposed() const;

  friend bool operator==(const MatrixFq& a, const MatrixFq& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.entries_ == b.entries_;
  }

 private:
  FieldSpec field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<FieldElement> entries_;
};

/// Nonzero coefficients c_a indexed like the points of a PointSet, with
/// their sum tau.
class CoefficientVector {
 public:
  /// Throws ZeroCoefficient if any entry is zero.
  CoefficientVector(FieldSpec field, std::vector<FieldElement> values);
  static CoefficientVector ones(const FieldSpec& f, std::size_t m);

  const FieldSpec& field() const noexcept { return field_; }
  const std::vector<FieldElement>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  FieldElement operator[](std::size_t i) const { return values_[i]; }
  FieldElement tau() const noexcept { return tau_; }

 private:
  FieldSpec field_;
  std::vector<FieldElement> values_;
  FieldElement tau_;
};

/// Values of a function A x A x A -> F_q, indexed by point positions.
class Tensor3 {
 public:
  explicit Tensor3(PointSet index_set);

  const PointSet& index_set() const noexcept { return index_set_; }
  const FieldSpec& field() const noexcept { return index_set_.field(); }
  std::size_t m() const noexcept { return m_; }
  FieldElement at(std::size_t x, std::size_t y, std::size_t z) const { return values_[(x * m_ + y) * m_ + z]; }
  FieldElement& at(std::size_t x, std::size_t y, std::size_t z) { return values_[(x * m_ + y) * m_ + z]; }
  const std::vector<FieldElement>& values() const noexcept { return values_; }

 private:
  PointSet index_set_;
  std::size_t m_;
  std::vector<FieldElement> values_;
};

enum class Axis { X, Y, Z };

/// Rank-one function uni(pivot) * bi(other two), where the pivot variable is
/// named by `axis` and bi is an m x m row-major table over the remaining
/// variables in (x, y, z) order.
struct Slice {
  Axis axis = Axis::X;
  std::vector<FieldElement> uni;
  std::vector<FieldElement> bi;

  bool is_nonzero() const;
};

struct SliceDecomposition {
  FieldSpec field;
  std::size_t target_size = 0;
  std::vector<Slice> slices;
  // Bookkeeping from decompose_f; zero for hand-built decompositions.
  std::size_t patterns_enumerated = 0;
  std::size_t dropped_zero_coefficient = 0;
};

struct Cell {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Disagreement {
  Cell cell;
  FieldElement lhs;
  FieldElement rhs;
};

/// Rank by Gaussian elimination; the input is not modified.
std::size_t mat_rank(const MatrixFq& m);

/// m x m matrix with tau on the diagonal and tau - c_j - c_k off it.
/// Throws EvenCharacteristic.
MatrixFq build_P(const CoefficientVector& c);

struct Lemma1Result {
  std::size_t rank = 0;
  bool holds = false;
};
Lemma1Result lemma1_check(const CoefficientVector& c);

/// Matrix of sum_a c_a (1 - d_a(y))(1 - d_a(z)): tau - c_j on the diagonal,
/// tau - c_j - c_k off it. Valid in any characteristic.
MatrixFq build_T_matrix_variant(const CoefficientVector& c);

/// T(x,y,z) = sum_a c_a (d_a(y) d_a(z) + (1 - d_a(y))(1 - d_a(z))) d_a(x).
/// Throws SizeMismatch, TooLarge.
Tensor3 build_T_tensor(const PointSet& a, const CoefficientVector& c, std::size_t cap = kDefaultTensorCap);

/// f(x,y,z) = H1(y,z) + (1 - H1(y,z)) <z-x, y-x>^(q-1), H1(y,z) = [y = z].
/// Throws EvenCharacteristic, TooLarge.
Tensor3 build_f_tensor(const PointSet& a, std::size_t cap = kDefaultTensorCap);

/// c_a at (a,a,a), zero elsewhere.
Tensor3 build_diagonal_tensor(const PointSet& a, const CoefficientVector& c, std::size_t cap = kDefaultTensorCap);

/// First cell (lexicographic in x, y, z) where the tensors differ, with
/// lhs = s, rhs = t. Throws IndexSetMismatch.
std::optional<Disagreement> tensors_equal_witness(const Tensor3& s, const Tensor3& t);

/// Expands f as H1 plus one X-axis slice per exponent pattern
/// (i, j, k_1..k_n), i + j + sum k = q-1, of
/// (F1(y,z) + F2(x) - sum_t x_t (y_t + z_t))^(q-1):
///   uni(x)  = multinomial * (-1)^(sum k) * F2(x)^j * prod x_t^k_t
///   bi(y,z) = H2(y,z) * F1(y,z)^i * prod (y_t + z_t)^k_t
/// Patterns whose coefficient vanishes mod p are dropped.
/// Throws EvenCharacteristic.
SliceDecomposition decompose_f(const PointSet& a);

/// One slice per point: c_a d_a(x) * d_a(y) d_a(z).
SliceDecomposition diagonal_decomposition(const PointSet& a, const CoefficientVector& c);

/// Drops slices whose uni or bi table is identically zero on A.
SliceDecomposition prune_vanishing(SliceDecomposition d);

/// Pointwise sum of the slices.
Tensor3 evaluate(const SliceDecomposition& d, const PointSet& index_set);

/// First cell where sum(slices) != t, lhs = decomposition value.
/// Throws IndexSetMismatch.
std::optional<Disagreement> check_decomposition(const SliceDecomposition& d, const Tensor3& t);

/// C(n+q, q-1) + 1. Throws EvenCharacteristic.
BigInt slice_count_bound(std::uint64_t n, std::uint64_t q);

}  // namespace rightangle::rank
