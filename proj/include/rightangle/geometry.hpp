#pragma once

// Right angles in F_q^n: the predicate, set verification with witnesses,
// the weight-(q-1) indicator layer, and the closed-form size bounds.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

#include "rightangle/gf.hpp"

namespace rightangle::geometry {

using gf::FieldElement;
using gf::FieldSpec;
using gf::Point;
using BigInt = boost::multiprecision::cpp_int;

/// Ordered, duplicate-free list of points of F_q^n.
class PointSet {
 public:
  /// Throws DimensionMismatch, OutOfRange (coordinate code >= q) or
  /// DuplicatePoint.
  PointSet(FieldSpec field, std::size_t n, std::vector<Point> points);

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.n_ == b.n_ && a.field_ == b.field_ && a.points_ == b.points_;
  }

 private:
  FieldSpec field_;
  std::size_t n_;
  std::vector<Point> points_;
};

/// Indices into a PointSet; value = <arm2 - vertex, arm1 - vertex>.
struct TripleWitness {
  std::size_t vertex = 0;
  std::size_t arm1 = 0;
  std::size_t arm2 = 0;
  FieldElement value;

  friend bool operator==(const TripleWitness&, const TripleWitness&) = default;
};

/// True iff x, y, z are pairwise distinct and <z - x, y - x> = 0.
bool is_right_angle(const FieldSpec& f, const Point& x, const Point& y, const Point& z);

/// First right angle in (vertex, smaller arm, larger arm) order, or none.
/// Workers split the vertex range; the answer does not depend on `threads`.
std::optional<TripleWitness> find_right_angle(const PointSet& a, unsigned threads = 1);

/// All 0/1 vectors of Hamming weight q-1 in F_q^n, in lexicographic order.
/// Right-angle-freeness is not asserted; verify with find_right_angle.
/// Throws BadDimension when n < q-1.
PointSet construction_layer(const FieldSpec& f, std::size_t n);

/// {a + v : a in A}, order preserved.
PointSet translate(const PointSet& a, const Point& v);

BigInt binomial(std::uint64_t n, std::uint64_t k);

/// C(n+q, q-1) + 3. Throws EvenCharacteristic for even q, NotPrime when q is
/// not a prime power.
BigInt upper_bound(std::uint64_t n, std::uint64_t q);

/// C(n, q-1), the size of construction_layer(n, q). Throws BadDimension when
/// n < q-1.
BigInt lower_bound_size(std::uint64_t n, std::uint64_t q);

enum class ValueStatus { Exact, LowerBound };

struct BoundsReport {
  std::uint64_t n = 0;
  std::uint64_t q = 0;
  std::optional<BigInt> lower;  // absent when n < q-1
  std::optional<BigInt> upper;  // absent for even q
  std::optional<std::uint64_t> exact;
  ValueStatus status = ValueStatus::LowerBound;
};

BoundsReport bounds_report(std::uint64_t n, std::uint64_t q);

}  // namespace rightangle::geometry
