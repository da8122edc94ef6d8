#pragma once

// Exact and heuristic search for maximum right-angle-free subsets of F_q^n.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rightangle/geometry.hpp"

namespace rightangle::search {

using geometry::PointSet;
using gf::FieldElement;
using gf::FieldSpec;

struct SearchBudget {
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> max_seconds;
  unsigned threads = 1;
  bool exhaustive = false;  // run to completion with no limits

  static SearchBudget unlimited(unsigned threads = 1) { return {std::nullopt, std::nullopt, threads, true}; }
  /// Throws Usage unless a limit is set or exhaustive mode is on.
  void validate() const;
};

enum class Status { Exact, LowerBound };

/// Echo of the options a result was produced with.
struct SearchConfig {
  std::string method;
  SearchBudget budget;
  bool orbit_reduction = false;
  std::optional<std::uint64_t> seed;
  unsigned restarts = 0;
};

/// Resume state for branch_and_bound_max. Top-level branches are keyed by the
/// index of the second chosen point (the first is always the zero vector).
struct Checkpoint {
  static constexpr int kVersion = 1;
  int version = kVersion;
  std::size_t n = 0;
  std::uint32_t q = 0;
  bool orbit_reduction = false;
  std::vector<std::uint64_t> completed_branches;
  std::vector<std::uint64_t> best_indices;
  std::uint64_t nodes = 0;
};

struct SearchResult {
  std::size_t n = 0;
  std::uint32_t q = 0;
  PointSet best;
  std::size_t size = 0;
  Status status = Status::LowerBound;
  std::uint64_t nodes = 0;
  double elapsed = 0.0;
  SearchConfig config;
  std::optional<Checkpoint> checkpoint;  // branch_and_bound_max only
};

/// Points of F_q^n indexed in lexicographic order of their coordinate tuples
/// (coordinate 0 most significant). Answers triple-compatibility queries.
class PointSpace {
 public:
  PointSpace(FieldSpec field, std::size_t n);

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }

  gf::Point point(std::size_t index) const;
  std::size_t index_of(const gf::Point& p) const;

  /// Pairwise distinct and <z - x, y - x> = 0.
  bool right_angle(std::size_t x, std::size_t y, std::size_t z) const;
  /// {a, b, z} forms a right angle with any of the three as vertex.
  bool conflict(std::size_t a, std::size_t b, std::size_t z) const;
  /// Smallest index in the orbit of `index` under coordinate permutations
  /// and nonzero scaling (both fix the zero vector and preserve the
  /// predicate).
  std::size_t orbit_min(std::size_t index) const;

  PointSet to_point_set(std::vector<std::size_t> indices) const;

 private:
  gf::FieldElement dot(std::size_t i, std::size_t j) const;

  FieldSpec field_;
  std::size_t n_;
  std::size_t size_;
  std::vector<std::uint16_t> coords_;  // size_ * n_ element codes
  std::vector<std::uint16_t> gram_;    // size_^2 when small enough
};

/// Brute-force oracle: subsets in size-descending order, each tested with the
/// plain ordered-triple predicate. Throws TooLarge when q^n > 12.
SearchResult exhaustive_max(const FieldSpec& f, std::size_t n, const SearchBudget& budget);

struct BranchOptions {
  bool orbit_reduction = false;
  const Checkpoint* resume = nullptr;
};

/// Depth-first branch and bound with the zero vector fixed as first point.
/// Status is Exact iff every top-level branch was completed.
SearchResult branch_and_bound_max(const FieldSpec& f, std::size_t n, const SearchBudget& budget,
                                  const BranchOptions& options = {});

/// Randomized greedy insertion over seeded shuffles; best over restarts.
SearchResult greedy_lower(const FieldSpec& f, std::size_t n, std::uint64_t seed, unsigned restarts);

}  // namespace rightangle::search
