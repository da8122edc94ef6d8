#include "rightangle/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "rightangle/error.hpp"

namespace rightangle::geometry {

PointSet::PointSet(FieldSpec field, std::size_t n, std::vector<Point> points)
    : field_(std::move(field)), n_(n), points_(std::move(points)) {
  for (const auto& pt : points_) {
    if (pt.dim() != n_) {
      throw Error(ErrorKind::DimensionMismatch,
                  "point of dimension " + std::to_string(pt.dim()) + " in a set of dimension " +
                      std::to_string(n_));
    }
    for (auto c : pt.coords) {
      if (c.code() >= field_.q()) throw Error(ErrorKind::OutOfRange, "coordinate outside the field");
    }
  }
  std::vector<const Point*> sorted;
  sorted.reserve(points_.size());
  for (const auto& pt : points_) sorted.push_back(&pt);
  std::sort(sorted.begin(), sorted.end(), [](const Point* a, const Point* b) { return *a < *b; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (*sorted[i] == *sorted[i - 1]) {
      throw Error(ErrorKind::DuplicatePoint, "duplicate point " + gf::to_string(field_, *sorted[i]));
    }
  }
}

bool is_right_angle(const FieldSpec& f, const Point& x, const Point& y, const Point& z) {
  if (x.dim() != y.dim() || x.dim() != z.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "right-angle test on points of different dimension");
  }
  if (x == y || x == z || y == z) return false;
  return gf::inner_product(f, gf::sub(f, z, x), gf::sub(f, y, x)).is_zero();
}

namespace {

// First witness with vertex in [begin, end), stopping early once a smaller
// vertex has been reported by another worker.
std::optional<TripleWitness> scan_vertices(const PointSet& a, std::size_t begin, std::size_t end,
                                           const std::atomic<std::size_t>& best_vertex) {
  const auto& f = a.field();
  const std::size_t m = a.size();
  std::vector<Point> diffs(m);
  for (std::size_t v = begin; v < end; ++v) {
    if (v > best_vertex.load(std::memory_order_relaxed)) return std::nullopt;
    for (std::size_t j = 0; j < m; ++j) diffs[j] = gf::sub(f, a[j], a[v]);
    for (std::size_t j = 0; j < m; ++j) {
      if (j == v) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (k == v) continue;
        if (gf::inner_product(f, diffs[k], diffs[j]).is_zero()) {
          return TripleWitness{v, j, k, f.zero()};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<TripleWitness> find_right_angle(const PointSet& a, unsigned threads) {
  const std::size_t m = a.size();
  std::atomic<std::size_t> best_vertex{std::numeric_limits<std::size_t>::max()};
  if (threads <= 1 || m < 64) return scan_vertices(a, 0, m, best_vertex);

  const std::size_t workers = std::min<std::size_t>(threads, m);
  std::vector<std::optional<TripleWitness>> found(workers);
  std::vector<std::thread> pool;
  const std::size_t chunk = (m + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(m, begin + chunk);
      found[w] = scan_vertices(a, begin, end, best_vertex);
      if (found[w]) {
        std::size_t cur = best_vertex.load();
        while (found[w]->vertex < cur && !best_vertex.compare_exchange_weak(cur, found[w]->vertex)) {
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // Chunks are ordered by vertex, so the first non-empty chunk holds the answer.
  for (auto& w : found) {
    if (w) return w;
  }
  return std::nullopt;
}

PointSet construction_layer(const FieldSpec& f, std::size_t n) {
  const std::size_t weight = f.q() - 1;
  if (n < weight) {
    throw Error(ErrorKind::BadDimension,
                "construction needs n >= q-1 = " + std::to_string(weight) + ", got n = " + std::to_string(n));
  }
  std::vector<Point> points;
  // Walk every n-bit mask of the right weight; sorting afterwards gives
  // lexicographic order on the coordinate tuples.
  std::vector<bool> mask(n, false);
  std::fill(mask.end() - static_cast<std::ptrdiff_t>(weight), mask.end(), true);
  do {
    Point pt = gf::zero_point(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) pt.coords[i] = f.one();
    }
    points.push_back(std::move(pt));
  } while (std::next_permutation(mask.begin(), mask.end()));
  std::sort(points.begin(), points.end());
  return PointSet(f, n, std::move(points));
}

PointSet translate(const PointSet& a, const Point& v) {
  if (v.dim() != a.n()) throw Error(ErrorKind::DimensionMismatch, "translation vector dimension");
  std::vector<Point> out;
  out.reserve(a.size());
  for (const auto& pt : a.points()) out.push_back(gf::add(a.field(), pt, v));
  return PointSet(a.field(), a.n(), std::move(out));
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

namespace {
void require_prime_power(std::uint64_t q) {
  if (gf::factor_prime_power(q).p == 0) {
    throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
  }
}
}  // namespace

BigInt upper_bound(std::uint64_t n, std::uint64_t q) {
  require_prime_power(q);
  if (q % 2 == 0) throw Error(ErrorKind::EvenCharacteristic, "the upper bound needs odd q");
  return binomial(n + q, q - 1) + 3;
}

BigInt lower_bound_size(std::uint64_t n, std::uint64_t q) {
  require_prime_power(q);
  if (n < q - 1) {
    throw Error(ErrorKind::BadDimension, "lower bound needs n >= q-1 = " + std::to_string(q - 1));
  }
  return binomial(n, q - 1);
}

BoundsReport bounds_report(std::uint64_t n, std::uint64_t q) {
  require_prime_power(q);
  BoundsReport r;
  r.n = n;
  r.q = q;
  if (n >= q - 1) r.lower = lower_bound_size(n, q);
  if (q % 2 == 1) r.upper = upper_bound(n, q);
  if (n == 1) {
    // The whole line F_q is free: (z-x)(y-x) != 0 for distinct field elements.
    r.exact = q;
    r.status = ValueStatus::Exact;
  }
  return r;
}

}  // namespace rightangle::geometry
