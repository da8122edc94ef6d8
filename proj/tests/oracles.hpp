#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// arithmetic: field operations are schoolbook polynomial arithmetic on plain
// integer vectors, and searches are naive enumerations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Poly = std::vector<int>;  // little-endian coefficients

/// F_p[t]/(modulus), elements as length-k coefficient vectors.
struct Field {
  int p;
  Poly modulus;  // monic, length k + 1

  int k() const { return static_cast<int>(modulus.size()) - 1; }
  int q() const {
    int r = 1;
    for (int i = 0; i < k(); ++i) r *= p;
    return r;
  }

  Poly element(int code) const {
    Poly e(k(), 0);
    for (int i = 0; i < k(); ++i) {
      e[i] = code % p;
      code /= p;
    }
    return e;
  }
  int code(const Poly& e) const {
    int c = 0;
    for (int i = k() - 1; i >= 0; --i) c = c * p + e[i];
    return c;
  }

  Poly add(const Poly& a, const Poly& b) const {
    Poly r(k());
    for (int i = 0; i < k(); ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  Poly sub(const Poly& a, const Poly& b) const {
    Poly r(k());
    for (int i = 0; i < k(); ++i) r[i] = ((a[i] - b[i]) % p + p) % p;
    return r;
  }
  // Long division of the full product by the modulus.
  Poly mul(const Poly& a, const Poly& b) const {
    Poly prod(2 * k() - 1, 0);
    for (int i = 0; i < k(); ++i) {
      for (int j = 0; j < k(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    for (int d = static_cast<int>(prod.size()) - 1; d >= k(); --d) {
      const int lead = prod[d];
      if (lead == 0) continue;
      for (int i = 0; i <= k(); ++i) {
        prod[d - k() + i] = ((prod[d - k() + i] - lead * modulus[i]) % p + p) % p;
      }
    }
    prod.resize(k());
    return prod;
  }
  bool is_zero(const Poly& a) const {
    return std::all_of(a.begin(), a.end(), [](int c) { return c == 0; });
  }
};

using Vec = std::vector<int>;  // element codes

inline Poly dot(const Field& f, const Vec& u, const Vec& v) {
  Poly acc(f.k(), 0);
  for (std::size_t i = 0; i < u.size(); ++i) acc = f.add(acc, f.mul(f.element(u[i]), f.element(v[i])));
  return acc;
}

inline bool right_angle(const Field& f, const Vec& x, const Vec& y, const Vec& z) {
  if (x == y || x == z || y == z) return false;
  Vec zx(x.size()), yx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    zx[i] = f.code(f.sub(f.element(z[i]), f.element(x[i])));
    yx[i] = f.code(f.sub(f.element(y[i]), f.element(x[i])));
  }
  return f.is_zero(dot(f, zx, yx));
}

/// Every ordered triple of the set, no symmetry shortcuts.
inline bool has_right_angle(const Field& f, const std::vector<Vec>& pts) {
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      for (const auto& z : pts) {
        if (right_angle(f, x, y, z)) return true;
      }
    }
  }
  return false;
}

inline std::vector<Vec> all_points(int q, int n) {
  std::vector<Vec> out;
  Vec v(n, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      out.push_back(v);
      return;
    }
    for (int c = 0; c < q; ++c) {
      v[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// Maximum right-angle-free subset size by plain include/exclude recursion
/// with the trivial size bound and no symmetry reduction.
inline std::size_t max_free_size(const Field& f, int n) {
  const auto pts = all_points(f.q(), n);
  std::size_t best = 0;
  std::vector<Vec> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    best = std::max(best, chosen.size());
    for (std::size_t i = start; i < pts.size(); ++i) {
      if (chosen.size() + (pts.size() - i) <= best) return;
      chosen.push_back(pts[i]);
      bool ok = true;
      for (std::size_t a = 0; a + 1 < chosen.size() && ok; ++a) {
        for (std::size_t b = a + 1; b + 1 < chosen.size() && ok; ++b) {
          const auto& x = chosen[a];
          const auto& y = chosen[b];
          const auto& z = chosen.back();
          ok = !right_angle(f, x, y, z) && !right_angle(f, y, x, z) && !right_angle(f, z, x, y);
        }
      }
      if (ok) rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

/// Rank over a prime field by brute force: the largest r such that some
/// r x r minor has nonzero Leibniz determinant. Only for tiny matrices.
inline std::size_t brute_rank_prime(const std::vector<std::vector<int>>& m, int p) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  auto det = [&](const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) {
    std::vector<std::size_t> perm(cs.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    long long total = 0;
    do {
      int inversions = 0;
      for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
      }
      long long term = 1;
      for (std::size_t i = 0; i < perm.size(); ++i) term = term * m[rs[i]][cs[perm[i]]] % p;
      total += (inversions % 2 ? -term : term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return ((total % p) + p) % p;
  };
  for (std::size_t r = std::min(rows, cols); r > 0; --r) {
    std::vector<bool> rsel(rows, false), csel(cols, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(r), true);
    do {
      std::vector<std::size_t> rs;
      for (std::size_t i = 0; i < rows; ++i) {
        if (rsel[i]) rs.push_back(i);
      }
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<long>(r), true);
      do {
        std::vector<std::size_t> cs;
        for (std::size_t i = 0; i < cols; ++i) {
          if (csel[i]) cs.push_back(i);
        }
        if (det(rs, cs) != 0) return r;
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

/// Number of (n+2)-tuples of nonnegative integers summing to total, by
/// direct nested enumeration.
inline std::size_t count_patterns(int parts, int total) {
  if (parts == 1) return 1;
  std::size_t c = 0;
  for (int e = 0; e <= total; ++e) c += count_patterns(parts - 1, total - e);
  return c;
}

}  // namespace oracle
