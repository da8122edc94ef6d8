#include "rightangle/rank.hpp"

#include <algorithm>
#include <functional>

#include "rightangle/error.hpp"

namespace rightangle::rank {

MatrixFq MatrixFq::identity(const FieldSpec& f, std::size_t m) {
  MatrixFq out(f, m, m);
  for (std::size_t i = 0; i < m; ++i) out.at(i, i) = f.one();
  return out;
}

MatrixFq MatrixFq::transposed() const {
  MatrixFq out(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
  }
  return out;
}

CoefficientVector::CoefficientVector(FieldSpec field, std::vector<FieldElement> values)
    : field_(std::move(field)), values_(std::move(values)), tau_(field_.zero()) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].is_zero()) {
      throw Error(ErrorKind::ZeroCoefficient, "coefficient " + std::to_string(i) + " is zero");
    }
    if (values_[i].code() >= field_.q()) throw Error(ErrorKind::OutOfRange, "coefficient outside the field");
    tau_ = field_.add(tau_, values_[i]);
  }
}

CoefficientVector CoefficientVector::ones(const FieldSpec& f, std::size_t m) {
  return CoefficientVector(f, std::vector<FieldElement>(m, f.one()));
}

Tensor3::Tensor3(PointSet index_set)
    : index_set_(std::move(index_set)), m_(index_set_.size()), values_(m_ * m_ * m_) {}

bool Slice::is_nonzero() const {
  auto nz = [](FieldElement v) { return !v.is_zero(); };
  return std::any_of(uni.begin(), uni.end(), nz) && std::any_of(bi.begin(), bi.end(), nz);
}

std::size_t mat_rank(const MatrixFq& input) {
  const auto& f = input.field();
  MatrixFq m = input;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m.at(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != rank) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(pivot, c), m.at(rank, c));
    }
    const FieldElement inv = f.inv(m.at(rank, col));
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (m.at(r, col).is_zero()) continue;
      const FieldElement factor = f.mul(m.at(r, col), inv);
      for (std::size_t c = col; c < m.cols(); ++c) {
        m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(rank, c)));
      }
    }
    ++rank;
  }
  return rank;
}

MatrixFq build_P(const CoefficientVector& c) {
  const auto& f = c.field();
  if (!f.odd_characteristic()) {
    throw Error(ErrorKind::EvenCharacteristic, "the P-matrix needs odd characteristic");
  }
  const std::size_t m = c.size();
  MatrixFq out(f, m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      out.at(j, k) = j == k ? c.tau() : f.sub(c.tau(), f.add(c[j], c[k]));
    }
  }
  return out;
}

Lemma1Result lemma1_check(const CoefficientVector& c) {
  const std::size_t r = mat_rank(build_P(c));
  return {r, r + 2 >= c.size()};
}

MatrixFq build_T_matrix_variant(const CoefficientVector& c) {
  const auto& f = c.field();
  const std::size_t m = c.size();
  MatrixFq out(f, m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      out.at(j, k) = j == k ? f.sub(c.tau(), c[j]) : f.sub(c.tau(), f.add(c[j], c[k]));
    }
  }
  return out;
}

namespace {

void require_cap(const PointSet& a, std::size_t cap) {
  if (a.size() > cap) {
    throw Error(ErrorKind::TooLarge,
                "|A| = " + std::to_string(a.size()) + " exceeds the tensor cap " + std::to_string(cap));
  }
}

void require_coefficients(const PointSet& a, const CoefficientVector& c) {
  if (c.size() != a.size()) {
    throw Error(ErrorKind::SizeMismatch,
                std::to_string(c.size()) + " coefficients for " + std::to_string(a.size()) + " points");
  }
  if (!(c.field() == a.field())) throw Error(ErrorKind::SizeMismatch, "coefficients live in another field");
}

void require_odd(const FieldSpec& f) {
  if (!f.odd_characteristic()) throw Error(ErrorKind::EvenCharacteristic, "f(x,y,z) needs odd q");
}

}  // namespace

Tensor3 build_T_tensor(const PointSet& a, const CoefficientVector& c, std::size_t cap) {
  require_cap(a, cap);
  require_coefficients(a, c);
  const auto& f = a.field();
  const std::size_t m = a.size();
  Tensor3 t(a);
  // Point sets are duplicate-free, so d_a(x) is index equality.
  auto delta = [&](std::size_t i, std::size_t j) { return i == j ? f.one() : f.zero(); };
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      for (std::size_t z = 0; z < m; ++z) {
        FieldElement acc = f.zero();
        for (std::size_t i = 0; i < m; ++i) {
          if (i != x) continue;  // d_a(x) = 0
          const FieldElement both = f.mul(delta(i, y), delta(i, z));
          const FieldElement neither = f.mul(f.sub(f.one(), delta(i, y)), f.sub(f.one(), delta(i, z)));
          acc = f.add(acc, f.mul(c[i], f.add(both, neither)));
        }
        t.at(x, y, z) = acc;
      }
    }
  }
  return t;
}

Tensor3 build_f_tensor(const PointSet& a, std::size_t cap) {
  require_cap(a, cap);
  const auto& f = a.field();
  require_odd(f);
  const std::size_t m = a.size();
  Tensor3 t(a);
  std::vector<gf::Point> diffs(m);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t j = 0; j < m; ++j) diffs[j] = gf::sub(f, a[j], a[x]);
    for (std::size_t y = 0; y < m; ++y) {
      for (std::size_t z = 0; z < m; ++z) {
        const FieldElement h1 = y == z ? f.one() : f.zero();
        const FieldElement angle = f.pow(gf::inner_product(f, diffs[z], diffs[y]), f.q() - 1);
        t.at(x, y, z) = f.add(h1, f.mul(f.sub(f.one(), h1), angle));
      }
    }
  }
  return t;
}

Tensor3 build_diagonal_tensor(const PointSet& a, const CoefficientVector& c, std::size_t cap) {
  require_cap(a, cap);
  require_coefficients(a, c);
  Tensor3 t(a);
  for (std::size_t i = 0; i < a.size(); ++i) t.at(i, i, i) = c[i];
  return t;
}

std::optional<Disagreement> tensors_equal_witness(const Tensor3& s, const Tensor3& t) {
  if (!(s.index_set() == t.index_set())) {
    throw Error(ErrorKind::IndexSetMismatch, "tensors are indexed by different point sets");
  }
  const std::size_t m = s.m();
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      for (std::size_t z = 0; z < m; ++z) {
        if (s.at(x, y, z) != t.at(x, y, z)) return Disagreement{{x, y, z}, s.at(x, y, z), t.at(x, y, z)};
      }
    }
  }
  return std::nullopt;
}

namespace {

BigInt factorial(std::uint64_t n) {
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

// Calls visit(exps) for every vector of `parts` nonnegative integers summing
// to `total`, in lexicographically decreasing order of exps.
void for_each_composition(std::size_t parts, std::uint32_t total,
                          const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::vector<std::uint32_t> exps(parts, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t pos, std::uint32_t left) {
    if (pos + 1 == parts) {
      exps[pos] = left;
      visit(exps);
      return;
    }
    for (std::uint32_t e = left + 1; e-- > 0;) {
      exps[pos] = e;
      rec(pos + 1, left - e);
    }
  };
  if (parts == 0) return;
  rec(0, total);
}

}  // namespace

SliceDecomposition decompose_f(const PointSet& a) {
  const auto& f = a.field();
  require_odd(f);
  const std::size_t m = a.size();
  const std::size_t n = a.n();
  const std::uint32_t power = f.q() - 1;

  SliceDecomposition d{f, m, {}, 0, 0};

  // H1(y,z) = sum_a d_a(y) d_a(z), paired with the constant 1 in x.
  Slice h1{Axis::X, std::vector<FieldElement>(m, f.one()), std::vector<FieldElement>(m * m, f.zero())};
  for (std::size_t i = 0; i < m; ++i) h1.bi[i * m + i] = f.one();
  d.slices.push_back(std::move(h1));

  // Per-point and per-pair ingredients of the expansion.
  std::vector<FieldElement> f2(m);
  for (std::size_t x = 0; x < m; ++x) f2[x] = gf::inner_product(f, a[x], a[x]);
  std::vector<FieldElement> f1(m * m);
  std::vector<FieldElement> h2(m * m);
  std::vector<gf::Point> sums(m * m);
  for (std::size_t y = 0; y < m; ++y) {
    for (std::size_t z = 0; z < m; ++z) {
      f1[y * m + z] = gf::inner_product(f, a[y], a[z]);
      h2[y * m + z] = y == z ? f.zero() : f.one();
      sums[y * m + z] = gf::add(f, a[y], a[z]);
    }
  }

  const BigInt total_factorial = factorial(power);
  // exps = (i, j, k_1, ..., k_n)
  for_each_composition(n + 2, power, [&](const std::vector<std::uint32_t>& exps) {
    ++d.patterns_enumerated;
    BigInt denom = 1;
    std::uint32_t k_sum = 0;
    for (std::size_t t = 0; t < exps.size(); ++t) {
      denom *= factorial(exps[t]);
      if (t >= 2) k_sum += exps[t];
    }
    const BigInt multinomial = total_factorial / denom;
    const auto residue = static_cast<std::int64_t>(static_cast<std::uint64_t>(multinomial % f.p()));
    FieldElement coeff = f.from_int(residue);
    if (k_sum % 2 == 1) coeff = f.neg(coeff);
    if (coeff.is_zero()) {
      ++d.dropped_zero_coefficient;
      return;
    }
    const std::uint32_t i_exp = exps[0];
    const std::uint32_t j_exp = exps[1];

    Slice s{Axis::X, std::vector<FieldElement>(m), std::vector<FieldElement>(m * m)};
    for (std::size_t x = 0; x < m; ++x) {
      FieldElement v = f.mul(coeff, f.pow(f2[x], j_exp));
      for (std::size_t t = 0; t < n; ++t) v = f.mul(v, f.pow(a[x].coords[t], exps[2 + t]));
      s.uni[x] = v;
    }
    for (std::size_t yz = 0; yz < m * m; ++yz) {
      FieldElement v = f.mul(h2[yz], f.pow(f1[yz], i_exp));
      for (std::size_t t = 0; t < n; ++t) v = f.mul(v, f.pow(sums[yz].coords[t], exps[2 + t]));
      s.bi[yz] = v;
    }
    d.slices.push_back(std::move(s));
  });
  return d;
}

SliceDecomposition diagonal_decomposition(const PointSet& a, const CoefficientVector& c) {
  require_coefficients(a, c);
  const auto& f = a.field();
  const std::size_t m = a.size();
  SliceDecomposition d{f, m, {}, 0, 0};
  for (std::size_t i = 0; i < m; ++i) {
    Slice s{Axis::X, std::vector<FieldElement>(m, f.zero()), std::vector<FieldElement>(m * m, f.zero())};
    s.uni[i] = c[i];
    s.bi[i * m + i] = f.one();
    d.slices.push_back(std::move(s));
  }
  return d;
}

SliceDecomposition prune_vanishing(SliceDecomposition d) {
  std::erase_if(d.slices, [](const Slice& s) { return !s.is_nonzero(); });
  return d;
}

Tensor3 evaluate(const SliceDecomposition& d, const PointSet& index_set) {
  if (d.target_size != index_set.size() || !(d.field == index_set.field())) {
    throw Error(ErrorKind::IndexSetMismatch, "decomposition does not match the index set");
  }
  const auto& f = d.field;
  const std::size_t m = d.target_size;
  Tensor3 t(index_set);
  for (const auto& s : d.slices) {
    if (s.uni.size() != m || s.bi.size() != m * m) {
      throw Error(ErrorKind::IndexSetMismatch, "slice tables have the wrong size");
    }
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < m; ++y) {
        for (std::size_t z = 0; z < m; ++z) {
          FieldElement v;
          switch (s.axis) {
            case Axis::X: v = f.mul(s.uni[x], s.bi[y * m + z]); break;
            case Axis::Y: v = f.mul(s.uni[y], s.bi[x * m + z]); break;
            case Axis::Z: v = f.mul(s.uni[z], s.bi[x * m + y]); break;
          }
          t.at(x, y, z) = f.add(t.at(x, y, z), v);
        }
      }
    }
  }
  return t;
}

std::optional<Disagreement> check_decomposition(const SliceDecomposition& d, const Tensor3& t) {
  return tensors_equal_witness(evaluate(d, t.index_set()), t);
}

BigInt slice_count_bound(std::uint64_t n, std::uint64_t q) {
  if (gf::factor_prime_power(q).p == 0) throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
  if (q % 2 == 0) throw Error(ErrorKind::EvenCharacteristic, "the slice bound needs odd q");
  return geometry::binomial(n + q, q - 1) + 1;
}

}  // namespace rightangle::rank
