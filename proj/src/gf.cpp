#include "rightangle/gf.hpp"

#include <algorithm>
#include <sstream>

#include "rightangle/error.hpp"

namespace rightangle {

namespace gf {
namespace {

// Remainder of a modulo the monic polynomial b over F_p.
std::vector<Coeff> poly_rem(std::vector<Coeff> a, std::span<const Coeff> b, std::uint32_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t lead = a.back();
    if (lead != 0) {
      const std::size_t shift = a.size() - 1 - db;
      for (std::size_t i = 0; i <= db; ++i) {
        const std::uint64_t sub = (lead * b[i]) % p;
        a[shift + i] = static_cast<Coeff>((a[shift + i] + p - sub) % p);
      }
    }
    a.pop_back();
  }
  return a;
}

bool all_zero(std::span<const Coeff> v) {
  return std::all_of(v.begin(), v.end(), [](Coeff c) { return c == 0; });
}

std::uint64_t ipow(std::uint64_t base, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Little-endian digits of code in base p, padded to k.
std::vector<Coeff> unpack(std::uint32_t code, std::uint32_t p, std::uint32_t k) {
  std::vector<Coeff> out(k, 0);
  for (std::uint32_t i = 0; i < k; ++i) {
    out[i] = code % p;
    code /= p;
  }
  return out;
}

std::uint32_t pack(std::span<const Coeff> coeffs, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) code = code * p + coeffs[i];
  return code;
}

}  // namespace

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

PrimePower factor_prime_power(std::uint64_t q) {
  if (q < 2) return {};
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  std::uint32_t k = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1) return {};
  return {static_cast<std::uint32_t>(p), k};
}

std::vector<Coeff> poly_mulmod(std::span<const Coeff> a, std::span<const Coeff> b,
                               std::span<const Coeff> modulus, std::uint32_t p) {
  std::vector<Coeff> prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = static_cast<Coeff>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  auto rem = poly_rem(std::move(prod), modulus, p);
  rem.resize(modulus.size() - 1, 0);
  return rem;
}

bool is_irreducible(std::span<const Coeff> modulus, std::uint32_t p) {
  if (modulus.size() < 2) return false;
  const std::size_t deg = modulus.size() - 1;
  if (deg == 1) return true;
  if (deg <= 3) {
    for (std::uint64_t r = 0; r < p; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t i = modulus.size(); i-- > 0;) acc = (acc * r + modulus[i]) % p;
      if (acc == 0) return false;
    }
    return true;
  }
  std::vector<Coeff> f(modulus.begin(), modulus.end());
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    const std::uint64_t count = ipow(p, static_cast<std::uint32_t>(d));
    for (std::uint64_t low = 0; low < count; ++low) {
      auto g = unpack(static_cast<std::uint32_t>(low), p, static_cast<std::uint32_t>(d));
      g.push_back(1);
      if (all_zero(poly_rem(f, g, p))) return false;
    }
  }
  return true;
}

FieldSpec FieldSpec::make(std::uint32_t p, std::uint32_t k, std::vector<Coeff> modulus) {
  if (k == 0) throw Error(ErrorKind::ZeroDegree, "extension degree must be positive");
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (k > 16 || ipow(p, k) > kMaxOrder) {
    throw Error(ErrorKind::TooLarge, "field order exceeds " + std::to_string(kMaxOrder));
  }
  if (modulus.size() != k + 1) {
    throw Error(ErrorKind::BadModulus, "modulus must have k+1 = " + std::to_string(k + 1) +
                                           " coefficients, got " + std::to_string(modulus.size()));
  }
  for (Coeff c : modulus) {
    if (c >= p) throw Error(ErrorKind::BadModulus, "modulus coefficient out of range [0,p)");
  }
  if (modulus.back() != 1) throw Error(ErrorKind::NotMonic, "modulus leading coefficient is not 1");
  if (k == 1) {
    modulus = {0, 1};
  } else if (!is_irreducible(modulus, p)) {
    throw Error(ErrorKind::Reducible, "modulus is reducible over F_" + std::to_string(p));
  }

  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->k = k;
  impl->q = static_cast<std::uint32_t>(ipow(p, k));
  impl->modulus = std::move(modulus);
  FieldSpec slow(impl);

  const std::uint32_t q = impl->q;
  if (q <= kTableLimit) {
    impl->add_table.resize(std::size_t{q} * q);
    impl->mul_table.resize(std::size_t{q} * q);
    impl->neg_table.resize(q);
    impl->inv_table.resize(q, 0);
    for (std::uint32_t a = 0; a < q; ++a) {
      impl->neg_table[a] = static_cast<std::uint16_t>(slow.neg_slow(FieldElement(a)).code());
      for (std::uint32_t b = 0; b < q; ++b) {
        const std::size_t idx = std::size_t{a} * q + b;
        impl->add_table[idx] =
            static_cast<std::uint16_t>(slow.add_slow(FieldElement(a), FieldElement(b)).code());
        impl->mul_table[idx] =
            static_cast<std::uint16_t>(slow.mul_slow(FieldElement(a), FieldElement(b)).code());
        if (impl->mul_table[idx] == 1) impl->inv_table[a] = static_cast<std::uint16_t>(b);
      }
    }
  }
  return FieldSpec(std::move(impl));
}

FieldElement FieldSpec::from_int(std::int64_t v) const {
  const std::int64_t p = impl_->p;
  return FieldElement(static_cast<std::uint32_t>(((v % p) + p) % p));
}

FieldElement FieldSpec::from_coeffs(std::span<const Coeff> coeffs) const {
  if (coeffs.size() != impl_->k) {
    throw Error(ErrorKind::OutOfRange, "element needs " + std::to_string(impl_->k) + " coefficients");
  }
  for (Coeff c : coeffs) {
    if (c >= impl_->p) throw Error(ErrorKind::OutOfRange, "coefficient out of range [0,p)");
  }
  return FieldElement(pack(coeffs, impl_->p));
}

FieldElement FieldSpec::from_code(std::uint64_t code) const {
  if (code >= impl_->q) throw Error(ErrorKind::OutOfRange, "element code out of range [0,q)");
  return FieldElement(static_cast<std::uint32_t>(code));
}

std::vector<Coeff> FieldSpec::coeffs(FieldElement a) const { return unpack(a.code(), impl_->p, impl_->k); }

FieldElement FieldSpec::add(FieldElement a, FieldElement b) const {
  if (!impl_->add_table.empty()) return FieldElement(impl_->add_table[std::size_t{a.code()} * impl_->q + b.code()]);
  return add_slow(a, b);
}

FieldElement FieldSpec::neg(FieldElement a) const {
  if (!impl_->neg_table.empty()) return FieldElement(impl_->neg_table[a.code()]);
  return neg_slow(a);
}

FieldElement FieldSpec::mul(FieldElement a, FieldElement b) const {
  if (!impl_->mul_table.empty()) return FieldElement(impl_->mul_table[std::size_t{a.code()} * impl_->q + b.code()]);
  return mul_slow(a, b);
}

FieldElement FieldSpec::inv(FieldElement a) const {
  if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (!impl_->inv_table.empty()) return FieldElement(impl_->inv_table[a.code()]);
  return pow(a, impl_->q - 2);
}

FieldElement FieldSpec::pow(FieldElement a, std::uint64_t e) const {
  FieldElement result = one();
  FieldElement base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

FieldElement FieldSpec::add_slow(FieldElement a, FieldElement b) const {
  if (impl_->k == 1) return FieldElement((a.code() + b.code()) % impl_->p);
  auto ca = coeffs(a);
  const auto cb = coeffs(b);
  for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = (ca[i] + cb[i]) % impl_->p;
  return FieldElement(pack(ca, impl_->p));
}

FieldElement FieldSpec::neg_slow(FieldElement a) const {
  auto ca = coeffs(a);
  for (auto& c : ca) c = (impl_->p - c) % impl_->p;
  return FieldElement(pack(ca, impl_->p));
}

FieldElement FieldSpec::mul_slow(FieldElement a, FieldElement b) const {
  if (impl_->k == 1) {
    return FieldElement(static_cast<std::uint32_t>(std::uint64_t{a.code()} * b.code() % impl_->p));
  }
  const auto ca = coeffs(a);
  const auto cb = coeffs(b);
  return FieldElement(pack(poly_mulmod(ca, cb, impl_->modulus, impl_->p), impl_->p));
}

std::string FieldSpec::to_string(FieldElement a) const {
  if (impl_->k == 1) return std::to_string(a.code());
  std::ostringstream os;
  os << '[';
  const auto c = coeffs(a);
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

std::string FieldSpec::describe() const {
  std::ostringstream os;
  os << "F_" << impl_->q;
  if (impl_->k > 1) {
    os << " (";
    bool first = true;
    for (std::size_t i = impl_->modulus.size(); i-- > 0;) {
      const Coeff c = impl_->modulus[i];
      if (c == 0) continue;
      if (!first) os << '+';
      first = false;
      if (i == 0 || c != 1) os << c;
      if (i >= 1) os << 't';
      if (i >= 2) os << '^' << i;
    }
    os << ')';
  }
  return os.str();
}

ModulusTable ModulusTable::builtin() {
  ModulusTable table;
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) table.set(p, 1, {0, 1});
  table.set(2, 2, {1, 1, 1});
  table.set(2, 3, {1, 1, 0, 1});
  table.set(3, 2, {1, 0, 1});
  table.set(5, 2, {2, 4, 1});
  table.set(3, 3, {1, 2, 0, 1});
  table.set(7, 2, {3, 6, 1});
  return table;
}

void ModulusTable::set(std::uint32_t p, std::uint32_t k, std::vector<Coeff> modulus) {
  auto field = FieldSpec::make(p, k, std::move(modulus));
  fields_.insert_or_assign(field.q(), std::move(field));
}

FieldSpec ModulusTable::field(std::uint64_t q) const {
  if (q <= kMaxOrder) {
    if (auto it = fields_.find(static_cast<std::uint32_t>(q)); it != fields_.end()) return it->second;
  }
  const auto pk = factor_prime_power(q);
  if (pk.p == 0) throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
  if (pk.k == 1) return FieldSpec::make(pk.p, 1, {0, 1});
  if (q > kMaxOrder) throw Error(ErrorKind::TooLarge, "field order exceeds " + std::to_string(kMaxOrder));
  const auto count = static_cast<std::uint32_t>(ipow(pk.p, pk.k));
  for (std::uint32_t low = 0; low < count; ++low) {
    auto m = unpack(low, pk.p, pk.k);
    m.push_back(1);
    if (is_irreducible(m, pk.p)) return FieldSpec::make(pk.p, pk.k, std::move(m));
  }
  throw Error(ErrorKind::Reducible, "no irreducible modulus found");  // unreachable for valid q
}

std::vector<std::uint32_t> ModulusTable::orders() const {
  std::vector<std::uint32_t> out;
  for (const auto& [q, _] : fields_) out.push_back(q);
  return out;
}

FieldSpec standard_field(std::uint64_t q) {
  static const ModulusTable table = ModulusTable::builtin();
  return table.field(q);
}

namespace {
void require_same_dim(const Point& u, const Point& v) {
  if (u.dim() != v.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "dimensions " + std::to_string(u.dim()) + " and " + std::to_string(v.dim()));
  }
}
}  // namespace

Point add(const FieldSpec& f, const Point& u, const Point& v) {
  require_same_dim(u, v);
  Point out{std::vector<FieldElement>(u.dim())};
  for (std::size_t i = 0; i < u.dim(); ++i) out.coords[i] = f.add(u.coords[i], v.coords[i]);
  return out;
}

Point sub(const FieldSpec& f, const Point& u, const Point& v) {
  require_same_dim(u, v);
  Point out{std::vector<FieldElement>(u.dim())};
  for (std::size_t i = 0; i < u.dim(); ++i) out.coords[i] = f.sub(u.coords[i], v.coords[i]);
  return out;
}

Point scale(const FieldSpec& f, FieldElement lambda, const Point& u) {
  Point out{std::vector<FieldElement>(u.dim())};
  for (std::size_t i = 0; i < u.dim(); ++i) out.coords[i] = f.mul(lambda, u.coords[i]);
  return out;
}

FieldElement inner_product(const FieldSpec& f, const Point& u, const Point& v) {
  require_same_dim(u, v);
  FieldElement acc = f.zero();
  for (std::size_t i = 0; i < u.dim(); ++i) acc = f.add(acc, f.mul(u.coords[i], v.coords[i]));
  return acc;
}

Point zero_point(std::size_t n) { return Point{std::vector<FieldElement>(n)}; }

std::string to_string(const FieldSpec& f, const Point& u) {
  std::string out = "(";
  for (std::size_t i = 0; i < u.dim(); ++i) {
    if (i) out += ',';
    out += f.to_string(u.coords[i]);
  }
  return out + ")";
}

}  // namespace gf
}  // namespace rightangle
