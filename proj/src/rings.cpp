#include "stiefel/rings.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace stiefel {
namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1U;
  }
  return r;
}

// Inverse of a modulo m, or 0 when gcd(a, m) != 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) return 0;
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t), "LP64 target expected");

std::uint64_t reduce_mpz(const mpz_class& v, std::uint64_t m) {
  return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m));
}

mpz_class to_mpz(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

long count_factor(mpz_class v, std::uint64_t p) {
  long count = 0;
  const mpz_class pp = to_mpz(p);
  while (mpz_divisible_p(v.get_mpz_t(), pp.get_mpz_t()) != 0) {
    v /= pp;
    ++count;
  }
  return count;
}

bool coprime_to(const mpz_class& v, std::uint64_t p) {
  return mpz_divisible_p(v.get_mpz_t(), to_mpz(p).get_mpz_t()) == 0;
}

void require_odd_prime(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) throw DomainError("ring prime must be an odd prime, got " + std::to_string(p));
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

RingDescriptor RingDescriptor::finite_field(std::uint64_t p) {
  require_odd_prime(p);
  if (p >= (std::uint64_t{1} << 62)) throw DomainError("field characteristic too large");
  return RingDescriptor(RingKind::FiniteField, p, 1, p);
}

RingDescriptor RingDescriptor::rationals() { return RingDescriptor(RingKind::Rationals, 0, 0, 0); }

RingDescriptor RingDescriptor::localized(std::uint64_t p) {
  require_odd_prime(p);
  return RingDescriptor(RingKind::LocalizedAtP, p, 0, 0);
}

RingDescriptor RingDescriptor::padic(std::uint64_t p, unsigned precision) {
  require_odd_prime(p);
  if (precision < 1) throw DomainError("p-adic precision must be at least 1");
  std::uint64_t m = 1;
  for (unsigned i = 0; i < precision; ++i) {
    if (m > (std::uint64_t{1} << 62) / p) throw DomainError("p^N must stay below 2^62");
    m *= p;
  }
  return RingDescriptor(RingKind::PadicTruncated, p, precision, m);
}

RingDescriptor RingDescriptor::integers() { return RingDescriptor(RingKind::Integers, 0, 0, 0); }

RingDescriptor RingDescriptor::residue_field() const {
  if (!is_local()) throw DomainError("ring " + name() + " has no residue field");
  return finite_field(p_);
}

std::string RingDescriptor::name() const {
  switch (kind_) {
    case RingKind::FiniteField: return "F" + std::to_string(p_);
    case RingKind::Rationals: return "Q";
    case RingKind::LocalizedAtP: return "Z(" + std::to_string(p_) + ")";
    case RingKind::PadicTruncated: return "Z" + std::to_string(p_) + "^" + std::to_string(precision_);
    case RingKind::Integers: return "Z";
  }
  return "?";
}

RingDescriptor RingDescriptor::parse(const std::string& text) {
  auto num = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw DomainError("cannot parse ring '" + text + "'");
    return std::stoull(s);
  };
  if (text == "Q") return rationals();
  if (text == "Z") return integers();
  if (text.rfind("F:", 0) == 0) return finite_field(num(text.substr(2)));
  if (text.rfind("Zloc:", 0) == 0) return localized(num(text.substr(5)));
  if (text.rfind("Zp:", 0) == 0) {
    const auto colon = text.find(':', 3);
    if (colon == std::string::npos) throw DomainError("cannot parse ring '" + text + "'");
    return padic(num(text.substr(3, colon - 3)), static_cast<unsigned>(num(text.substr(colon + 1))));
  }
  if (text.size() > 1 && text[0] == 'F') return finite_field(num(text.substr(1)));
  if (text.size() > 3 && text.rfind("Z(", 0) == 0 && text.back() == ')')
    return localized(num(text.substr(2, text.size() - 3)));
  if (text.size() > 1 && text[0] == 'Z') {
    const auto caret = text.find('^');
    if (caret != std::string::npos)
      return padic(num(text.substr(1, caret - 1)), static_cast<unsigned>(num(text.substr(caret + 1))));
  }
  throw DomainError("cannot parse ring '" + text + "'");
}

// ---------------------------------------------------------------------------

Scalar::Scalar(const RingDescriptor& ring, long value) : ring_(ring), value_(std::uint64_t{0}) {
  if (ring.is_finite()) {
    const auto m = static_cast<__int128>(ring.modulus());
    __int128 r = static_cast<__int128>(value) % m;
    if (r < 0) r += m;
    value_ = static_cast<std::uint64_t>(r);
  } else {
    value_ = mpq_class(value);
  }
}

Scalar::Scalar(const RingDescriptor& ring, const mpz_class& value) : ring_(ring), value_(std::uint64_t{0}) {
  if (ring.is_finite()) {
    value_ = reduce_mpz(value, ring.modulus());
  } else {
    value_ = mpq_class(value);
  }
}

Scalar Scalar::from_rational(const RingDescriptor& ring, const mpq_class& value) {
  mpq_class v = value;
  v.canonicalize();
  const mpz_class& den = v.get_den();
  switch (ring.kind()) {
    case RingKind::Rationals:
      return Scalar(ring, std::variant<std::uint64_t, mpq_class>(v));
    case RingKind::Integers:
      if (den != 1) throw DomainError("rational " + v.get_str() + " is not an integer");
      return Scalar(ring, std::variant<std::uint64_t, mpq_class>(v));
    case RingKind::LocalizedAtP:
      if (!coprime_to(den, ring.prime()))
        throw DomainError("rational " + v.get_str() + " does not lie in " + ring.name());
      return Scalar(ring, std::variant<std::uint64_t, mpq_class>(v));
    case RingKind::FiniteField:
    case RingKind::PadicTruncated: {
      const std::uint64_t m = ring.modulus();
      const std::uint64_t d = reduce_mpz(den, m);
      const std::uint64_t dinv = invmod(d, m);
      if (dinv == 0) throw DomainError("rational " + v.get_str() + " does not lie in " + ring.name());
      return Scalar(ring, std::variant<std::uint64_t, mpq_class>(mulmod(reduce_mpz(v.get_num(), m), dinv, m)));
    }
  }
  throw DomainError("unknown ring");
}

void Scalar::check_same_ring(const Scalar& other) const {
  if (!(ring_ == other.ring_))
    throw DomainError("ring mismatch: " + ring_.name() + " vs " + other.ring_.name());
}

bool Scalar::is_zero() const {
  if (ring_.is_finite()) return std::get<std::uint64_t>(value_) == 0;
  return sgn(std::get<mpq_class>(value_)) == 0;
}

bool Scalar::is_one() const {
  if (ring_.is_finite()) return std::get<std::uint64_t>(value_) == 1 % ring_.modulus();
  return std::get<mpq_class>(value_) == 1;
}

bool Scalar::is_unit() const {
  switch (ring_.kind()) {
    case RingKind::FiniteField:
    case RingKind::Rationals:
      return !is_zero();
    case RingKind::PadicTruncated:
      return std::get<std::uint64_t>(value_) % ring_.prime() != 0;
    case RingKind::LocalizedAtP: {
      const auto& q = std::get<mpq_class>(value_);
      return sgn(q) != 0 && coprime_to(q.get_num(), ring_.prime());
    }
    case RingKind::Integers: {
      const auto& q = std::get<mpq_class>(value_);
      return q == 1 || q == -1;
    }
  }
  return false;
}

mpq_class Scalar::to_rational() const {
  if (ring_.is_finite()) return mpq_class(to_mpz(std::get<std::uint64_t>(value_)));
  return std::get<mpq_class>(value_);
}

std::uint64_t Scalar::residue_value() const {
  if (!ring_.is_finite()) throw DomainError("residue_value needs a finite ring, got " + ring_.name());
  return std::get<std::uint64_t>(value_);
}

long long Scalar::centered_value() const {
  const std::uint64_t v = residue_value();
  const std::uint64_t m = ring_.modulus();
  if (v > m / 2) return -static_cast<long long>(m - v);
  return static_cast<long long>(v);
}

Scalar Scalar::operator-() const {
  if (ring_.is_finite()) {
    const std::uint64_t v = std::get<std::uint64_t>(value_);
    return Scalar(ring_, std::variant<std::uint64_t, mpq_class>(v == 0 ? 0 : ring_.modulus() - v));
  }
  return Scalar(ring_, std::variant<std::uint64_t, mpq_class>(mpq_class(-std::get<mpq_class>(value_))));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  a.check_same_ring(b);
  if (a.ring_.is_finite()) {
    const std::uint64_t m = a.ring_.modulus();
    std::uint64_t s = std::get<std::uint64_t>(a.value_) + std::get<std::uint64_t>(b.value_);
    if (s >= m) s -= m;
    return Scalar(a.ring_, std::variant<std::uint64_t, mpq_class>(s));
  }
  return Scalar(a.ring_, std::variant<std::uint64_t, mpq_class>(
                             mpq_class(std::get<mpq_class>(a.value_) + std::get<mpq_class>(b.value_))));
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  a.check_same_ring(b);
  if (a.ring_.is_finite()) {
    return Scalar(a.ring_, std::variant<std::uint64_t, mpq_class>(mulmod(
                               std::get<std::uint64_t>(a.value_), std::get<std::uint64_t>(b.value_), a.ring_.modulus())));
  }
  return Scalar(a.ring_, std::variant<std::uint64_t, mpq_class>(
                             mpq_class(std::get<mpq_class>(a.value_) * std::get<mpq_class>(b.value_))));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!(a.ring_ == b.ring_)) return false;
  return a.value_ == b.value_;
}

Scalar Scalar::inverse() const {
  if (!is_unit()) throw DomainError(to_string() + " is not a unit in " + ring_.name());
  if (ring_.is_finite()) {
    return Scalar(ring_, std::variant<std::uint64_t, mpq_class>(invmod(std::get<std::uint64_t>(value_), ring_.modulus())));
  }
  return Scalar(ring_, std::variant<std::uint64_t, mpq_class>(mpq_class(1 / std::get<mpq_class>(value_))));
}

std::optional<Scalar> Scalar::divide(const Scalar& divisor) const {
  check_same_ring(divisor);
  if (divisor.is_zero()) return std::nullopt;
  switch (ring_.kind()) {
    case RingKind::FiniteField:
    case RingKind::Rationals:
      return *this * divisor.inverse();
    case RingKind::LocalizedAtP:
    case RingKind::Integers: {
      mpq_class q = std::get<mpq_class>(value_) / std::get<mpq_class>(divisor.value_);
      q.canonicalize();
      if (ring_.kind() == RingKind::Integers && q.get_den() != 1) return std::nullopt;
      if (ring_.kind() == RingKind::LocalizedAtP && !coprime_to(q.get_den(), ring_.prime())) return std::nullopt;
      return Scalar(ring_, std::variant<std::uint64_t, mpq_class>(q));
    }
    case RingKind::PadicTruncated: {
      const std::uint64_t p = ring_.prime();
      std::uint64_t b = std::get<std::uint64_t>(divisor.value_);
      std::uint64_t a = std::get<std::uint64_t>(value_);
      std::uint64_t pv = 1;
      while (b % p == 0) {
        if (a % p != 0) return std::nullopt;
        a /= p;
        b /= p;
        pv *= p;
      }
      const std::uint64_t m = ring_.modulus() / pv;
      return Scalar(ring_, std::variant<std::uint64_t, mpq_class>(mulmod(a % m, invmod(b % m, m), m)));
    }
  }
  return std::nullopt;
}

std::string Scalar::to_string() const {
  if (ring_.is_finite()) return std::to_string(std::get<std::uint64_t>(value_));
  return std::get<mpq_class>(value_).get_str();
}

// ---------------------------------------------------------------------------

long Valuation::value() const {
  if (!finite_) throw DomainError("valuation is infinite");
  return value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (!a.finite_ || !b.finite_) {
    if (a.finite_ == b.finite_) return std::strong_ordering::equal;
    return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.value_ <=> b.value_;
}

Valuation valuation(const Scalar& x, std::uint64_t p) {
  const RingDescriptor& ring = x.ring();
  switch (ring.kind()) {
    case RingKind::FiniteField:
      throw DomainError("valuation is not defined on " + ring.name());
    case RingKind::LocalizedAtP:
    case RingKind::PadicTruncated:
      if (p != ring.prime())
        throw DomainError("prime " + std::to_string(p) + " is not attached to " + ring.name());
      break;
    case RingKind::Rationals:
    case RingKind::Integers:
      if (!is_prime(p)) throw DomainError("valuation needs a prime, got " + std::to_string(p));
      break;
  }
  if (x.is_zero()) return Valuation::infinite();
  if (ring.is_finite()) {
    std::uint64_t v = x.residue_value();
    long count = 0;
    while (v % p == 0) {
      v /= p;
      ++count;
    }
    return Valuation(count);
  }
  const mpq_class q = x.to_rational();
  return Valuation(count_factor(q.get_num(), p) - count_factor(q.get_den(), p));
}

Valuation valuation(const Scalar& x) {
  if (x.ring().prime() == 0) throw DomainError("ring " + x.ring().name() + " has no distinguished prime");
  return valuation(x, x.ring().prime());
}

Scalar residue(const Scalar& x) {
  const RingDescriptor& ring = x.ring();
  if (ring.kind() == RingKind::FiniteField) return x;
  if (ring.kind() != RingKind::LocalizedAtP && ring.kind() != RingKind::PadicTruncated)
    throw DomainError("residue needs Z_(p) or Z/p^N, got " + ring.name());
  const RingDescriptor field = ring.residue_field();
  if (ring.is_finite()) return Scalar(field, static_cast<long>(x.residue_value() % ring.prime()));
  return Scalar::from_rational(field, x.to_rational());
}

std::optional<Scalar> is_square(const Scalar& a) {
  const RingDescriptor& ring = a.ring();
  if (ring.kind() != RingKind::FiniteField) throw DomainError("is_square needs a finite field, got " + ring.name());
  const std::uint64_t p = ring.prime();
  const std::uint64_t v = a.residue_value();
  if (v == 0) return Scalar::zero(ring);
  if (powmod(v, (p - 1) / 2, p) != 1) return std::nullopt;
  // Tonelli-Shanks.
  std::uint64_t q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t r = powmod(v, (q + 1) / 2, p);
  std::uint64_t t = powmod(v, q, p);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    std::uint64_t t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    std::uint64_t b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    r = mulmod(r, b, p);
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    m = i;
  }
  r = std::min(r, p - r);
  return Scalar(ring, static_cast<long>(r));
}

namespace {

constexpr std::uint64_t kMaxSumOfSquaresModulus = std::uint64_t{1} << 16;

std::optional<std::vector<Scalar>> sum_of_squares_finite(const Scalar& a, unsigned k) {
  const RingDescriptor& ring = a.ring();
  const std::uint64_t m = ring.modulus();
  if (m > kMaxSumOfSquaresModulus) throw BudgetError("sum_of_squares: modulus " + std::to_string(m) + " too large");
  std::vector<char> is_sq(m, 0);
  for (std::uint64_t x = 0; x < m; ++x) is_sq[mulmod(x, x, m)] = 1;
  std::vector<std::uint64_t> squares;
  for (std::uint64_t v = 0; v < m; ++v)
    if (is_sq[v]) squares.push_back(v);
  // reach[j][v]: v is a sum of j squares.
  std::vector<std::vector<char>> reach(k + 1, std::vector<char>(m, 0));
  reach[0][0] = 1;
  for (unsigned j = 1; j <= k; ++j)
    for (std::uint64_t v = 0; v < m; ++v)
      if (reach[j - 1][v])
        for (std::uint64_t s : squares) reach[j][(v + s) % m] = 1;
  std::uint64_t target = a.residue_value();
  if (!reach[k][target]) return std::nullopt;
  std::vector<Scalar> out;
  for (unsigned j = k; j >= 1; --j) {
    for (std::uint64_t x = 0; x < m; ++x) {
      const std::uint64_t rest = (target + m - mulmod(x, x, m)) % m;
      if (reach[j - 1][rest]) {
        out.emplace_back(ring, static_cast<long>(x));
        target = rest;
        break;
      }
    }
  }
  return out;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& v) {
  if (sgn(v) < 0) return std::nullopt;
  if (mpz_perfect_square_p(v.get_num_mpz_t()) == 0 || mpz_perfect_square_p(v.get_den_mpz_t()) == 0) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), v.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), v.get_den_mpz_t());
  return mpq_class(n, d);
}

struct HeightSearch {
  const RingDescriptor& ring;
  unsigned long bound;
  std::vector<mpq_class> candidates;  // sorted ascending
  std::vector<mpq_class> chosen;

  bool admissible(const mpq_class& x) const {
    if (abs(x.get_num()) > bound || x.get_den() > bound) return false;
    if (ring.kind() == RingKind::Integers) return x.get_den() == 1;
    if (ring.kind() == RingKind::LocalizedAtP) return coprime_to(x.get_den(), ring.prime());
    return true;
  }

  bool search(std::size_t start, unsigned k, const mpq_class& rest) {
    if (k == 1) {
      auto r = rational_sqrt(rest);
      if (!r || !admissible(*r)) return false;
      if (!chosen.empty() && *r < chosen.back()) return false;
      chosen.push_back(*r);
      return true;
    }
    for (std::size_t i = start; i < candidates.size(); ++i) {
      const mpq_class sq = candidates[i] * candidates[i];
      if (sq * k > rest) break;
      chosen.push_back(candidates[i]);
      if (search(i, k - 1, rest - sq)) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<Scalar>> sum_of_squares(const Scalar& a, unsigned k, unsigned long height_bound) {
  const RingDescriptor& ring = a.ring();
  if (ring.is_finite()) return sum_of_squares_finite(a, k);
  const mpq_class target = a.to_rational();
  if (k == 0) {
    if (sgn(target) == 0) return std::vector<Scalar>{};
    return std::nullopt;
  }
  if (sgn(target) < 0) return std::nullopt;
  HeightSearch hs{ring, height_bound, {}, {}};
  for (unsigned long den = 1; den <= height_bound; ++den) {
    if (ring.kind() == RingKind::Integers && den > 1) break;
    for (unsigned long num = 0; num <= height_bound; ++num) {
      if (num == 0 && den != 1) continue;
      mpq_class q(num, den);
      q.canonicalize();
      if (q.get_den() != den) continue;
      if (!hs.admissible(q)) continue;
      hs.candidates.push_back(q);
    }
  }
  std::sort(hs.candidates.begin(), hs.candidates.end());
  if (!hs.search(0, k, target)) return std::nullopt;
  std::vector<Scalar> out;
  out.reserve(k);
  for (const auto& q : hs.chosen) out.push_back(Scalar::from_rational(ring, q));
  return out;
}

Scalar hensel_root(std::span<const Scalar> coeffs, const Scalar& r0) {
  if (coeffs.empty()) throw DomainError("hensel_root: empty polynomial");
  const RingDescriptor& ring = coeffs[0].ring();
  if (ring.kind() != RingKind::PadicTruncated) throw DomainError("hensel_root needs coefficients over Z/p^N");
  for (const auto& c : coeffs)
    if (!(c.ring() == ring)) throw DomainError("hensel_root: coefficients over different rings");
  const std::uint64_t m = ring.modulus();
  const std::uint64_t p = ring.prime();
  std::uint64_t r;
  if (r0.ring().is_finite() && r0.ring().prime() == p) {
    r = r0.residue_value() % m;
  } else if (r0.ring().kind() == RingKind::Integers) {
    r = Scalar(ring, r0.to_rational().get_num()).residue_value();
  } else {
    throw DomainError("hensel_root: starting value must lie in F_p, Z/p^N or Z");
  }
  auto eval = [&](std::uint64_t x, bool derivative) {
    std::uint64_t acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (derivative && i == 0) break;
      std::uint64_t c = coeffs[i].residue_value();
      if (derivative) c = mulmod(c, i % m, m);
      acc = (mulmod(acc, x, m) + c) % m;
    }
    return acc;
  };
  if (eval(r, false) % p != 0) throw DomainError("hensel_root: starting value is not a root mod p");
  if (eval(r, true) % p == 0) throw DomainError("hensel_root: root is not simple mod p");
  for (int iter = 0; iter < 128; ++iter) {
    const std::uint64_t fr = eval(r, false);
    if (fr == 0) return Scalar(ring, to_mpz(r));
    const std::uint64_t step = mulmod(fr, invmod(eval(r, true), m), m);
    r = (r + m - step) % m;
  }
  throw DomainError("hensel_root: Newton iteration did not converge");
}

}  // namespace stiefel
