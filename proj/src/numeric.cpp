#include "ztr/numeric.hpp"

namespace ztr {

Rational pow_q(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (base == 0) {
    if (e < 0) throw domain_error("pow_q: 0 to a negative power");
    return Rational(0);
  }
  Rational out;
  unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num().get_mpz_t(), a);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den().get_mpz_t(), a);
  if (e < 0) out = 1 / out;
  out.canonicalize();
  return out;
}

Integer pow_z(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

long double to_ld(const Integer& z) {
  if (z == 0) return 0.0L;
  size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  if (bits <= 62) return static_cast<long double>(z.get_si());
  // Keep the top 62 bits and rescale; accurate to ~2^-62 relative.
  long shift = static_cast<long>(bits) - 62;
  Integer top = z >> shift;
  return ldexpl(static_cast<long double>(top.get_si()), static_cast<int>(shift));
}

long double to_ld(const Rational& q) {
  if (q == 0) return 0.0L;
  const Integer& num = q.get_num();
  const Integer& den = q.get_den();
  long nb = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  long db = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // Scale so the integer quotient carries ~80 significant bits.
  long k = db - nb + 80;
  Integer scaled;
  if (k >= 0) {
    scaled = num << k;
  } else {
    scaled = num >> (-k);
  }
  Integer quot = scaled / den;
  return ldexpl(to_ld(quot), static_cast<int>(-k));
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw parse_error("empty rational literal");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw parse_error("bad character in rational literal: " + s);
  }
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw parse_error("unparsable rational literal: " + s);
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed) {
  uint64_t x = seed;
  for (auto& w : s_) w = splitmix64(x);
  // xoshiro must not start from the all-zero state.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

uint64_t Rng::next() {
  uint64_t result = rotl(s_[1] * 5, 7) * 9;
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

uint64_t Rng::below(uint64_t n) {
  // Rejection to kill modulo bias; deterministic given the stream.
  uint64_t limit = n * (UINT64_MAX / n);
  uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

double Rng::real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

long long Rng::range(long long lo, long long hi) {
  return lo + static_cast<long long>(below(static_cast<uint64_t>(hi - lo + 1)));
}

double Rng::signed_log_uniform(double lo, double hi) {
  double mag = lo * std::exp(real() * std::log(hi / lo));
  return (next() & 1) ? mag : -mag;
}

Rng Rng::substream(uint64_t label) const {
  uint64_t x = seed_ ^ (0x5851f42d4c957f2dULL * (label + 1));
  return Rng(splitmix64(x));
}

}  // namespace ztr
