#include "ztr/laurent.hpp"

#include "ztr/vendor_json.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace ztr {

void ExactLaurent::prune() {
  for (auto it = c.begin(); it != c.end();) {
    if (it->second == 0)
      it = c.erase(it);
    else
      ++it;
  }
}

void ExactLaurent::set(int64_t n, const Integer& a) {
  if (a == 0)
    c.erase(n);
  else
    c[n] = a;
}

Integer ExactLaurent::coeff(int64_t n) const {
  auto it = c.find(n);
  return it == c.end() ? Integer(0) : it->second;
}

int64_t ExactLaurent::min_exp() const {
  if (c.empty()) throw domain_error("min_exp of zero series");
  return c.begin()->first;
}

int64_t ExactLaurent::max_exp() const {
  if (c.empty()) throw domain_error("max_exp of zero series");
  return c.rbegin()->first;
}

JetLaurent::JetLaurent(int64_t lead_, int64_t order_, CoeffMap m)
    : lead(lead_), order(order_), c(std::move(m)) {
  for (auto it = c.begin(); it != c.end();) {
    if (it->second == 0)
      it = c.erase(it);
    else
      ++it;
  }
  check();
}

JetLaurent JetLaurent::from_exact(const ExactLaurent& f) {
  JetLaurent j;
  j.exact = true;
  j.c = f.c;
  j.lead = f.is_zero() ? 0 : f.min_exp();
  j.order = f.is_zero() ? 0 : f.max_exp() + 1;
  return j;
}

Integer JetLaurent::coeff(int64_t n) const {
  auto it = c.find(n);
  return it == c.end() ? Integer(0) : it->second;
}

void JetLaurent::check() const {
  if (lead > order) throw domain_error("jet invariant: lead > order");
  if (!c.empty()) {
    if (c.begin()->first < lead || c.rbegin()->first >= order)
      throw domain_error("jet invariant: support outside [lead, order)");
  }
}

Rational weighted_norm(const ExactLaurent& f, const Radius& r) {
  Rational nu(0);
  for (const auto& [n, a] : f.c) nu += Rational(abs(a)) * pow_q(r.v, n);
  return nu;
}

namespace {
// Shared coefficient-wise combine for add/sub.
JetLaurent combine(const JetLaurent& f, const JetLaurent& g, int sign) {
  JetLaurent out;
  out.exact = f.exact && g.exact;
  CoeffMap m = f.c;
  for (const auto& [n, a] : g.c) {
    Integer v = (m.count(n) ? m[n] : Integer(0)) + (sign > 0 ? a : Integer(-a));
    if (v == 0)
      m.erase(n);
    else
      m[n] = v;
  }
  out.lead = std::min(f.lead, g.lead);
  if (out.exact) {
    out.order = std::max(f.order, g.order);
  } else {
    out.order = f.exact ? g.order : (g.exact ? f.order : std::min(f.order, g.order));
    m.erase(m.lower_bound(out.order), m.end());
  }
  if (out.order < out.lead) out.order = out.lead;
  out.c = std::move(m);
  return out;
}
}  // namespace

JetLaurent ring_add(const JetLaurent& f, const JetLaurent& g) { return combine(f, g, +1); }
JetLaurent ring_sub(const JetLaurent& f, const JetLaurent& g) { return combine(f, g, -1); }

JetLaurent ring_mul(const JetLaurent& f, const JetLaurent& g) {
  JetLaurent out;
  out.exact = f.exact && g.exact;
  out.lead = f.lead + g.lead;
  if (out.exact) {
    out.order = out.lead;  // grows with the support below
  } else {
    // Unknown tail of g enters at lead(f)+order(g), and vice versa.
    int64_t of = g.exact ? INT64_MAX : f.lead + g.order;
    int64_t og = f.exact ? INT64_MAX : g.lead + f.order;
    out.order = std::min(of, og);
  }
  CoeffMap m;
  for (const auto& [n, a] : f.c) {
    for (const auto& [k, b] : g.c) {
      int64_t e = n + k;
      if (!out.exact && e >= out.order) continue;
      Integer v = (m.count(e) ? m[e] : Integer(0)) + a * b;
      if (v == 0)
        m.erase(e);
      else
        m[e] = v;
    }
  }
  if (out.exact && !m.empty()) out.order = m.rbegin()->first + 1;
  if (out.order < out.lead) out.order = out.lead;
  out.c = std::move(m);
  return out;
}

JetLaurent shift(const JetLaurent& f, int64_t k) {
  JetLaurent out;
  out.exact = f.exact;
  out.lead = f.lead + k;
  out.order = f.order + k;
  for (const auto& [n, a] : f.c) out.c[n + k] = a;
  return out;
}

JetLaurent invert_unit(const JetLaurent& f, int64_t m) {
  if (f.c.empty()) throw not_a_unit("cannot invert the zero series");
  int64_t k = f.c.begin()->first;
  Integer u = f.c.begin()->second;
  if (u != 1 && u != -1) throw not_a_unit("lowest coefficient is not +-1");
  if (m <= 0) throw domain_error("invert_unit: order must be positive");
  // Normalize to s = T^-k f with s_0 = +-1, invert by long division, shift back.
  // When f itself is only a jet, the product f*g is 1 only to the precision f
  // carries; cap the usable order accordingly.
  int64_t usable = m;
  if (!f.exact) usable = std::min(usable, f.order - k);
  if (usable <= 0) throw domain_error("invert_unit: input carries no usable precision");
  std::vector<Integer> s(static_cast<size_t>(usable));
  for (const auto& [n, a] : f.c) {
    int64_t e = n - k;
    if (e < usable) s[static_cast<size_t>(e)] = a;
  }
  std::vector<Integer> b(static_cast<size_t>(usable));
  b[0] = u;  // u^2 == 1
  for (int64_t i = 1; i < usable; ++i) {
    Integer acc(0);
    for (int64_t j = 1; j <= i; ++j) acc += s[static_cast<size_t>(j)] * b[static_cast<size_t>(i - j)];
    b[static_cast<size_t>(i)] = -u * acc;
  }
  JetLaurent g;
  g.exact = false;
  g.lead = -k;
  g.order = usable - k;
  for (int64_t i = 0; i < usable; ++i)
    if (b[static_cast<size_t>(i)] != 0) g.c[i - k] = b[static_cast<size_t>(i)];
  return g;
}

size_t budget_cap() {
  if (const char* env = std::getenv("ZTR_BUDGET_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
  }
  return 10'000'000;
}

namespace {
void enumerate_rec(const Radius& r, const Rational& budget, int64_t n, int64_t m,
                   size_t cap, ExactLaurent& cur, std::vector<ExactLaurent>& out) {
  if (n > m) {
    if (out.size() >= cap) throw budget_exceeded("enumerate_ball exceeded the configured cap");
    out.push_back(cur);
    return;
  }
  Rational w = pow_q(r.v, n);
  // Largest |a| with |a| * w <= budget.
  Rational q = budget / w;
  Integer amax = q.get_num() / q.get_den();  // floor for nonnegative q
  for (Integer a = -amax; a <= amax; ++a) {
    Rational spent = Rational(abs(a)) * w;
    cur.set(n, a);
    enumerate_rec(r, budget - spent, n + 1, m, cap, cur, out);
  }
  cur.set(n, 0);
}
}  // namespace

std::vector<ExactLaurent> enumerate_ball(const Radius& r, const Rational& c,
                                         int64_t m, size_t cap) {
  if (c < 0) throw domain_error("enumerate_ball: negative radius");
  if (m < 0) throw domain_error("enumerate_ball: negative truncation order");
  std::vector<ExactLaurent> out;
  ExactLaurent cur;
  enumerate_rec(r, c, 0, m, cap, cur, out);
  return out;
}

ExactLaurent mod_p_lift(const std::map<int64_t, long>& digits, long p) {
  if (p < 2) throw domain_error("mod_p_lift: modulus must be >= 2");
  ExactLaurent out;
  for (const auto& [n, d] : digits) {
    if (d < 0 || d >= p) throw domain_error("mod_p_lift: digit out of [0, p)");
    out.set(n, Integer(d));
  }
  return out;
}

namespace {
std::string terms_to_text(const CoeffMap& c) {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, a] : c) {
    if (!first) os << " + ";
    os << a.get_str() << "*T^" << n;
    first = false;
  }
  return os.str();
}
}  // namespace

std::string to_text(const ExactLaurent& f) { return terms_to_text(f.c); }
std::string to_text(const JetLaurent& f) { return terms_to_text(f.c); }

ExactLaurent parse_series(const std::string& s) {
  ExactLaurent out;
  std::string t = s;
  // Strip whitespace; the canonical separator " + " then reads as "+".
  t.erase(std::remove_if(t.begin(), t.end(),
                         [](unsigned char ch) { return std::isspace(ch); }),
          t.end());
  if (t.empty()) throw parse_error("empty series literal");
  if (t == "0") return out;
  size_t pos = 0;
  while (pos < t.size()) {
    size_t next = t.find('+', pos == 0 ? 1 : pos + 1);
    // '+' inside a leading sign of the first term is impossible after the
    // canonical join; a '-' only appears as a coefficient sign.
    std::string term = t.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (pos > 0) {
      if (term.empty() || term[0] != '+') throw parse_error("missing + separator in series");
      term = term.substr(1);
    }
    size_t star = term.find("*T^");
    if (star == std::string::npos) throw parse_error("term missing *T^: " + term);
    std::string coeff = term.substr(0, star);
    std::string expo = term.substr(star + 3);
    if (coeff.empty() || expo.empty()) throw parse_error("malformed term: " + term);
    Integer a;
    int64_t n;
    try {
      a = Integer(coeff);
      size_t used = 0;
      n = std::stoll(expo, &used);
      if (used != expo.size()) throw parse_error("trailing junk in exponent: " + expo);
    } catch (const std::invalid_argument&) {
      throw parse_error("malformed term: " + term);
    }
    if (out.c.count(n)) throw parse_error("duplicate exponent in series");
    out.set(n, a);
    if (next == std::string::npos) break;
    pos = next;
  }
  return out;
}

namespace {
nlohmann::ordered_json terms_json(const CoeffMap& c) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [n, a] : c) arr.push_back({n, a.get_str()});
  return arr;
}
}  // namespace

std::string to_json(const JetLaurent& f) {
  nlohmann::ordered_json j;
  j["terms"] = terms_json(f.c);
  j["lead"] = f.lead;
  if (f.exact)
    j["order"] = nullptr;
  else
    j["order"] = f.order;
  return j.dump();
}

std::string to_json(const ExactLaurent& f) {
  return to_json(JetLaurent::from_exact(f));
}

JetLaurent jet_from_json(const std::string& s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("bad series JSON: ") + e.what());
  }
  if (!j.contains("terms")) throw parse_error("series JSON lacks terms");
  CoeffMap m;
  for (const auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 2) throw parse_error("series JSON term must be [n, coeff]");
    int64_t n = t[0].get<int64_t>();
    Integer a(t[1].get<std::string>());
    if (a != 0) m[n] = a;
  }
  JetLaurent out;
  out.c = std::move(m);
  if (j.contains("order") && !j["order"].is_null()) {
    out.exact = false;
    out.order = j["order"].get<int64_t>();
  } else {
    out.exact = true;
    out.order = out.c.empty() ? 0 : out.c.rbegin()->first + 1;
  }
  if (j.contains("lead"))
    out.lead = j["lead"].get<int64_t>();
  else
    out.lead = out.c.empty() ? 0 : out.c.begin()->first;
  out.check();
  return out;
}

}  // namespace ztr
