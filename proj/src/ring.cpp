#include "gl2reps/ring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace gl2reps {

Complex root_of_unity(long long k, long long n) {
  if (n <= 0) throw std::invalid_argument("root_of_unity: order must be positive");
  k %= n;
  if (k < 0) k += n;
  if (k == 0) return {1.0, 0.0};
  // Exact values at the quarter turns keep trivial characters exactly real.
  if (4 * k == n) return {0.0, 1.0};
  if (2 * k == n) return {-1.0, 0.0};
  if (4 * k == 3 * n) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::string to_string(Flavor f) { return f == Flavor::padic ? "padic" : "laurent"; }

Flavor parse_flavor(std::string_view s) {
  if (s == "padic") return Flavor::padic;
  if (s == "laurent") return Flavor::laurent;
  throw std::invalid_argument("unknown flavor '" + std::string(s) + "'");
}

std::string to_string(const RingSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.flavor) << "(p=" << spec.p << ",r=" << spec.r << ")";
  return os.str();
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring::Ring(RingSpec spec) : spec_(spec) {
  if (!is_prime(spec.p)) throw std::invalid_argument("ring: p = " + std::to_string(spec.p) + " is not prime");
  if (spec.r < 1) throw std::invalid_argument("ring: level r must be >= 1");
  std::uint64_t size = 1;
  pow_p_.push_back(1);
  for (int i = 0; i < spec.r; ++i) {
    size *= static_cast<std::uint64_t>(spec.p);
    if (size > (1u << 30)) throw std::invalid_argument("ring: p^r too large");
    pow_p_.push_back(static_cast<Residue>(size));
  }
  size_ = static_cast<Residue>(size);

  if (spec.flavor == Flavor::laurent && size_ <= 1024) {
    auto table = std::make_shared<std::vector<std::uint16_t>>(static_cast<std::size_t>(size_) * size_);
    for (Residue a = 0; a < size_; ++a)
      for (Residue b = 0; b < size_; ++b)
        (*table)[static_cast<std::size_t>(a) * size_ + b] = static_cast<std::uint16_t>(laurent_mul(a, b));
    mul_table_ = std::move(table);
  }
}

int Ring::digit(Residue a, int i) const noexcept {
  return static_cast<int>((a / pow_p_[i]) % static_cast<Residue>(spec_.p));
}

Residue Ring::add(Residue a, Residue b) const {
  if (spec_.flavor == Flavor::padic) {
    Residue s = a + b;
    return s >= size_ ? s - size_ : s;
  }
  Residue out = 0;
  const auto p = static_cast<Residue>(spec_.p);
  for (int i = 0; i < spec_.r; ++i) {
    const Residue da = a % p, db = b % p;
    a /= p;
    b /= p;
    out += ((da + db) % p) * pow_p_[i];
  }
  return out;
}

Residue Ring::neg(Residue a) const {
  if (a == 0) return 0;
  if (spec_.flavor == Flavor::padic) return size_ - a;
  Residue out = 0;
  const auto p = static_cast<Residue>(spec_.p);
  for (int i = 0; i < spec_.r; ++i) {
    const Residue da = a % p;
    a /= p;
    out += ((p - da) % p) * pow_p_[i];
  }
  return out;
}

Residue Ring::laurent_mul(Residue a, Residue b) const {
  const int r = spec_.r;
  const auto p = static_cast<Residue>(spec_.p);
  std::vector<Residue> da(r), db(r), prod(r, 0);
  for (int i = 0; i < r; ++i) {
    da[i] = a % p;
    a /= p;
    db[i] = b % p;
    b /= p;
  }
  for (int i = 0; i < r; ++i) {
    if (da[i] == 0) continue;
    for (int j = 0; i + j < r; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  }
  Residue out = 0;
  for (int i = 0; i < r; ++i) out += prod[i] * pow_p_[i];
  return out;
}

Residue Ring::mul(Residue a, Residue b) const {
  if (spec_.flavor == Flavor::padic)
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % size_);
  if (mul_table_) return (*mul_table_)[static_cast<std::size_t>(a) * size_ + b];
  return laurent_mul(a, b);
}

Residue Ring::pow(Residue a, std::uint64_t e) const {
  Residue result = from_int(1);
  while (e) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

Residue Ring::inv(Residue a) const {
  if (!is_unit(a)) throw std::domain_error("non-unit");
  // Lagrange: the unit group has order p^(r-1)(p-1).
  return pow(a, unit_count() - 1);
}

int Ring::valuation(Residue a) const noexcept {
  if (a == 0) return spec_.r;
  int v = 0;
  const auto p = static_cast<Residue>(spec_.p);
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

Residue Ring::uniformizer_power(int i) const noexcept {
  if (i >= spec_.r) return 0;
  return pow_p_[i];
}

Residue Ring::from_int(long long n) const {
  const long long m = spec_.flavor == Flavor::padic ? size_ : spec_.p;
  long long v = n % m;
  if (v < 0) v += m;
  return static_cast<Residue>(v);
}

Residue Ring::reduce(Residue a, int level) const {
  if (level < 0 || level > spec_.r) throw std::invalid_argument("reduce: bad level");
  return a % pow_p_[level];
}

Residue Ring::additive_char_exponent(Residue a) const noexcept {
  if (spec_.flavor == Flavor::padic) return a;
  return static_cast<Residue>(digit(a, spec_.r - 1)) * pow_p_[spec_.r - 1];
}

Complex Ring::additive_char(Residue a) const {
  return root_of_unity(additive_char_exponent(a), size_);
}

std::vector<Residue> Ring::units() const {
  std::vector<Residue> out;
  out.reserve(unit_count());
  for (Residue a = 0; a < size_; ++a)
    if (is_unit(a)) out.push_back(a);
  return out;
}

std::string Ring::format(Residue a) const {
  if (spec_.flavor == Flavor::padic) return std::to_string(a);
  if (a == 0) return "0";
  std::string out;
  for (int i = 0; i < spec_.r; ++i) {
    const int c = digit(a, i);
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c) + "*";
    out += "t";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

long long parse_int(std::string_view s, std::string_view whole) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("cannot parse ring element '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Residue Ring::parse(std::string_view s) const {
  if (spec_.flavor == Flavor::padic) {
    const long long v = parse_int(s, s);
    if (v < 0 || v >= size_) throw std::invalid_argument("ring element out of range: " + std::string(s));
    return static_cast<Residue>(v);
  }
  std::vector<long long> coeff(spec_.r, 0);
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('+', start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view term = s.substr(start, end - start);
    if (term.empty()) throw std::invalid_argument("cannot parse ring element '" + std::string(s) + "'");
    const std::size_t t = term.find('t');
    long long c = 1;
    int deg = 0;
    if (t == std::string_view::npos) {
      c = parse_int(term, s);
    } else {
      std::string_view head = term.substr(0, t);
      if (!head.empty() && head.back() == '*') head.remove_suffix(1);
      if (!head.empty()) c = parse_int(head, s);
      std::string_view tail = term.substr(t + 1);
      deg = 1;
      if (!tail.empty()) {
        if (tail.front() != '^') throw std::invalid_argument("cannot parse ring element '" + std::string(s) + "'");
        deg = static_cast<int>(parse_int(tail.substr(1), s));
      }
    }
    if (deg < 0 || deg >= spec_.r)
      throw std::invalid_argument("degree out of range in '" + std::string(s) + "'");
    coeff[deg] = ((coeff[deg] + c) % spec_.p + spec_.p) % spec_.p;
    start = end + 1;
    if (end == s.size()) break;
  }
  Residue out = 0;
  for (int i = 0; i < spec_.r; ++i) out += static_cast<Residue>(coeff[i]) * pow_p_[i];
  return out;
}

// ---------------------------------------------------------------------------

long long AbelianCharTable::order(std::size_t chi) const {
  long long g = exponent_;
  for (auto e : exps_[chi]) g = std::gcd(g, static_cast<long long>(e));
  return exponent_ / g;
}

AbelianCharTable AbelianCharTable::build(std::size_t n, std::size_t identity, const Op& op) {
  if (n == 0 || identity >= n) throw std::invalid_argument("abelian_chars: empty group");
  AbelianCharTable t;
  t.n_ = n;
  t.identity_ = identity;

  std::vector<long long> ord(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    long long k = 1;
    std::size_t x = a;
    while (x != identity) {
      x = op(x, a);
      if (++k > static_cast<long long>(n) + 1) throw std::invalid_argument("abelian_chars: operation is not a group law");
    }
    ord[a] = k;
    t.exponent_ = std::lcm(t.exponent_, k);
  }
  const long long E = t.exponent_;

  std::vector<std::size_t> by_order(n);
  std::iota(by_order.begin(), by_order.end(), 0);
  std::stable_sort(by_order.begin(), by_order.end(), [&](auto a, auto b) { return ord[a] > ord[b]; });

  // Adjoin elements of maximal remaining order one at a time; B is the
  // subgroup generated so far and every character of B is extended in k ways.
  std::vector<char> in_b(n, 0);
  std::vector<std::size_t> b_list{identity};
  in_b[identity] = 1;
  std::vector<std::vector<std::int32_t>> chars{std::vector<std::int32_t>(n, 0)};
  std::vector<std::size_t> gens;

  for (std::size_t g : by_order) {
    if (in_b[g]) continue;
    for (std::size_t h : gens)
      if (op(g, h) != op(h, g)) throw std::invalid_argument("abelian_chars: non-abelian input");
    gens.push_back(g);

    std::vector<std::size_t> gpow{identity};
    std::size_t x = g;
    while (!in_b[x]) {
      gpow.push_back(x);
      x = op(x, g);
    }
    const auto k = static_cast<long long>(gpow.size());
    const std::size_t gk = x;

    std::vector<std::size_t> new_list;
    new_list.reserve(b_list.size() * gpow.size());
    std::vector<std::pair<std::size_t, long long>> decomposition(n, {0, -1});
    for (std::size_t b : b_list) decomposition[b] = {b, 0};
    for (long long j = 1; j < k; ++j)
      for (std::size_t b : b_list) {
        const std::size_t e = op(b, gpow[j]);
        if (in_b[e]) throw std::invalid_argument("abelian_chars: operation is not a group law");
        in_b[e] = 1;
        decomposition[e] = {b, j};
        new_list.push_back(e);
      }

    std::vector<std::vector<std::int32_t>> next;
    next.reserve(chars.size() * k);
    for (const auto& chi : chars) {
      const long long s = chi[gk];
      if (s % k != 0) throw std::logic_error("abelian_chars: inconsistent root extraction");
      for (long long i = 0; i < k; ++i) {
        const long long tval = (s / k + i * (E / k)) % E;
        auto ext = chi;
        for (std::size_t e : new_list) {
          const auto [b, j] = decomposition[e];
          ext[e] = static_cast<std::int32_t>((chi[b] + j * tval) % E);
        }
        next.push_back(std::move(ext));
      }
    }
    chars = std::move(next);
    b_list.insert(b_list.end(), new_list.begin(), new_list.end());
  }
  if (chars.size() != n) throw std::logic_error("abelian_chars: character count mismatch");
  t.exps_ = std::move(chars);
  return t;
}

std::vector<std::size_t> AbelianCharTable::extensions(std::span<const std::size_t> subgroup,
                                                      std::span<const Complex> values, double tol) const {
  if (subgroup.size() != values.size()) throw std::invalid_argument("extensions: size mismatch");
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < exps_.size(); ++c) {
    bool ok = true;
    for (std::size_t i = 0; i < subgroup.size() && ok; ++i) ok = std::abs(value(c, subgroup[i]) - values[i]) < tol;
    if (ok) out.push_back(c);
  }
  return out;
}

UnitCharacters unit_characters(const Ring& ring) {
  UnitCharacters uc;
  uc.units = ring.units();
  uc.unit_index.assign(ring.size(), -1);
  for (std::size_t i = 0; i < uc.units.size(); ++i) uc.unit_index[uc.units[i]] = static_cast<std::int32_t>(i);
  std::size_t id = static_cast<std::size_t>(uc.unit_index[ring.from_int(1)]);
  uc.table = AbelianCharTable::build(uc.units.size(), id, [&](std::size_t a, std::size_t b) {
    return static_cast<std::size_t>(uc.unit_index[ring.mul(uc.units[a], uc.units[b])]);
  });
  return uc;
}

}  // namespace gl2reps
