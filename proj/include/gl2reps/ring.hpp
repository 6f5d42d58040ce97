#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gl2reps {

using Complex = std::complex<double>;

/// Comparison tolerance for every floating character value in the library.
inline constexpr double kTolerance = 1e-6;

/// exp(2*pi*i*k/n), with k reduced mod n before the angle is formed.
Complex root_of_unity(long long k, long long n);

enum class Flavor { padic, laurent };

std::string to_string(Flavor f);
Flavor parse_flavor(std::string_view s);

/// O_r = Z/p^r (padic) or F_p[t]/t^r (laurent).
struct RingSpec {
  Flavor flavor = Flavor::padic;
  int p = 2;
  int r = 1;

  RingSpec at_level(int level) const { return RingSpec{flavor, p, level}; }
  friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

std::string to_string(const RingSpec& spec);
bool is_prime(long long n);

/// Canonical residue code in [0, p^r).
///
/// padic: the integer value. laurent: sum of a_i p^i for the polynomial
/// sum of a_i t^i. Under both encodings reduction to O_k is "mod p^k",
/// the valuation is the p-adic valuation of the code, and multiplication by
/// the uniformizer is multiplication of the code by p. Only addition and
/// multiplication differ (carry vs. no carry).
using Residue = std::uint32_t;

class Ring {
 public:
  explicit Ring(RingSpec spec);

  const RingSpec& spec() const noexcept { return spec_; }
  int p() const noexcept { return spec_.p; }
  int level() const noexcept { return spec_.r; }
  Residue size() const noexcept { return size_; }

  Residue add(Residue a, Residue b) const;
  Residue neg(Residue a) const;
  Residue sub(Residue a, Residue b) const { return add(a, neg(b)); }
  Residue mul(Residue a, Residue b) const;
  Residue pow(Residue a, std::uint64_t e) const;

  bool is_unit(Residue a) const noexcept { return a % static_cast<Residue>(spec_.p) != 0; }
  /// Throws std::domain_error("non-unit") on elements of the maximal ideal.
  Residue inv(Residue a) const;
  /// Largest i with a in (uniformizer^i); valuation(0) == r.
  int valuation(Residue a) const noexcept;
  /// uniformizer^i, zero once i >= r.
  Residue uniformizer_power(int i) const noexcept;
  /// Image of the integer n under Z -> O_r.
  Residue from_int(long long n) const;
  /// Image in O_level, level <= r.
  Residue reduce(Residue a, int level) const;
  /// Coefficient of t^i (laurent) or i-th base-p digit (padic).
  int digit(Residue a, int i) const noexcept;

  /// The additive character psi of conductor p^r as psi(x) = exp(2 pi i e / p^r).
  Residue additive_char_exponent(Residue a) const noexcept;
  Complex additive_char(Residue a) const;

  std::size_t unit_count() const noexcept { return size_ - size_ / static_cast<Residue>(spec_.p); }
  std::vector<Residue> units() const;

  /// "5" for padic, "1+t^2" style for laurent.
  std::string format(Residue a) const;
  Residue parse(std::string_view s) const;

 private:
  Residue laurent_mul(Residue a, Residue b) const;

  RingSpec spec_;
  Residue size_ = 1;
  std::vector<Residue> pow_p_;  // p^0 .. p^r
  std::shared_ptr<const std::vector<std::uint16_t>> mul_table_;  // laurent only, small rings
};

/// All linear characters of a finite abelian group given by an operation on
/// element ids 0..n-1. Values are stored exactly as exponents k of
/// exp(2 pi i k / E), E the group exponent.
class AbelianCharTable {
 public:
  using Op = std::function<std::size_t(std::size_t, std::size_t)>;

  /// Throws std::invalid_argument if the group is found to be non-abelian.
  static AbelianCharTable build(std::size_t n, std::size_t identity, const Op& op);

  std::size_t group_order() const noexcept { return n_; }
  std::size_t size() const noexcept { return exps_.size(); }
  long long exponent() const noexcept { return exponent_; }
  std::size_t identity() const noexcept { return identity_; }

  long long exponent_value(std::size_t chi, std::size_t a) const { return exps_[chi][a]; }
  Complex value(std::size_t chi, std::size_t a) const {
    return root_of_unity(exps_[chi][a], exponent_);
  }
  /// Order of the character chi in the dual group.
  long long order(std::size_t chi) const;

  /// Indices of the characters whose restriction to `subgroup` equals `values`.
  std::vector<std::size_t> extensions(std::span<const std::size_t> subgroup,
                                      std::span<const Complex> values,
                                      double tol = kTolerance) const;

 private:
  std::size_t n_ = 0;
  std::size_t identity_ = 0;
  long long exponent_ = 1;
  std::vector<std::vector<std::int32_t>> exps_;
};

/// Characters of the unit group of O_r, tabulated by residue.
struct UnitCharacters {
  std::vector<Residue> units;
  std::vector<std::int32_t> unit_index;  // residue -> index in units, -1 for non-units
  AbelianCharTable table;

  std::size_t count() const noexcept { return table.size(); }
  Complex value(std::size_t chi, Residue u) const {
    return table.value(chi, static_cast<std::size_t>(unit_index[u]));
  }
};

UnitCharacters unit_characters(const Ring& ring);

}  // namespace gl2reps
