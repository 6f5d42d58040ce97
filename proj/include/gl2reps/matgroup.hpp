#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl2reps/ring.hpp"

namespace gl2reps {

/// Row-major 2x2 matrix of residue codes; the ring is carried separately.
struct Mat2 {
  std::array<Residue, 4> e{0, 0, 0, 0};

  Residue a() const noexcept { return e[0]; }
  Residue b() const noexcept { return e[1]; }
  Residue c() const noexcept { return e[2]; }
  Residue d() const noexcept { return e[3]; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

namespace mat {

Mat2 identity(const Ring& R);
Mat2 scalar(const Ring& R, Residue s);
Mat2 diag(Residue a, Residue d);
/// [[0, 1], [-delta, s]], characteristic polynomial x^2 - s x + delta.
Mat2 companion(const Ring& R, Residue delta, Residue s);
Mat2 add(const Ring& R, const Mat2& x, const Mat2& y);
Mat2 sub(const Ring& R, const Mat2& x, const Mat2& y);
Mat2 mul(const Ring& R, const Mat2& x, const Mat2& y);
Mat2 scale(const Ring& R, Residue s, const Mat2& x);
Residue det(const Ring& R, const Mat2& x);
Residue trace(const Ring& R, const Mat2& x);
Mat2 adjugate(const Ring& R, const Mat2& x);
/// Throws std::domain_error("non-unit") unless det is a unit.
Mat2 inverse(const Ring& R, const Mat2& x);
/// Entrywise reduction to O_level.
Mat2 reduce(const Ring& R, const Mat2& x, int level);
bool is_invertible(const Ring& R, const Mat2& x);
std::string format(const Ring& R, const Mat2& x);

}  // namespace mat

using Elem = std::uint32_t;

/// Enumeration cap for G_r unless the caller raises it.
inline constexpr std::size_t kDefaultCap = 30000;

class GroupTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |GL_2(O_r)| = p^(4(r-1)) (p^2-1)(p^2-p).
std::uint64_t gl2_order(const RingSpec& spec);

class MatrixGroup;
using GroupPtr = std::shared_ptr<const MatrixGroup>;

/// G_r = GL_2(O_r), fully enumerated. Elements are indices into the sorted
/// list of packed encodings.
class MatrixGroup {
 public:
  /// OpenMP kernel; throws GroupTooLarge ("too large; raise cap") above `cap`.
  static GroupPtr enumerate(RingSpec spec, std::size_t cap = kDefaultCap);
  /// Single-threaded reference enumeration, identical output.
  static GroupPtr enumerate_serial(RingSpec spec, std::size_t cap = kDefaultCap);

  const Ring& ring() const noexcept { return ring_; }
  const RingSpec& spec() const noexcept { return ring_.spec(); }
  std::size_t order() const noexcept { return mats_.size(); }

  const Mat2& matrix(Elem g) const { return mats_[g]; }
  std::uint64_t encode(const Mat2& m) const noexcept;
  /// Index of an invertible matrix; throws std::out_of_range otherwise.
  Elem index_of(const Mat2& m) const;
  bool contains(const Mat2& m) const noexcept;

  Elem identity() const noexcept { return identity_; }
  Elem mul(Elem x, Elem y) const;
  Elem inv(Elem x) const { return inverse_[x]; }
  /// g x g^-1
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inverse_[g]); }
  /// x y x^-1 y^-1
  Elem commutator(Elem x, Elem y) const { return mul(mul(x, y), mul(inverse_[x], inverse_[y])); }
  Elem pow(Elem x, std::uint64_t e) const;
  std::uint64_t element_order(Elem x) const;
  Residue det(Elem g) const { return mat::det(ring_, mats_[g]); }

  /// Both elementary transvections and diag(u, 1) for u running over a
  /// generating set of the unit group. Verified to generate at construction.
  std::span<const Elem> standard_generators() const noexcept { return generators_; }

 private:
  explicit MatrixGroup(RingSpec spec);
  static GroupPtr build(RingSpec spec, std::size_t cap, bool parallel);
  void finish();

  Ring ring_;
  std::vector<Mat2> mats_;
  std::vector<std::int32_t> index_;  // dense code -> element index, -1 if singular
  std::vector<Elem> inverse_;
  std::vector<Elem> generators_;
  Elem identity_ = 0;
};

/// Unit-group generators of O_r found by greedy order search.
std::vector<Residue> unit_group_generators(const Ring& ring);

class Subgroup;
using SubgroupPtr = std::shared_ptr<const Subgroup>;

/// A subgroup of an enumerated G_r, stored as a sorted element list with an
/// O(1) membership map.
class Subgroup {
 public:
  static SubgroupPtr whole(const GroupPtr& group);
  /// Subgroup generated by `gens`; closure of the empty set is {1}.
  static SubgroupPtr closure(const GroupPtr& group, std::span<const Elem> gens);
  /// Throws std::invalid_argument if `elems` is not closed under products.
  static SubgroupPtr from_elements(const GroupPtr& group, std::vector<Elem> elems);

  const MatrixGroup& group() const noexcept { return *group_; }
  const GroupPtr& group_ptr() const noexcept { return group_; }
  std::size_t order() const noexcept { return elems_.size(); }
  std::span<const Elem> elements() const noexcept { return elems_; }
  std::span<const Elem> generators() const noexcept { return gens_; }

  bool contains(Elem g) const noexcept { return pos_[g] >= 0; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t position(Elem g) const noexcept {
    return pos_[g] < 0 ? npos : static_cast<std::size_t>(pos_[g]);
  }
  bool is_abelian() const;

 private:
  Subgroup(GroupPtr group, std::vector<Elem> elems, std::vector<Elem> gens);

  GroupPtr group_;
  std::vector<Elem> elems_;
  std::vector<Elem> gens_;
  std::vector<std::int32_t> pos_;
};

bool is_subgroup_of(const Subgroup& h, const Subgroup& k);
/// k normalizes n (tested on generators of k and of n).
bool is_normal_in(const Subgroup& n, const Subgroup& k);
SubgroupPtr intersection(const SubgroupPtr& a, const SubgroupPtr& b);
/// The set product AB; throws std::invalid_argument if it is not a subgroup.
SubgroupPtr product(const SubgroupPtr& a, const SubgroupPtr& b);
/// The set product AB computed element by element, no subgroup assumption.
std::vector<Elem> set_product(const Subgroup& a, const Subgroup& b);
/// g H g^-1
SubgroupPtr conjugate(const SubgroupPtr& h, Elem g);
SubgroupPtr derived_subgroup(const SubgroupPtr& h);
/// One representative per left coset tH of H in K, smallest index first.
/// Throws std::invalid_argument if H is not contained in K.
std::vector<Elem> left_transversal(const Subgroup& k, const Subgroup& h);

/// K_i = {g : g = 1 mod p^i}, 1 <= i <= r-1.
SubgroupPtr congruence_subgroup(const GroupPtr& group, int i);
/// Upper-triangular matrices B_r.
SubgroupPtr borel_subgroup(const GroupPtr& group);

/// x -> 1 + uniformizer^i x, from M_2(O_{r-i}) onto K_i; needs 2i >= r.
Elem lift_iso(const MatrixGroup& group, int i, const Mat2& x);
/// Inverse of lift_iso, returning a matrix over O_{r-i}.
Mat2 lift_iso_inverse(const MatrixGroup& group, int i, Elem k);

/// Partition of a subgroup into conjugacy classes.
struct ConjClasses {
  SubgroupPtr group;
  std::vector<Elem> reps;
  std::vector<std::size_t> sizes;
  std::vector<std::uint32_t> class_of_pos;  // indexed by position in group

  std::size_t count() const noexcept { return reps.size(); }
  std::uint32_t class_of(Elem g) const { return class_of_pos[group->position(g)]; }
  std::size_t identity_class() const { return class_of(group->group().identity()); }
  std::vector<std::vector<Elem>> members() const;
};
using ClassesPtr = std::shared_ptr<const ConjClasses>;

/// Conjugation-orbit BFS over the generators of `group`.
ClassesPtr conjugacy_classes(const SubgroupPtr& group);
/// Rebuild classes from stored representatives (cache path); throws if the
/// recomputed sizes disagree with `sizes`.
ClassesPtr classes_from_reps(const SubgroupPtr& group, std::span<const Elem> reps,
                             std::span<const std::size_t> sizes);

}  // namespace gl2reps
