#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gl2reps/matgroup.hpp"
#include "gl2reps/ring.hpp"

namespace gl2reps {

/// A complex function on a subgroup, one value per element position.
struct SubgroupChar {
  SubgroupPtr domain;
  std::vector<Complex> values;

  Complex operator()(Elem g) const { return values[domain->position(g)]; }
  Complex degree() const { return (*this)(domain->group().identity()); }
};

/// One-dimensional characters use the same storage.
using LinearChar = SubgroupChar;

/// A class function on the group underlying `classes`, one value per class.
struct ClassFunction {
  ClassesPtr classes;
  std::vector<Complex> values;

  Complex operator()(Elem g) const { return values[classes->class_of(g)]; }
  Complex at_identity() const { return values[classes->identity_class()]; }
};

SubgroupChar trivial_char(const SubgroupPtr& h);
SubgroupChar pointwise_product(const SubgroupChar& f, const SubgroupChar& g);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);

/// psi_beta(x) = psi(Tr(beta (x - 1))) on K_i. `beta` is a matrix over
/// O_{r-i} in residue codes; any lift gives the same values. Needs 2i >= r.
LinearChar psi_beta(const SubgroupPtr& k_i, int i, const Mat2& beta);

/// Frobenius formula over a left transversal, evaluated at class
/// representatives of the target. OpenMP-parallel across classes.
ClassFunction induce(const SubgroupChar& chi, const ClassesPtr& target);
/// Single-threaded reference for `induce`.
ClassFunction induce_serial(const SubgroupChar& chi, const ClassesPtr& target);
/// Induction to an intermediate subgroup, evaluated at every element.
SubgroupChar induce_to(const SubgroupChar& chi, const SubgroupPtr& target);

SubgroupChar restrict_to(const ClassFunction& f, const SubgroupPtr& h);
SubgroupChar restrict_to(const SubgroupChar& f, const SubgroupPtr& h);

/// (1/|G|) sum over classes of size * f * conj(g). Throws on mismatched classes.
Complex inner(const ClassFunction& f, const ClassFunction& g);
/// (1/|H|) sum over elements of f * conj(g).
Complex inner(const SubgroupChar& f, const SubgroupChar& g);

/// Pointwise product with lambda(det(g)) for a character lambda of O_r^x.
ClassFunction mult_by_linear(const ClassFunction& f, const std::function<Complex(Residue)>& lambda);

/// f(xy) = f(x) f(y) for all x and all generators y of the domain.
bool is_multiplicative(const SubgroupChar& f, double tol = kTolerance);
/// f(g x g^-1) = f(x) for every x in the domain and g in `conjugators`.
bool is_stable_under(const SubgroupChar& f, std::span<const Elem> conjugators, double tol = kTolerance);
SubgroupPtr kernel(const LinearChar& chi, double tol = kTolerance);

/// Quotient group top/bottom, bottom normal in top.
struct Quotient {
  SubgroupPtr top;
  SubgroupPtr bottom;
  std::vector<Elem> reps;                   // one representative per coset
  std::vector<std::uint32_t> coset_of_pos;  // position in top -> coset id

  std::size_t size() const noexcept { return reps.size(); }
  std::size_t coset(Elem g) const { return coset_of_pos[top->position(g)]; }
  std::size_t identity() const { return coset(top->group().identity()); }
  std::size_t mul(std::size_t a, std::size_t b) const { return coset(top->group().mul(reps[a], reps[b])); }
};

/// Throws std::invalid_argument unless bottom is a normal subgroup of top.
Quotient quotient(const SubgroupPtr& top, const SubgroupPtr& bottom);
AbelianCharTable abelian_chars(const Quotient& q);
/// Character `chi` of the quotient pulled back to q.top.
LinearChar lift_character(const Quotient& q, const AbelianCharTable& table, std::size_t chi);

/// All linear characters of h (through the abelianization).
std::vector<LinearChar> linear_characters(const SubgroupPtr& h);
/// All linear characters of h whose restriction to chi.domain equals chi.
std::vector<LinearChar> linear_extensions(const SubgroupPtr& h, const LinearChar& chi, double tol = kTolerance);

}  // namespace gl2reps
