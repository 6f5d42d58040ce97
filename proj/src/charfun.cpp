#include "gl2reps/charfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace gl2reps {

SubgroupChar trivial_char(const SubgroupPtr& h) { return SubgroupChar{h, std::vector<Complex>(h->order(), 1.0)}; }

SubgroupChar pointwise_product(const SubgroupChar& f, const SubgroupChar& g) {
  if (f.domain->order() != g.domain->order())
    throw std::invalid_argument("pointwise_product: different domains");
  SubgroupChar out{f.domain, f.values};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= g(f.domain->elements()[i]);
  return out;
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

LinearChar psi_beta(const SubgroupPtr& k_i, int i, const Mat2& beta) {
  const MatrixGroup& G = k_i->group();
  const Ring& R = G.ring();
  if (2 * i < G.spec().r) throw std::invalid_argument("psi_beta: K_i is not abelian for i < r/2");
  const Mat2 one = mat::identity(R);
  LinearChar chi{k_i, {}};
  chi.values.reserve(k_i->order());
  for (Elem x : k_i->elements()) {
    const Mat2 y = mat::sub(R, G.matrix(x), one);
    chi.values.push_back(R.additive_char(mat::trace(R, mat::mul(R, beta, y))));
  }
  return chi;
}

namespace {

Complex induced_value(const SubgroupChar& chi, const MatrixGroup& G, std::span<const Elem> transversal, Elem g) {
  Complex sum = 0.0;
  for (Elem t : transversal) {
    const Elem y = G.mul(G.mul(G.inv(t), g), t);
    const std::size_t pos = chi.domain->position(y);
    if (pos != Subgroup::npos) sum += chi.values[pos];
  }
  return sum;
}

}  // namespace

ClassFunction induce(const SubgroupChar& chi, const ClassesPtr& target) {
  const auto transversal = left_transversal(*target->group, *chi.domain);
  const MatrixGroup& G = target->group->group();
  ClassFunction out{target, std::vector<Complex>(target->count())};
  const auto n = static_cast<long long>(target->count());
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < n; ++c) out.values[c] = induced_value(chi, G, transversal, target->reps[c]);
  return out;
}

ClassFunction induce_serial(const SubgroupChar& chi, const ClassesPtr& target) {
  const auto transversal = left_transversal(*target->group, *chi.domain);
  const MatrixGroup& G = target->group->group();
  ClassFunction out{target, std::vector<Complex>(target->count())};
  for (std::size_t c = 0; c < target->count(); ++c)
    out.values[c] = induced_value(chi, G, transversal, target->reps[c]);
  return out;
}

SubgroupChar induce_to(const SubgroupChar& chi, const SubgroupPtr& target) {
  const auto transversal = left_transversal(*target, *chi.domain);
  const MatrixGroup& G = target->group();
  SubgroupChar out{target, std::vector<Complex>(target->order())};
  auto elems = target->elements();
  const auto n = static_cast<long long>(elems.size());
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) out.values[k] = induced_value(chi, G, transversal, elems[k]);
  return out;
}

SubgroupChar restrict_to(const ClassFunction& f, const SubgroupPtr& h) {
  SubgroupChar out{h, {}};
  out.values.reserve(h->order());
  for (Elem x : h->elements()) out.values.push_back(f(x));
  return out;
}

SubgroupChar restrict_to(const SubgroupChar& f, const SubgroupPtr& h) {
  SubgroupChar out{h, {}};
  out.values.reserve(h->order());
  for (Elem x : h->elements()) {
    const std::size_t pos = f.domain->position(x);
    if (pos == Subgroup::npos) throw std::invalid_argument("restrict_to: not a subgroup of the domain");
    out.values.push_back(f.values[pos]);
  }
  return out;
}

Complex inner(const ClassFunction& f, const ClassFunction& g) {
  if (f.classes != g.classes && (f.classes->group != g.classes->group || f.classes->reps != g.classes->reps))
    throw std::invalid_argument("inner: mismatched class data");
  if (f.values.size() != g.values.size()) throw std::invalid_argument("inner: mismatched class data");
  Complex sum = 0.0;
  for (std::size_t c = 0; c < f.values.size(); ++c)
    sum += static_cast<double>(f.classes->sizes[c]) * f.values[c] * std::conj(g.values[c]);
  return sum / static_cast<double>(f.classes->group->order());
}

Complex inner(const SubgroupChar& f, const SubgroupChar& g) {
  if (f.domain->order() != g.domain->order()) throw std::invalid_argument("inner: mismatched domains");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) sum += f.values[i] * std::conj(g(f.domain->elements()[i]));
  return sum / static_cast<double>(f.domain->order());
}

ClassFunction mult_by_linear(const ClassFunction& f, const std::function<Complex(Residue)>& lambda) {
  ClassFunction out = f;
  const MatrixGroup& G = f.classes->group->group();
  for (std::size_t c = 0; c < out.values.size(); ++c) out.values[c] *= lambda(G.det(f.classes->reps[c]));
  return out;
}

bool is_multiplicative(const SubgroupChar& f, double tol) {
  const MatrixGroup& G = f.domain->group();
  auto elems = f.domain->elements();
  for (Elem s : f.domain->generators()) {
    const Complex fs = f(s);
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (std::abs(f(G.mul(elems[i], s)) - f.values[i] * fs) > tol) return false;
  }
  return std::abs(f.degree() - 1.0) < tol;
}

bool is_stable_under(const SubgroupChar& f, std::span<const Elem> conjugators, double tol) {
  const MatrixGroup& G = f.domain->group();
  auto elems = f.domain->elements();
  for (Elem g : conjugators)
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const std::size_t pos = f.domain->position(G.conj(g, elems[i]));
      if (pos == Subgroup::npos || std::abs(f.values[pos] - f.values[i]) > tol) return false;
    }
  return true;
}

SubgroupPtr kernel(const LinearChar& chi, double tol) {
  std::vector<Elem> elems;
  for (std::size_t i = 0; i < chi.values.size(); ++i)
    if (std::abs(chi.values[i] - 1.0) < tol) elems.push_back(chi.domain->elements()[i]);
  return Subgroup::from_elements(chi.domain->group_ptr(), std::move(elems));
}

Quotient quotient(const SubgroupPtr& top, const SubgroupPtr& bottom) {
  if (!is_subgroup_of(*bottom, *top) || !is_normal_in(*bottom, *top))
    throw std::invalid_argument("quotient: bottom is not a normal subgroup of top");
  Quotient q{top, bottom, {}, {}};
  const MatrixGroup& G = top->group();
  constexpr std::uint32_t unset = static_cast<std::uint32_t>(-1);
  q.coset_of_pos.assign(top->order(), unset);
  for (Elem t : top->elements()) {
    if (q.coset_of_pos[top->position(t)] != unset) continue;
    const auto id = static_cast<std::uint32_t>(q.reps.size());
    q.reps.push_back(t);
    for (Elem n : bottom->elements()) q.coset_of_pos[top->position(G.mul(t, n))] = id;
  }
  return q;
}

AbelianCharTable abelian_chars(const Quotient& q) {
  return AbelianCharTable::build(q.size(), q.identity(), [&q](std::size_t a, std::size_t b) { return q.mul(a, b); });
}

LinearChar lift_character(const Quotient& q, const AbelianCharTable& table, std::size_t chi) {
  LinearChar out{q.top, {}};
  out.values.reserve(q.top->order());
  for (std::size_t pos = 0; pos < q.top->order(); ++pos) out.values.push_back(table.value(chi, q.coset_of_pos[pos]));
  return out;
}

std::vector<LinearChar> linear_characters(const SubgroupPtr& h) {
  const Quotient q = quotient(h, derived_subgroup(h));
  const AbelianCharTable table = abelian_chars(q);
  std::vector<LinearChar> out;
  out.reserve(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) out.push_back(lift_character(q, table, c));
  return out;
}

std::vector<LinearChar> linear_extensions(const SubgroupPtr& h, const LinearChar& chi, double tol) {
  if (!is_subgroup_of(*chi.domain, *h)) throw std::invalid_argument("linear_extensions: domain not contained in h");
  const Quotient q = quotient(h, derived_subgroup(h));
  const AbelianCharTable table = abelian_chars(q);

  // Values of chi per coset; a character of h must be constant on cosets of [h,h].
  std::vector<std::size_t> cosets;
  std::vector<Complex> values;
  std::vector<std::int64_t> seen(q.size(), -1);
  auto dom = chi.domain->elements();
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const std::size_t c = q.coset(dom[i]);
    if (seen[c] < 0) {
      seen[c] = static_cast<std::int64_t>(values.size());
      cosets.push_back(c);
      values.push_back(chi.values[i]);
    } else if (std::abs(values[static_cast<std::size_t>(seen[c])] - chi.values[i]) > tol) {
      return {};  // chi is nontrivial on the part of [h,h] inside its domain
    }
  }
  std::vector<LinearChar> out;
  for (std::size_t c : table.extensions(cosets, values, tol)) out.push_back(lift_character(q, table, c));
  return out;
}

}  // namespace gl2reps
