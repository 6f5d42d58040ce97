#include "gl2reps/matgroup.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include <omp.h>

namespace gl2reps {

namespace mat {

Mat2 identity(const Ring& R) { return Mat2{{R.from_int(1), 0, 0, R.from_int(1)}}; }

Mat2 scalar(const Ring&, Residue s) { return Mat2{{s, 0, 0, s}}; }

Mat2 diag(Residue a, Residue d) { return Mat2{{a, 0, 0, d}}; }

Mat2 companion(const Ring& R, Residue delta, Residue s) { return Mat2{{0, R.from_int(1), R.neg(delta), s}}; }

Mat2 add(const Ring& R, const Mat2& x, const Mat2& y) {
  return Mat2{{R.add(x.e[0], y.e[0]), R.add(x.e[1], y.e[1]), R.add(x.e[2], y.e[2]), R.add(x.e[3], y.e[3])}};
}

Mat2 sub(const Ring& R, const Mat2& x, const Mat2& y) {
  return Mat2{{R.sub(x.e[0], y.e[0]), R.sub(x.e[1], y.e[1]), R.sub(x.e[2], y.e[2]), R.sub(x.e[3], y.e[3])}};
}

Mat2 mul(const Ring& R, const Mat2& x, const Mat2& y) {
  return Mat2{{R.add(R.mul(x.e[0], y.e[0]), R.mul(x.e[1], y.e[2])),
               R.add(R.mul(x.e[0], y.e[1]), R.mul(x.e[1], y.e[3])),
               R.add(R.mul(x.e[2], y.e[0]), R.mul(x.e[3], y.e[2])),
               R.add(R.mul(x.e[2], y.e[1]), R.mul(x.e[3], y.e[3]))}};
}

Mat2 scale(const Ring& R, Residue s, const Mat2& x) {
  return Mat2{{R.mul(s, x.e[0]), R.mul(s, x.e[1]), R.mul(s, x.e[2]), R.mul(s, x.e[3])}};
}

Residue det(const Ring& R, const Mat2& x) { return R.sub(R.mul(x.e[0], x.e[3]), R.mul(x.e[1], x.e[2])); }

Residue trace(const Ring& R, const Mat2& x) { return R.add(x.e[0], x.e[3]); }

Mat2 adjugate(const Ring& R, const Mat2& x) { return Mat2{{x.e[3], R.neg(x.e[1]), R.neg(x.e[2]), x.e[0]}}; }

Mat2 inverse(const Ring& R, const Mat2& x) { return scale(R, R.inv(det(R, x)), adjugate(R, x)); }

Mat2 reduce(const Ring& R, const Mat2& x, int level) {
  return Mat2{{R.reduce(x.e[0], level), R.reduce(x.e[1], level), R.reduce(x.e[2], level), R.reduce(x.e[3], level)}};
}

bool is_invertible(const Ring& R, const Mat2& x) { return R.is_unit(det(R, x)); }

std::string format(const Ring& R, const Mat2& x) {
  std::ostringstream os;
  os << "[[" << R.format(x.e[0]) << "," << R.format(x.e[1]) << "],[" << R.format(x.e[2]) << ","
     << R.format(x.e[3]) << "]]";
  return os.str();
}

}  // namespace mat

std::uint64_t gl2_order(const RingSpec& spec) {
  const std::uint64_t p = static_cast<std::uint64_t>(spec.p);
  constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();
  if (p >= (1u << 15)) return saturated;
  std::uint64_t order = (p * p - 1) * (p * p - p);
  for (int i = 1; i < spec.r; ++i) {
    if (order > saturated / (p * p * p * p)) return saturated;
    order *= p * p * p * p;
  }
  return order;
}

std::vector<Residue> unit_group_generators(const Ring& ring) {
  const auto units = ring.units();
  std::vector<char> reached(ring.size(), 0);
  std::vector<Residue> span{ring.from_int(1)};
  reached[ring.from_int(1)] = 1;
  std::vector<std::pair<std::uint64_t, Residue>> by_order;
  for (Residue u : units) {
    std::uint64_t k = 1;
    for (Residue x = u; x != ring.from_int(1); x = ring.mul(x, u)) ++k;
    by_order.emplace_back(k, u);
  }
  std::stable_sort(by_order.begin(), by_order.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::vector<Residue> gens;
  for (auto [k, u] : by_order) {
    if (reached[u]) continue;
    gens.push_back(u);
    for (std::size_t i = 0; i < span.size(); ++i) {
      Residue x = ring.mul(span[i], u);
      while (!reached[x]) {
        reached[x] = 1;
        span.push_back(x);
        x = ring.mul(x, u);
      }
    }
    if (span.size() == units.size()) break;
  }
  return gens;
}

MatrixGroup::MatrixGroup(RingSpec spec) : ring_(spec) {}

std::uint64_t MatrixGroup::encode(const Mat2& m) const noexcept {
  const std::uint64_t n = ring_.size();
  return m.e[0] + n * (m.e[1] + n * (m.e[2] + n * static_cast<std::uint64_t>(m.e[3])));
}

GroupPtr MatrixGroup::enumerate(RingSpec spec, std::size_t cap) { return build(spec, cap, true); }

GroupPtr MatrixGroup::enumerate_serial(RingSpec spec, std::size_t cap) { return build(spec, cap, false); }

GroupPtr MatrixGroup::build(RingSpec spec, std::size_t cap, bool parallel) {
  const std::uint64_t expected = gl2_order(spec);
  if (expected > cap) {
    std::ostringstream os;
    os << "GL2 over " << to_string(spec) << " has " << expected << " elements (cap " << cap
       << "): too large; raise cap";
    throw GroupTooLarge(os.str());
  }
  std::shared_ptr<MatrixGroup> g(new MatrixGroup(spec));
  const Ring& R = g->ring_;
  const std::uint64_t n = R.size();
  const std::uint64_t cube = n * n * n;
  if (cube * n > (std::uint64_t{1} << 26)) throw GroupTooLarge("ring too large for dense matrix indexing");

  // Chunks by the most significant entry keep the concatenation sorted.
  std::vector<std::vector<Mat2>> chunks(n);
  auto fill_chunk = [&](std::uint64_t d) {
    auto& out = chunks[d];
    for (std::uint64_t rest = 0; rest < cube; ++rest) {
      Mat2 m{{static_cast<Residue>(rest % n), static_cast<Residue>((rest / n) % n),
              static_cast<Residue>(rest / (n * n)), static_cast<Residue>(d)}};
      if (mat::is_invertible(R, m)) out.push_back(m);
    }
  };
  if (parallel) {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long d = 0; d < count; ++d) fill_chunk(static_cast<std::uint64_t>(d));
  } else {
    for (std::uint64_t d = 0; d < n; ++d) fill_chunk(d);
  }
  for (auto& c : chunks) g->mats_.insert(g->mats_.end(), c.begin(), c.end());
  if (g->mats_.size() != expected) throw std::logic_error("group_enumerate: order disagrees with |GL2| formula");
  g->finish();
  return g;
}

void MatrixGroup::finish() {
  const Ring& R = ring_;
  const std::uint64_t n = R.size();
  index_.assign(n * n * n * n, -1);
  for (std::size_t i = 0; i < mats_.size(); ++i) index_[encode(mats_[i])] = static_cast<std::int32_t>(i);
  inverse_.resize(mats_.size());
  for (std::size_t i = 0; i < mats_.size(); ++i)
    inverse_[i] = static_cast<Elem>(index_[encode(mat::inverse(R, mats_[i]))]);
  identity_ = index_of(mat::identity(R));

  const Residue one = R.from_int(1);
  generators_.push_back(index_of(Mat2{{one, one, 0, one}}));
  generators_.push_back(index_of(Mat2{{one, 0, one, one}}));
  for (Residue u : unit_group_generators(R)) generators_.push_back(index_of(mat::diag(u, one)));

  std::vector<char> seen(mats_.size(), 0);
  std::vector<Elem> queue{identity_};
  seen[identity_] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (Elem s : generators_) {
      const Elem y = mul(queue[head], s);
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  if (queue.size() != mats_.size()) throw std::logic_error("standard generators do not generate GL2");
}

Elem MatrixGroup::index_of(const Mat2& m) const {
  const std::uint64_t code = encode(m);
  if (code >= index_.size() || index_[code] < 0) throw std::out_of_range("matrix is not in the group: " + mat::format(ring_, m));
  return static_cast<Elem>(index_[code]);
}

bool MatrixGroup::contains(const Mat2& m) const noexcept {
  const std::uint64_t code = encode(m);
  return code < index_.size() && index_[code] >= 0;
}

Elem MatrixGroup::mul(Elem x, Elem y) const {
  return static_cast<Elem>(index_[encode(mat::mul(ring_, mats_[x], mats_[y]))]);
}

Elem MatrixGroup::pow(Elem x, std::uint64_t e) const {
  Elem result = identity_;
  while (e) {
    if (e & 1) result = mul(result, x);
    x = mul(x, x);
    e >>= 1;
  }
  return result;
}

std::uint64_t MatrixGroup::element_order(Elem x) const {
  std::uint64_t k = 1;
  for (Elem y = x; y != identity_; y = mul(y, x)) ++k;
  return k;
}

// ---------------------------------------------------------------------------

Subgroup::Subgroup(GroupPtr group, std::vector<Elem> elems, std::vector<Elem> gens)
    : group_(std::move(group)), elems_(std::move(elems)), gens_(std::move(gens)) {
  std::sort(elems_.begin(), elems_.end());
  pos_.assign(group_->order(), -1);
  for (std::size_t i = 0; i < elems_.size(); ++i) pos_[elems_[i]] = static_cast<std::int32_t>(i);
}

namespace {

// BFS closure from a seed list already closed under the old generators.
void close_under(const MatrixGroup& G, std::vector<Elem>& elems, std::vector<char>& seen, std::span<const Elem> gens) {
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (Elem s : gens) {
      const Elem y = G.mul(elems[head], s);
      if (!seen[y]) {
        seen[y] = 1;
        elems.push_back(y);
      }
    }
}

}  // namespace

SubgroupPtr Subgroup::whole(const GroupPtr& group) {
  std::vector<Elem> all(group->order());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Elem>(i);
  auto gens = std::vector<Elem>(group->standard_generators().begin(), group->standard_generators().end());
  return SubgroupPtr(new Subgroup(group, std::move(all), std::move(gens)));
}

SubgroupPtr Subgroup::closure(const GroupPtr& group, std::span<const Elem> gens) {
  const MatrixGroup& G = *group;
  std::vector<char> seen(G.order(), 0);
  std::vector<Elem> elems{G.identity()};
  seen[G.identity()] = 1;
  std::vector<Elem> kept;
  for (Elem g : gens) {
    if (seen[g]) continue;
    kept.push_back(g);
    std::fill(seen.begin(), seen.end(), 0);
    elems.assign(1, G.identity());
    seen[G.identity()] = 1;
    close_under(G, elems, seen, kept);
  }
  return SubgroupPtr(new Subgroup(group, std::move(elems), std::move(kept)));
}

SubgroupPtr Subgroup::from_elements(const GroupPtr& group, std::vector<Elem> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  const MatrixGroup& G = *group;
  std::vector<char> member(G.order(), 0);
  for (Elem e : elems) member[e] = 1;
  if (!member[G.identity()]) throw std::invalid_argument("subgroup: identity missing");

  std::vector<char> seen(G.order(), 0);
  std::vector<Elem> span{G.identity()};
  seen[G.identity()] = 1;
  std::vector<Elem> gens;
  for (Elem e : elems) {
    if (seen[e]) continue;
    gens.push_back(e);
    std::fill(seen.begin(), seen.end(), 0);
    span.assign(1, G.identity());
    seen[G.identity()] = 1;
    close_under(G, span, seen, gens);
    if (span.size() > elems.size()) throw std::invalid_argument("subgroup: element set is not closed");
  }
  for (Elem e : span)
    if (!member[e]) throw std::invalid_argument("subgroup: element set is not closed");
  if (span.size() != elems.size()) throw std::logic_error("subgroup: greedy generation incomplete");
  return SubgroupPtr(new Subgroup(group, std::move(elems), std::move(gens)));
}

bool Subgroup::is_abelian() const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    for (std::size_t j = i + 1; j < gens_.size(); ++j)
      if (group_->mul(gens_[i], gens_[j]) != group_->mul(gens_[j], gens_[i])) return false;
  return true;
}

bool is_subgroup_of(const Subgroup& h, const Subgroup& k) {
  if (h.group_ptr() != k.group_ptr()) return false;
  for (Elem e : h.elements())
    if (!k.contains(e)) return false;
  return true;
}

bool is_normal_in(const Subgroup& n, const Subgroup& k) {
  const MatrixGroup& G = n.group();
  for (Elem g : k.generators())
    for (Elem x : n.generators())
      if (!n.contains(G.conj(g, x))) return false;
  return true;
}

SubgroupPtr intersection(const SubgroupPtr& a, const SubgroupPtr& b) {
  std::vector<Elem> common;
  for (Elem e : a->elements())
    if (b->contains(e)) common.push_back(e);
  return Subgroup::from_elements(a->group_ptr(), std::move(common));
}

std::vector<Elem> set_product(const Subgroup& a, const Subgroup& b) {
  const MatrixGroup& G = a.group();
  std::vector<char> seen(G.order(), 0);
  std::vector<Elem> out;
  for (Elem x : a.elements())
    for (Elem y : b.elements()) {
      const Elem z = G.mul(x, y);
      if (!seen[z]) {
        seen[z] = 1;
        out.push_back(z);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

SubgroupPtr product(const SubgroupPtr& a, const SubgroupPtr& b) {
  std::vector<Elem> gens(a->generators().begin(), a->generators().end());
  gens.insert(gens.end(), b->generators().begin(), b->generators().end());
  auto joined = Subgroup::closure(a->group_ptr(), gens);
  const std::size_t meet = intersection(a, b)->order();
  if (joined->order() * meet != a->order() * b->order())
    throw std::invalid_argument("product: AB is not a subgroup");
  return joined;
}

SubgroupPtr conjugate(const SubgroupPtr& h, Elem g) {
  const MatrixGroup& G = h->group();
  std::vector<Elem> out;
  out.reserve(h->order());
  for (Elem x : h->elements()) out.push_back(G.conj(g, x));
  return Subgroup::from_elements(h->group_ptr(), std::move(out));
}

SubgroupPtr derived_subgroup(const SubgroupPtr& h) {
  const MatrixGroup& G = h->group();
  auto hg = h->generators();
  std::vector<Elem> gens;
  for (std::size_t i = 0; i < hg.size(); ++i)
    for (std::size_t j = i + 1; j < hg.size(); ++j) gens.push_back(G.commutator(hg[i], hg[j]));
  auto d = Subgroup::closure(h->group_ptr(), gens);
  // Normal closure of the generator commutators is the derived subgroup.
  for (bool changed = true; changed;) {
    changed = false;
    for (Elem s : hg) {
      for (Elem x : d->generators()) {
        const Elem y = G.conj(s, x);
        if (!d->contains(y)) {
          std::vector<Elem> more(d->generators().begin(), d->generators().end());
          more.push_back(y);
          d = Subgroup::closure(h->group_ptr(), more);
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  return d;
}

std::vector<Elem> left_transversal(const Subgroup& k, const Subgroup& h) {
  if (!is_subgroup_of(h, k)) throw std::invalid_argument("coset_reps: H is not a subgroup of G");
  const MatrixGroup& G = k.group();
  std::vector<char> covered(G.order(), 0);
  std::vector<Elem> reps;
  reps.reserve(k.order() / h.order());
  for (Elem t : k.elements()) {
    if (covered[t]) continue;
    reps.push_back(t);
    for (Elem x : h.elements()) covered[G.mul(t, x)] = 1;
  }
  return reps;
}

SubgroupPtr congruence_subgroup(const GroupPtr& group, int i) {
  const MatrixGroup& G = *group;
  const int r = G.spec().r;
  if (i < 1 || i > r - 1) throw std::invalid_argument("congruence_subgroup: need 1 <= i <= r-1");
  const Ring& R = G.ring();
  const Mat2 one = mat::identity(R);
  std::vector<Elem> elems;
  for (Elem g = 0; g < G.order(); ++g)
    if (mat::reduce(R, G.matrix(g), i) == mat::reduce(R, one, i)) elems.push_back(g);
  return Subgroup::from_elements(group, std::move(elems));
}

SubgroupPtr borel_subgroup(const GroupPtr& group) {
  const MatrixGroup& G = *group;
  std::vector<Elem> elems;
  for (Elem g = 0; g < G.order(); ++g)
    if (G.matrix(g).c() == 0) elems.push_back(g);
  return Subgroup::from_elements(group, std::move(elems));
}

Elem lift_iso(const MatrixGroup& G, int i, const Mat2& x) {
  const int r = G.spec().r;
  if (2 * i < r || i >= r) throw std::invalid_argument("lift_iso: need r/2 <= i < r");
  const Ring& R = G.ring();
  const Residue unif = R.uniformizer_power(i);
  // Residue codes of O_{r-i} embed into O_r by the canonical section.
  return G.index_of(mat::add(R, mat::identity(R), mat::scale(R, unif, x)));
}

Mat2 lift_iso_inverse(const MatrixGroup& G, int i, Elem k) {
  const int r = G.spec().r;
  if (2 * i < r || i >= r) throw std::invalid_argument("lift_iso: need r/2 <= i < r");
  const Ring& R = G.ring();
  const Mat2 y = mat::sub(R, G.matrix(k), mat::identity(R));
  const Residue unif = R.uniformizer_power(i);
  Mat2 out;
  for (int j = 0; j < 4; ++j) {
    if (R.valuation(y.e[j]) < i) throw std::invalid_argument("lift_iso_inverse: element not in K_i");
    out.e[j] = R.reduce(y.e[j] / unif, r - i);
  }
  return out;
}

std::vector<std::vector<Elem>> ConjClasses::members() const {
  std::vector<std::vector<Elem>> out(count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].reserve(sizes[i]);
  auto elems = group->elements();
  for (std::size_t pos = 0; pos < elems.size(); ++pos) out[class_of_pos[pos]].push_back(elems[pos]);
  return out;
}

ClassesPtr conjugacy_classes(const SubgroupPtr& group) {
  auto cc = std::make_shared<ConjClasses>();
  cc->group = group;
  const MatrixGroup& G = group->group();
  auto elems = group->elements();
  constexpr std::uint32_t unset = static_cast<std::uint32_t>(-1);
  cc->class_of_pos.assign(elems.size(), unset);
  std::vector<Elem> queue;
  for (std::size_t pos = 0; pos < elems.size(); ++pos) {
    if (cc->class_of_pos[pos] != unset) continue;
    const auto id = static_cast<std::uint32_t>(cc->reps.size());
    cc->reps.push_back(elems[pos]);
    queue.assign(1, elems[pos]);
    cc->class_of_pos[pos] = id;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (Elem s : group->generators()) {
        const Elem y = G.conj(s, queue[head]);
        const std::size_t yp = group->position(y);
        if (cc->class_of_pos[yp] == unset) {
          cc->class_of_pos[yp] = id;
          queue.push_back(y);
        }
      }
    cc->sizes.push_back(queue.size());
  }
  return cc;
}

ClassesPtr classes_from_reps(const SubgroupPtr& group, std::span<const Elem> reps, std::span<const std::size_t> sizes) {
  if (reps.size() != sizes.size()) throw std::invalid_argument("classes_from_reps: size mismatch");
  auto cc = std::make_shared<ConjClasses>();
  cc->group = group;
  const MatrixGroup& G = group->group();
  constexpr std::uint32_t unset = static_cast<std::uint32_t>(-1);
  cc->class_of_pos.assign(group->order(), unset);
  std::size_t total = 0;
  for (std::size_t id = 0; id < reps.size(); ++id) {
    const std::size_t rp = group->position(reps[id]);
    if (rp == Subgroup::npos || cc->class_of_pos[rp] != unset)
      throw std::invalid_argument("classes_from_reps: bad or repeated representative");
    std::vector<Elem> queue{reps[id]};
    cc->class_of_pos[rp] = static_cast<std::uint32_t>(id);
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (Elem s : group->generators()) {
        const Elem y = G.conj(s, queue[head]);
        const std::size_t yp = group->position(y);
        if (cc->class_of_pos[yp] == unset) {
          cc->class_of_pos[yp] = static_cast<std::uint32_t>(id);
          queue.push_back(y);
        } else if (cc->class_of_pos[yp] != id) {
          throw std::invalid_argument("classes_from_reps: representatives are conjugate");
        }
      }
    if (queue.size() != sizes[id]) throw std::invalid_argument("classes_from_reps: class size mismatch");
    cc->reps.push_back(reps[id]);
    cc->sizes.push_back(queue.size());
    total += queue.size();
  }
  if (total != group->order()) throw std::invalid_argument("classes_from_reps: classes do not cover the group");
  return cc;
}

}  // namespace gl2reps
