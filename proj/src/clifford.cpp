#include "gl2reps/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <random>
#include <stdexcept>
#include <string>

namespace gl2reps {

namespace {

Elem element_of(const MatrixGroup& G, const Mat2& m) { return G.index_of(m); }

// Residue classes of (x - 1) / uniformizer^i mod p, for x in K_i.
Mat2 scaled_mod_p(const MatrixGroup& G, int i, Elem x) {
  const Ring& R = G.ring();
  const Mat2 y = mat::sub(R, G.matrix(x), mat::identity(R));
  const Residue unif = R.uniformizer_power(i);
  Mat2 out;
  for (int j = 0; j < 4; ++j) out.e[j] = R.reduce(y.e[j] / unif, 1);
  return out;
}

// exp(2 pi i j / p) -> j.
int root_exponent(Complex z, int p) {
  const double turns = std::arg(z) / (2.0 * std::numbers::pi);
  const long long j = std::llround(turns * p);
  return static_cast<int>(((j % p) + p) % p);
}

void require_distinct(const std::vector<IrrepRecord>& out, const char* where) {
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (max_abs_diff(out[i].chi.values, out[j].chi.values) < kTolerance)
        throw std::logic_error(std::string(where) + ": two inducing data give the same character");
}

IrrepRecord make_record(std::string label, const SubgroupChar& chi, const ClassesPtr& classes) {
  IrrepRecord rec;
  rec.label = std::move(label);
  rec.chi = induce(chi, classes);
  rec.dim = integral_degree(rec.chi);
  return rec;
}

// Cosets of V = q.top / q.bottom forming the subgroup generated by `span` and v.
std::vector<std::size_t> adjoin(const Quotient& q, const std::vector<std::size_t>& span, std::size_t v) {
  std::vector<char> in(q.size(), 0);
  std::vector<std::size_t> out;
  for (std::size_t w : span) {
    std::size_t x = w;
    do {
      if (!in[x]) {
        in[x] = 1;
        out.push_back(x);
      }
      x = q.mul(x, v);
    } while (x != w);
  }
  return out;
}

std::size_t coset_order(const Quotient& q, std::size_t v) {
  std::size_t n = 1;
  for (std::size_t x = v; x != q.identity(); x = q.mul(x, v)) ++n;
  return n;
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& a, std::size_t e) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  for (std::size_t i = 0; i < e; ++i) out = out * a;
  return out;
}

}  // namespace

bool BilinearFormTable::is_alternating() const {
  for (std::size_t v = 0; v < size(); ++v)
    if (at(v, v) != 0) return false;
  return true;
}

std::vector<std::size_t> BilinearFormTable::radical() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < size(); ++v) {
    bool zero = true;
    for (std::size_t w = 0; w < size() && zero; ++w) zero = at(v, w) == 0;
    if (zero) out.push_back(v);
  }
  return out;
}

SubgroupChar MatrixRep::character() const {
  SubgroupChar out{domain, {}};
  out.values.reserve(mats.size());
  for (const auto& m : mats) out.values.push_back(m.trace());
  return out;
}

double MatrixRep::homomorphism_defect() const {
  const MatrixGroup& G = domain->group();
  double worst = 0.0;
  for (Elem x : domain->elements())
    for (Elem s : domain->generators())
      worst = std::max(worst, ((*this)(G.mul(x, s)) - (*this)(x) * (*this)(s)).norm());
  return worst;
}

double MatrixRep::unitarity_defect() const {
  double worst = 0.0;
  for (const auto& m : mats)
    worst = std::max(worst, (m * m.adjoint() - Eigen::MatrixXcd::Identity(dim, dim)).norm());
  return worst;
}

MatrixRep induced_representation(const LinearChar& chi, const SubgroupPtr& target) {
  const MatrixGroup& G = target->group();
  const auto reps = left_transversal(*target, *chi.domain);
  const auto n = static_cast<Eigen::Index>(reps.size());
  std::vector<std::uint32_t> coset(target->order());
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (Elem h : chi.domain->elements()) coset[target->position(G.mul(reps[i], h))] = static_cast<std::uint32_t>(i);

  MatrixRep out{target, static_cast<int>(n), {}};
  out.mats.reserve(target->order());
  for (Elem g : target->elements()) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Elem y = G.mul(g, reps[static_cast<std::size_t>(j)]);
      const std::uint32_t i = coset[target->position(y)];
      m(i, j) = chi(G.mul(G.inv(reps[i]), y));
    }
    out.mats.push_back(std::move(m));
  }
  return out;
}

LinearChar glue(const LinearChar& chi1, const LinearChar& chi2, const SubgroupPtr& product_group) {
  const MatrixGroup& G = product_group->group();
  LinearChar out{product_group, std::vector<Complex>(product_group->order())};
  std::vector<char> set(product_group->order(), 0);
  auto xs = chi1.domain->elements();
  auto ys = chi2.domain->elements();
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const std::size_t pos = product_group->position(G.mul(xs[i], ys[j]));
      if (pos == Subgroup::npos) throw std::invalid_argument("glue: factor outside the product group");
      const Complex v = chi1.values[i] * chi2.values[j];
      if (!set[pos]) {
        set[pos] = 1;
        out.values[pos] = v;
      } else if (std::abs(out.values[pos] - v) > kTolerance) {
        throw std::logic_error("glue: characters disagree on the intersection");
      }
    }
  if (std::find(set.begin(), set.end(), 0) != set.end())
    throw std::invalid_argument("glue: product group is larger than the set product");
  return out;
}

// ------------------------------------------------------------------ even r

std::vector<IrrepRecord> even_case(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  if (ctx.r() % 2 != 0) throw std::invalid_argument("even_case: wrong parity");
  const LinearChar psi = orbit_character(ctx, orbit);
  const SubgroupPtr a = unit_algebra(ctx.group, orbit.beta_hat);
  const SubgroupPtr t = product(a, ctx.k_l);
  const LinearChar on_meet = restrict_to(psi, intersection(a, ctx.k_l));

  std::vector<IrrepRecord> out;
  const auto thetas = linear_extensions(a, on_meet);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const LinearChar theta_psi = glue(thetas[i], psi, t);
    out.push_back(make_record(orbit.label() + "/theta" + std::to_string(i), theta_psi, ctx.classes));
  }
  require_distinct(out, "even_case");
  return out;
}

// ------------------------------------------------------------- odd r, split

SplitForm split_form(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  if (ctx.r() % 2 == 0) throw std::invalid_argument("split_form: wrong parity");
  if (orbit.type == OrbitType::cuspidal) throw std::invalid_argument("split_form: use odd_cuspidal");
  const MatrixGroup& G = *ctx.group;
  const Ring k(G.spec().at_level(1));
  const int lp = ctx.levels.l_prime;
  const Mat2 beta_bar = mat::reduce(G.ring(), orbit.beta, 1);

  const Quotient v = quotient(ctx.k_lp, ctx.k_l);
  SplitForm sf;
  sf.form.p = G.spec().p;
  sf.form.coset_reps = v.reps;
  std::vector<Mat2> m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m[i] = scaled_mod_p(G, lp, v.reps[i]);
  sf.form.values.resize(v.size() * v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      const Mat2 comm = mat::sub(k, mat::mul(k, m[i], m[j]), mat::mul(k, m[j], m[i]));
      sf.form.values[i * v.size() + j] = static_cast<int>(mat::trace(k, mat::mul(k, beta_bar, comm)));
    }
  sf.radical = sf.form.radical();

  const SubgroupPtr flag = conjugate(ctx.borel, element_of(G, orbit.frame));
  sf.h_beta = product(ctx.k_l, intersection(flag, ctx.k_lp));
  std::vector<char> seen(v.size(), 0);
  for (Elem h : sf.h_beta->elements()) {
    const std::size_t c = v.coset(h);
    if (!seen[c]) {
      seen[c] = 1;
      sf.h_image.push_back(c);
    }
  }
  sf.h_isotropic = true;
  for (std::size_t x : sf.h_image)
    for (std::size_t y : sf.h_image) sf.h_isotropic = sf.h_isotropic && sf.form.at(x, y) == 0;
  sf.h_maximal = sf.h_image.size() * sf.h_image.size() == v.size() * sf.radical.size();
  sf.h_normal_in_stabilizer = is_normal_in(*sf.h_beta, *stabilizer(ctx, orbit));
  return sf;
}

std::vector<LinearChar> stable_extensions(const LevelContext& ctx, const OrbitDescriptor& orbit, const SplitForm& sf) {
  const LinearChar psi = orbit_character(ctx, orbit);
  const SubgroupPtr a = unit_algebra(ctx.group, orbit.beta_hat);
  std::vector<LinearChar> out;
  for (auto& ext : linear_extensions(sf.h_beta, psi))
    if (is_stable_under(ext, a->generators())) out.push_back(std::move(ext));
  return out;
}

std::vector<std::vector<std::size_t>> conjugation_orbits(const std::vector<LinearChar>& chars, std::span<const Elem> gens) {
  if (chars.empty()) return {};
  const MatrixGroup& G = chars.front().domain->group();
  auto find = [&](const std::vector<Complex>& values) {
    for (std::size_t j = 0; j < chars.size(); ++j)
      if (max_abs_diff(chars[j].values, values) < kTolerance) return j;
    throw std::logic_error("conjugation_orbits: set of characters is not closed under conjugation");
  };
  std::vector<char> seen(chars.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit{i};
    seen[i] = 1;
    for (std::size_t head = 0; head < orbit.size(); ++head)
      for (Elem g : gens) {
        const Elem g_inv = G.inv(g);
        const LinearChar& chi = chars[orbit[head]];
        std::vector<Complex> moved;
        moved.reserve(chi.values.size());
        for (Elem h : chi.domain->elements()) moved.push_back(chi(G.conj(g_inv, h)));
        const std::size_t j = find(moved);
        if (!seen[j]) {
          seen[j] = 1;
          orbit.push_back(j);
        }
      }
    out.push_back(std::move(orbit));
  }
  return out;
}

std::vector<IrrepRecord> odd_split(const LevelContext& ctx, const OrbitDescriptor& orbit, std::size_t extension_choice) {
  const MatrixGroup& G = *ctx.group;
  const SplitForm sf = split_form(ctx, orbit);
  if (!sf.h_isotropic || !sf.h_maximal) throw std::logic_error("odd_split: H_beta/K_l is not maximal isotropic");

  const SubgroupPtr a = unit_algebra(ctx.group, orbit.beta_hat);
  const SubgroupPtr a_kl = product(a, ctx.k_l);
  const SubgroupPtr a_h = product(a, sf.h_beta);
  const SubgroupPtr meet = intersection(sf.h_beta, a_kl);
  const Quotient top = quotient(a_h, sf.h_beta);
  const AbelianCharTable omegas = abelian_chars(top);

  // Extensions to H_beta up to T(psi_beta)-conjugacy. A class containing an
  // O[beta]^x-stable member is a single K_l'-orbit and takes the glued
  // construction. For q = 2 there can also be classes without one (type
  // (3'), where O[beta]^x swaps components of Ind_{K_l}^{K_l'} psi_beta);
  // those are induced from their stabilizer in T(psi_beta).
  const auto all = linear_extensions(sf.h_beta, orbit_character(ctx, orbit));
  std::vector<Elem> t_gens(a->generators().begin(), a->generators().end());
  t_gens.insert(t_gens.end(), ctx.k_lp->generators().begin(), ctx.k_lp->generators().end());
  const auto classes = conjugation_orbits(all, t_gens);

  std::vector<std::size_t> stable_rep, other_rep;
  for (const auto& cls : classes) {
    const auto it = std::find_if(cls.begin(), cls.end(), [&](std::size_t i) { return is_stable_under(all[i], a->generators()); });
    (it != cls.end() ? stable_rep : other_rep).push_back(it != cls.end() ? *it : cls.front());
  }
  const auto q = static_cast<std::size_t>(ctx.q());
  if (stable_rep.empty() || stable_rep.size() > q * q)
    throw std::logic_error("odd_split: found " + std::to_string(stable_rep.size()) +
                           " classes of stable extensions, expected at most q^2 = " + std::to_string(q * q));

  std::vector<IrrepRecord> out;
  for (std::size_t i = 0; i < stable_rep.size(); ++i) {
    const LinearChar& first = all[stable_rep[i]];
    const auto second = linear_extensions(a_kl, restrict_to(first, meet));
    if (second.empty()) throw std::logic_error("odd_split: no extension to O[beta]^x K_l");
    const LinearChar third = glue(second[extension_choice % second.size()], first, a_h);
    if (!is_multiplicative(third)) throw std::logic_error("odd_split: glued character is not multiplicative");
    for (std::size_t w = 0; w < omegas.size(); ++w) {
      const LinearChar twisted = pointwise_product(lift_character(top, omegas, w), third);
      out.push_back(make_record(orbit.label() + "/ext" + std::to_string(i) + "/omega" + std::to_string(w), twisted,
                                ctx.classes));
    }
  }
  if (!other_rep.empty()) {
    const SubgroupPtr t = stabilizer(ctx, orbit);
    const Quotient over_h = quotient(t, sf.h_beta);
    for (std::size_t i = 0; i < other_rep.size(); ++i) {
      const LinearChar& chi = all[other_rep[i]];
      std::vector<Elem> gens(sf.h_beta->generators().begin(), sf.h_beta->generators().end());
      for (Elem x : over_h.reps) {
        const Elem x_inv = G.inv(x);
        bool fixed = true;
        for (Elem h : chi.domain->elements())
          if (std::abs(chi(G.conj(x_inv, h)) - chi(h)) > kTolerance) {
            fixed = false;
            break;
          }
        if (fixed) gens.push_back(x);
      }
      const SubgroupPtr stab = Subgroup::closure(ctx.group, gens);
      const auto exts = linear_extensions(stab, chi);
      if (exts.size() * sf.h_beta->order() != stab->order())
        throw std::logic_error("odd_split: stabilizer of an extension has non-linear constituents");
      for (std::size_t j = 0; j < exts.size(); ++j) {
        IrrepRecord rec = make_record(orbit.label() + "/orbit" + std::to_string(i) + "/ext" + std::to_string(j),
                                      exts[j], ctx.classes);
        if (std::abs(inner(rec.chi, rec.chi) - 1.0) > kTolerance)
          throw std::logic_error("odd_split: induced character from a stabilizer is reducible");
        out.push_back(std::move(rec));
      }
    }
  }
  require_distinct(out, "odd_split");
  return out;
}

// ---------------------------------------------------------- odd r, cuspidal

std::vector<LinearChar> cuspidal_base_extensions(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  const SubgroupPtr a = unit_algebra(ctx.group, orbit.beta_hat);
  const SubgroupPtr z1 = intersection(a, ctx.k_1);
  return linear_extensions(product(z1, ctx.k_l), orbit_character(ctx, orbit));
}

HeisenbergData heisenberg(const LevelContext& ctx, const OrbitDescriptor& orbit, const LinearChar& psi_tilde) {
  const MatrixGroup& G = *ctx.group;
  const int p = G.spec().p;
  HeisenbergData hd;
  const SubgroupPtr a = unit_algebra(ctx.group, orbit.beta_hat);
  hd.z1 = intersection(a, ctx.k_1);
  hd.inner = product(hd.z1, ctx.k_l);
  hd.outer = product(hd.z1, ctx.k_lp);
  hd.stabilizer = stabilizer(ctx, orbit);
  hd.psi_tilde = psi_tilde;
  if (hd.psi_tilde.domain->order() != hd.inner->order())
    throw std::invalid_argument("heisenberg: character is not defined on Z^1 K_l");

  const LinearChar psi = orbit_character(ctx, orbit);
  for (Elem z : hd.z1->elements())
    for (Elem k : ctx.k_lp->elements())
      if (std::abs(psi(G.commutator(G.inv(z), k)) - 1.0) > kTolerance)
        throw std::logic_error("heisenberg: psi_beta([z^-1, k]) != 1");

  const Quotient v = quotient(hd.outer, hd.inner);
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (coset_order(v, x) > static_cast<std::size_t>(p) || (x != v.identity() && coset_order(v, x) != static_cast<std::size_t>(p)))
      throw std::logic_error("heisenberg: Z^1 K_l' / Z^1 K_l is not elementary abelian");
    for (std::size_t y = 0; y < v.size(); ++y)
      if (v.mul(x, y) != v.mul(y, x)) throw std::logic_error("heisenberg: quotient is not abelian");
  }

  hd.form.p = p;
  hd.form.coset_reps = v.reps;
  hd.form.values.resize(v.size() * v.size());
  for (std::size_t x = 0; x < v.size(); ++x)
    for (std::size_t y = 0; y < v.size(); ++y)
      hd.form.values[x * v.size() + y] = root_exponent(hd.psi_tilde(G.commutator(v.reps[x], v.reps[y])), p);
  if (hd.form.radical().size() != 1) throw std::logic_error("heisenberg: degenerate form");

  // Greedy Lagrangian: adjoin the first vector orthogonal to everything so far.
  std::vector<std::size_t> w{v.identity()};
  for (std::size_t x = 0; x < v.size() && w.size() * w.size() < v.size(); ++x) {
    if (std::find(w.begin(), w.end(), x) != w.end()) continue;
    bool orthogonal = true;
    for (std::size_t y : w) orthogonal = orthogonal && hd.form.at(x, y) == 0;
    if (orthogonal) w = adjoin(v, w, x);
  }
  if (w.size() * w.size() != v.size()) throw std::logic_error("heisenberg: no Lagrangian found");

  std::vector<char> in_w(v.size(), 0);
  for (std::size_t x : w) in_w[x] = 1;
  std::vector<Elem> pre;
  for (Elem g : hd.outer->elements())
    if (in_w[v.coset(g)]) pre.push_back(g);
  hd.lagrangian = Subgroup::from_elements(ctx.group, std::move(pre));

  const auto lifts = linear_extensions(hd.lagrangian, hd.psi_tilde);
  if (lifts.empty()) throw std::logic_error("heisenberg: character does not extend to the Lagrangian");
  hd.eta = induced_representation(lifts.front(), hd.outer);
  return hd;
}

std::vector<MatrixRep> cyclic_extend(const MatrixRep& eta, const SubgroupPtr& t, std::uint64_t seed) {
  const MatrixGroup& G = t->group();
  const Quotient q = quotient(t, eta.domain);
  const std::size_t m = q.size();

  std::size_t gen = q.size();
  for (std::size_t x = 0; x < q.size() && gen == q.size(); ++x)
    if (coset_order(q, x) == m) gen = x;
  if (gen == q.size()) throw std::invalid_argument("cyclic_extend: T/U is not cyclic");
  const Elem tg = q.reps[gen];
  const Elem t_inv = G.inv(tg);

  std::vector<std::size_t> power_of(q.size());
  for (std::size_t j = 0, x = q.identity(); j < m; ++j, x = q.mul(x, gen)) power_of[x] = j;

  const auto d = static_cast<Eigen::Index>(eta.dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd a;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXcd x(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (Elem u : eta.domain->elements()) sum += eta(G.conj(tg, u)) * x * eta(u).adjoint();
    if (sum.norm() > 1e-6 * static_cast<double>(eta.domain->order())) {
      a = std::move(sum);
      break;
    }
  }
  if (a.size() == 0) throw std::logic_error("cyclic_extend: intertwiner vanished on every attempt");

  // a^m eta(t^m)^-1 commutes with eta, hence is scalar.
  const Eigen::MatrixXcd c_mat = matrix_power(a, m) * eta(G.pow(tg, m)).adjoint();
  const Complex c = c_mat(0, 0);
  if ((c_mat - c * Eigen::MatrixXcd::Identity(d, d)).norm() > 1e-6 * std::abs(c))
    throw std::logic_error("cyclic_extend: eta is not stable under T");
  a /= std::pow(c, 1.0 / static_cast<double>(m));

  std::vector<Eigen::MatrixXcd> a_pow(m);
  a_pow[0] = Eigen::MatrixXcd::Identity(d, d);
  for (std::size_t j = 1; j < m; ++j) a_pow[j] = a_pow[j - 1] * a;

  MatrixRep base{t, eta.dim, {}};
  std::vector<std::size_t> j_of(t->order());
  base.mats.reserve(t->order());
  for (std::size_t pos = 0; pos < t->order(); ++pos) {
    const Elem g = t->elements()[pos];
    const std::size_t j = power_of[q.coset_of_pos[pos]];
    j_of[pos] = j;
    const Elem u = G.mul(G.pow(t_inv, j), g);
    base.mats.push_back(a_pow[j] * eta(u));
  }
  if (base.homomorphism_defect() > kTolerance) throw std::logic_error("cyclic_extend: extension is not multiplicative");

  std::vector<MatrixRep> out;
  for (std::size_t k = 0; k < m; ++k) {
    MatrixRep ext{t, eta.dim, base.mats};
    for (std::size_t pos = 0; pos < t->order(); ++pos)
      ext.mats[pos] *= root_of_unity(static_cast<long long>(k * j_of[pos]), static_cast<long long>(m));
    out.push_back(std::move(ext));
  }
  return out;
}

std::vector<IrrepRecord> odd_cuspidal(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  if (ctx.r() % 2 == 0) throw std::invalid_argument("odd_cuspidal: wrong parity");
  if (orbit.type != OrbitType::cuspidal) throw std::invalid_argument("odd_cuspidal: orbit is not cuspidal");
  std::vector<IrrepRecord> out;
  const auto bases = cuspidal_base_extensions(ctx, orbit);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const HeisenbergData hd = heisenberg(ctx, orbit, bases[i]);
    const auto exts = cyclic_extend(hd.eta, hd.stabilizer);
    for (std::size_t j = 0; j < exts.size(); ++j)
      out.push_back(make_record(orbit.label() + "/tilde" + std::to_string(i) + "/eta" + std::to_string(j),
                                exts[j].character(), ctx.classes));
  }
  require_distinct(out, "odd_cuspidal");
  return out;
}

std::vector<IrrepRecord> construct(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  if (orbit.type == OrbitType::scalar) throw std::invalid_argument("construct: scalar orbits come from inflation");
  if (ctx.r() % 2 == 0) return even_case(ctx, orbit);
  if (orbit.type == OrbitType::cuspidal) return odd_cuspidal(ctx, orbit);
  return odd_split(ctx, orbit);
}

}  // namespace gl2reps
