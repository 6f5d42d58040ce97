#include "gl2reps/driver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gl2reps {

namespace {

ClassesPtr classes_for(const SubgroupPtr& whole, const ClassifyOptions& options) {
  return options.classes_provider ? options.classes_provider(whole) : conjugacy_classes(whole);
}

void sort_rows(std::vector<IrrepRecord>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const IrrepRecord& a, const IrrepRecord& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.label < b.label;
  });
}

std::string lambda_label(std::size_t lambda) { return "lambda" + std::to_string(lambda); }

// Kuhn's augmenting paths on the bipartite graph {(i, j) : cost(i, j) <= bound}.
bool perfect_matching(const std::vector<std::vector<double>>& cost, double bound, std::vector<std::size_t>& match_row) {
  const std::size_t n = cost.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_col(n, none);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (cost[i][j] > bound || seen[j]) continue;
      seen[j] = 1;
      if (match_col[j] == none || augment(match_col[j])) {
        match_col[j] = i;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    seen.assign(n, 0);
    if (!augment(i)) return false;
  }
  match_row.assign(n, none);
  for (std::size_t j = 0; j < n; ++j) match_row[match_col[j]] = j;
  return true;
}

}  // namespace

std::string Certificate::deficit() const {
  std::ostringstream out;
  if (sum_dim_sq != group_order)
    out << "sum of squared degrees " << sum_dim_sq << " != |G| = " << group_order << "; ";
  if (irreps != classes) out << irreps << " irreducibles for " << classes << " classes; ";
  if (!(orthonormality < kTolerance)) out << "orthonormality residual " << orthonormality << "; ";
  if (!(degree_defect < kTolerance)) out << "chi(1) differs from the recorded degree by " << degree_defect << "; ";
  std::string s = out.str();
  if (s.size() >= 2) s.resize(s.size() - 2);
  return s;
}

Certificate certify(const CharacterTable& table) {
  Certificate c;
  c.group_order = table.group_order();
  c.irreps = table.irreps.size();
  c.classes = table.classes->count();
  for (const auto& row : table.irreps) {
    c.sum_dim_sq += static_cast<std::uint64_t>(row.dim) * static_cast<std::uint64_t>(row.dim);
    c.degree_defect = std::max(c.degree_defect, std::abs(row.chi.at_identity() - static_cast<double>(row.dim)));
  }
  c.orthonormality = row_orthonormality_residual(table);
  return c;
}

std::vector<IrrepRecord> inflate(const CharacterTable& prev, const ClassesPtr& target) {
  const MatrixGroup& G = target->group->group();
  const MatrixGroup& H = prev.classes->group->group();
  if (H.spec() != G.spec().at_level(G.spec().r - 1)) throw std::invalid_argument("inflate: levels do not match");
  std::vector<std::uint32_t> image(target->count());
  for (std::size_t c = 0; c < target->count(); ++c)
    image[c] = prev.classes->class_of(H.index_of(mat::reduce(G.ring(), G.matrix(target->reps[c]), G.spec().r - 1)));

  std::vector<IrrepRecord> out;
  out.reserve(prev.irreps.size());
  for (const auto& row : prev.irreps) {
    IrrepRecord rec;
    rec.label = "inflated(" + row.label + ")";
    rec.dim = row.dim;
    rec.chi.classes = target;
    rec.chi.values.reserve(target->count());
    for (std::uint32_t c : image) rec.chi.values.push_back(row.chi.values[c]);
    out.push_back(std::move(rec));
  }
  return out;
}

IrrepRecord twist(const IrrepRecord& rec, const UnitCharacters& units, std::size_t lambda) {
  IrrepRecord out;
  out.label = rec.label + "*" + lambda_label(lambda);
  out.dim = rec.dim;
  out.chi = mult_by_linear(rec.chi, [&](Residue u) { return units.value(lambda, u); });
  return out;
}

std::size_t merge_unique(std::vector<IrrepRecord>& into, std::vector<IrrepRecord> candidates) {
  std::size_t merged = 0;
  for (auto& cand : candidates) {
    const bool dup = std::any_of(into.begin(), into.end(), [&](const IrrepRecord& row) {
      return row.dim == cand.dim && max_abs_diff(row.chi.values, cand.chi.values) < kTolerance;
    });
    if (dup)
      ++merged;
    else
      into.push_back(std::move(cand));
  }
  return merged;
}

ClassifyResult classify(const RingSpec& spec, const ClassifyOptions& options) {
  if (!is_prime(spec.p) || spec.r < 1) throw std::invalid_argument("classify: bad ring spec");
  const GroupPtr group = MatrixGroup::enumerate(spec, options.cap);
  const SubgroupPtr whole = Subgroup::whole(group);
  const ClassesPtr classes = classes_for(whole, options);

  ClassifyResult result;
  result.table.spec = spec;
  result.table.classes = classes;

  if (spec.r == 1) {
    result.table = oracle_table(classes, options.oracle);
    for (std::size_t i = 0; i < result.table.irreps.size(); ++i)
      result.table.irreps[i].label = "level1[" + std::to_string(i) + "]";
  } else {
    const ClassifyResult prev = classify(spec.at_level(spec.r - 1), options);
    if (!prev.certificate.ok())
      throw std::runtime_error("classify: level " + std::to_string(spec.r - 1) + " is incomplete: " +
                               prev.certificate.deficit());
    const UnitCharacters units = unit_characters(group->ring());
    const LevelContext ctx = LevelContext::make(group, classes);

    std::vector<IrrepRecord> rows;
    std::size_t merged = 0;
    const auto inflated = inflate(prev.table, classes);
    for (std::size_t lambda = 0; lambda < units.count(); ++lambda) {
      std::vector<IrrepRecord> batch;
      for (const auto& row : inflated) batch.push_back(twist(row, units, lambda));
      merged += merge_unique(rows, std::move(batch));
    }
    for (const auto& orbit : orbit_reps(spec)) {
      auto built = construct(ctx, orbit);
      if (orbit.type == OrbitType::scalar_plus_nilpotent) {
        std::vector<IrrepRecord> twisted;
        for (const auto& row : built)
          for (std::size_t lambda = 1; lambda < units.count(); ++lambda) twisted.push_back(twist(row, units, lambda));
        built.insert(built.end(), std::make_move_iterator(twisted.begin()), std::make_move_iterator(twisted.end()));
      }
      merged += merge_unique(rows, std::move(built));
    }
    sort_rows(rows);
    result.table.irreps = std::move(rows);
    result.merged = merged;
  }
  result.certificate = certify(result.table);
  return result;
}

LyingOver lying_over(const LevelContext& ctx, const ClassFunction& chi) {
  const MatrixGroup& G = *ctx.group;
  const int lp = ctx.levels.l_prime;
  const Ring small(G.spec().at_level(lp));
  const std::size_t n = small.size();
  const std::size_t count = n * n * n * n;
  auto decode = [&](std::size_t idx) {
    Mat2 m;
    for (int j = 3; j >= 0; --j) {
      m.e[j] = static_cast<Residue>(idx % n);
      idx /= n;
    }
    return m;
  };
  auto encode = [&](const Mat2& m) {
    std::size_t idx = 0;
    for (int j = 0; j < 4; ++j) idx = idx * n + m.e[j];
    return idx;
  };

  // <Res chi, psi_beta'> for every beta'; K_l is abelian, so this is a Fourier coefficient.
  const auto kl = ctx.k_l->elements();
  std::vector<Complex> res(kl.size());
  std::vector<Mat2> shifted(kl.size());
  for (std::size_t i = 0; i < kl.size(); ++i) {
    res[i] = chi(kl[i]);
    shifted[i] = mat::sub(G.ring(), G.matrix(kl[i]), mat::identity(G.ring()));
  }
  std::vector<int> mult(count, 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const Mat2 beta = decode(idx);
    Complex sum = 0.0;
    for (std::size_t i = 0; i < kl.size(); ++i)
      sum += res[i] * std::conj(G.ring().additive_char(mat::trace(G.ring(), mat::mul(G.ring(), beta, shifted[i]))));
    sum /= static_cast<double>(kl.size());
    const double rounded = std::round(sum.real());
    mult[idx] = std::abs(sum - Complex(rounded, 0.0)) < 1e-6 ? static_cast<int>(rounded) : -1;
  }

  LyingOver out;
  std::vector<std::size_t> support;
  for (std::size_t idx = 0; idx < count; ++idx)
    if (mult[idx] != 0) support.push_back(idx);
  if (support.empty() || std::any_of(support.begin(), support.end(), [&](std::size_t i) { return mult[i] < 0; }))
    return out;

  std::vector<Mat2> gens;
  for (Elem g : G.standard_generators()) gens.push_back(mat::reduce(G.ring(), G.matrix(g), lp));
  std::vector<char> in_orbit(count, 0);
  std::vector<std::size_t> orbit{support.front()};
  in_orbit[support.front()] = 1;
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    const Mat2 x = decode(orbit[head]);
    for (const Mat2& g : gens) {
      const std::size_t y = encode(mat::mul(small, mat::mul(small, g, x), mat::inverse(small, g)));
      if (!in_orbit[y]) {
        in_orbit[y] = 1;
        orbit.push_back(y);
      }
    }
  }
  out.orbit_size = orbit.size();
  out.multiplicity = mult[support.front()];
  out.single_orbit = orbit.size() == support.size() &&
                     std::all_of(support.begin(), support.end(), [&](std::size_t i) { return in_orbit[i] != 0; });
  out.equal_multiplicity =
      std::all_of(support.begin(), support.end(), [&](std::size_t i) { return mult[i] == out.multiplicity; });
  out.type = classify_mod_p(small, decode(support.front()));
  return out;
}

OracleMatch match_tables(const CharacterTable& table, const CharacterTable& oracle) {
  OracleMatch out;
  const std::size_t n = table.irreps.size();
  const ConjClasses& a = *table.classes;
  const ConjClasses& b = *oracle.classes;
  if (n != oracle.irreps.size() || a.count() != b.count()) return out;
  const MatrixGroup& ga = a.group->group();
  const MatrixGroup& gb = b.group->group();
  if (ga.spec() != gb.spec()) return out;

  // Oracle column k corresponds to table column perm[k].
  std::vector<std::size_t> perm(b.count());
  std::vector<char> hit(a.count(), 0);
  for (std::size_t k = 0; k < b.count(); ++k) {
    perm[k] = a.class_of(ga.index_of(gb.matrix(b.reps[k])));
    if (hit[perm[k]]) return out;
    hit[perm[k]] = 1;
  }

  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  std::vector<double> levels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double worst = 0.0;
      for (std::size_t k = 0; k < b.count(); ++k)
        worst = std::max(worst, std::abs(table.irreps[i].chi.values[perm[k]] - oracle.irreps[j].chi.values[k]));
      cost[i][j] = worst;
      levels.push_back(worst);
    }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::size_t lo = 0, hi = levels.size() - 1;
  std::vector<std::size_t> best;
  if (!perfect_matching(cost, levels[hi], best)) return out;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    std::vector<std::size_t> trial;
    if (perfect_matching(cost, levels[mid], trial)) {
      hi = mid;
      best = std::move(trial);
    } else {
      lo = mid + 1;
    }
  }
  out.bijective = true;
  out.residual = levels[hi];
  out.assignment = std::move(best);
  return out;
}

bool VerifyReport::ok() const {
  bool good = certificate.ok() && column_residual < kTolerance && restriction_ok;
  if (oracle) good = good && oracle->bijective && oracle->residual < kTolerance;
  return good;
}

VerifyReport verify(const CharacterTable& table, const CharacterTable* oracle, bool check_restriction) {
  VerifyReport report;
  report.certificate = certify(table);
  report.column_residual = column_orthogonality_residual(table);
  const GroupPtr group = table.classes->group->group_ptr();
  if (check_restriction && group->spec().r >= 2) {
    report.restriction_checked = true;
    const LevelContext ctx = LevelContext::make(group, table.classes);
    for (const auto& row : table.irreps) {
      const LyingOver lo = lying_over(ctx, row.chi);
      if (!lo.single_orbit || !lo.equal_multiplicity) report.restriction_ok = false;
      report.type_mass[lo.type] += static_cast<std::uint64_t>(row.dim) * static_cast<std::uint64_t>(row.dim);
    }
  }
  if (oracle) report.oracle = match_tables(table, *oracle);
  return report;
}

}  // namespace gl2reps
