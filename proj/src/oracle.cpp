#include "gl2reps/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <omp.h>

namespace gl2reps {

namespace {

void accumulate_class(const ConjClasses& cc, const std::vector<std::vector<Elem>>& members, std::size_t i,
                      std::int32_t* out) {
  const MatrixGroup& G = cc.group->group();
  const std::size_t n = cc.count();
  for (Elem x : members[i]) {
    const Elem xi = G.inv(x);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = cc.class_of(G.mul(xi, cc.reps[k]));
      ++out[j * n + k];
    }
  }
}

}  // namespace

ClassAlgebra class_algebra(const ConjClasses& cc) {
  ClassAlgebra alg;
  alg.n = cc.count();
  alg.a.assign(alg.n * alg.n * alg.n, 0);
  const auto members = cc.members();
  const auto n = static_cast<long long>(alg.n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i)
    accumulate_class(cc, members, static_cast<std::size_t>(i), alg.a.data() + static_cast<std::size_t>(i) * alg.n * alg.n);
  return alg;
}

ClassAlgebra class_algebra_serial(const ConjClasses& cc) {
  ClassAlgebra alg;
  alg.n = cc.count();
  alg.a.assign(alg.n * alg.n * alg.n, 0);
  const auto members = cc.members();
  for (std::size_t i = 0; i < alg.n; ++i) accumulate_class(cc, members, i, alg.a.data() + i * alg.n * alg.n);
  return alg;
}

CharacterTable oracle_table(const ClassesPtr& classes, const OracleOptions& options) {
  const ConjClasses& cc = *classes;
  const std::size_t n = cc.count();
  if (n > options.max_classes) throw std::invalid_argument("oracle_table: too many conjugacy classes");
  const double order = static_cast<double>(cc.group->order());
  const std::size_t id = cc.identity_class();
  const ClassAlgebra alg = class_algebra(cc);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    // (M_i)_{jk} = a_ijk has right eigenvector (omega(C_k))_k with eigenvalue omega(C_i).
    Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const Complex c(gauss(rng), gauss(rng));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (const auto v = alg(i, j, k)) combo(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += c * static_cast<double>(v);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(combo);
    if (solver.info() != Eigen::Success) continue;
    const auto& lambda = solver.eigenvalues();
    double scale = 1.0, gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < lambda.size(); ++a) scale = std::max(scale, std::abs(lambda(a)));
    for (Eigen::Index a = 0; a < lambda.size(); ++a)
      for (Eigen::Index b = a + 1; b < lambda.size(); ++b) gap = std::min(gap, std::abs(lambda(a) - lambda(b)));
    if (gap < 1e-6 * scale) continue;  // eigenvalue collision: fresh coefficients

    CharacterTable table;
    table.spec = cc.group->group().spec();
    table.classes = classes;
    bool ok = true;
    for (Eigen::Index e = 0; e < lambda.size() && ok; ++e) {
      Eigen::VectorXcd w = solver.eigenvectors().col(e);
      // Two steps of inverse iteration polish the eigenvector to working precision.
      const Eigen::MatrixXcd shifted = combo - (lambda(e) * (1.0 + 1e-13)) *
                                                  Eigen::MatrixXcd::Identity(combo.rows(), combo.cols());
      const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
      for (int step = 0; step < 2; ++step) {
        Eigen::VectorXcd next = lu.solve(w);
        if (!next.allFinite() || next.norm() == 0.0) break;
        w = next / next.norm();
      }
      const Complex w_id = w(static_cast<Eigen::Index>(id));
      if (std::abs(w_id) < 1e-12) {
        ok = false;
        break;
      }
      w /= w_id;
      double norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) norm += std::norm(w(static_cast<Eigen::Index>(j))) / static_cast<double>(cc.sizes[j]);
      const double d = std::sqrt(order / norm);
      const double rounded = std::round(d);
      if (std::abs(d - rounded) > 1e-4 || rounded < 1.0) {
        ok = false;
        break;
      }
      IrrepRecord rec;
      rec.dim = static_cast<int>(rounded);
      rec.chi.classes = classes;
      rec.chi.values.resize(n);
      for (std::size_t j = 0; j < n; ++j)
        rec.chi.values[j] = w(static_cast<Eigen::Index>(j)) * rounded / static_cast<double>(cc.sizes[j]);
      table.irreps.push_back(std::move(rec));
    }
    if (!ok) continue;

    std::stable_sort(table.irreps.begin(), table.irreps.end(), [](const IrrepRecord& x, const IrrepRecord& y) {
      if (x.dim != y.dim) return x.dim < y.dim;
      for (std::size_t j = 0; j < x.chi.values.size(); ++j) {
        const double dr = x.chi.values[j].real() - y.chi.values[j].real();
        if (std::abs(dr) > 1e-6) return dr < 0;
        const double di = x.chi.values[j].imag() - y.chi.values[j].imag();
        if (std::abs(di) > 1e-6) return di < 0;
      }
      return false;
    });
    for (std::size_t i = 0; i < table.irreps.size(); ++i) table.irreps[i].label = "oracle[" + std::to_string(i) + "]";
    return table;
  }
  throw std::runtime_error("oracle_table: eigenvalue separation failed after all attempts");
}

OrbitPartition orbit_partition(std::size_t n, std::span<const std::function<std::size_t(std::size_t)>> actions) {
  OrbitPartition out;
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  out.orbit_of.assign(n, unset);
  for (std::size_t start = 0; start < n; ++start) {
    if (out.orbit_of[start] != unset) continue;
    const std::size_t id = out.orbits.size();
    std::vector<std::size_t> orbit{start};
    out.orbit_of[start] = id;
    for (std::size_t head = 0; head < orbit.size(); ++head)
      for (const auto& act : actions) {
        const std::size_t y = act(orbit[head]);
        if (y >= n) throw std::out_of_range("orbit_partition: action leaves the space");
        if (out.orbit_of[y] == unset) {
          out.orbit_of[y] = id;
          orbit.push_back(y);
        }
      }
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

}  // namespace gl2reps
