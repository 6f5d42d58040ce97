#include "gl2reps/table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gl2reps {

double row_orthonormality_residual(const CharacterTable& table) {
  double worst = 0.0;
  const auto& rows = table.irreps;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i; j < rows.size(); ++j) {
      const Complex ip = inner(rows[i].chi, rows[j].chi);
      worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

double column_orthogonality_residual(const CharacterTable& table) {
  const auto& cc = *table.classes;
  const double order = static_cast<double>(cc.group->order());
  double worst = 0.0;
  for (std::size_t a = 0; a < cc.count(); ++a)
    for (std::size_t b = a; b < cc.count(); ++b) {
      Complex sum = 0.0;
      for (const auto& row : table.irreps) sum += row.chi.values[a] * std::conj(row.chi.values[b]);
      const double expected = a == b ? order / static_cast<double>(cc.sizes[a]) : 0.0;
      worst = std::max(worst, std::abs(sum - expected) * static_cast<double>(cc.sizes[a]) / order);
    }
  return worst;
}

int integral_degree(const ClassFunction& chi, double tol) {
  const Complex d = chi.at_identity();
  const double rounded = std::round(d.real());
  if (std::abs(d - Complex(rounded, 0.0)) > tol || rounded < 1.0)
    throw std::logic_error("character degree is not a positive integer");
  return static_cast<int>(rounded);
}

}  // namespace gl2reps
