#pragma once

#include <string>
#include <vector>

#include "cwm/linalg.hpp"

namespace cwm {

/// Fully observed covariates X (n x d) and a response y with a missingness
/// mask (true = missing). Values of y under the mask are ignored.
struct MissingDataset {
  Matrix X;
  Vector y;
  std::vector<bool> mask;
  /// d covariate names followed by the response name.
  std::vector<std::string> column_names;

  int n() const noexcept { return static_cast<int>(y.size()); }
  int d() const noexcept { return static_cast<int>(X.cols()); }
  int p() const noexcept { return d() + 1; }

  std::vector<int> missing_rows() const;
  std::vector<int> observed_rows() const;
  int n_missing() const;
  Vector observed_y() const;

  /// Throws ValidationError on any invariant violation.
  void validate() const;

  /// Copy keeping only the listed covariate columns (in that order).
  MissingDataset select_covariates(const std::vector<int>& columns) const;

  /// Row i as a joint vector (x_i, value).
  Vector joint_row(int i, double value) const;
};

/// Completed data: observed y where present and `fill` (one entry per
/// missing row, in row order) elsewhere.
Vector complete_response(const MissingDataset& data, const Vector& fill);

}  // namespace cwm
