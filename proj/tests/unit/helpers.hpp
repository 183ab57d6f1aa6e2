#pragma once

#include <cmath>
#include <vector>

#include "cwm/linalg.hpp"
#include "cwm/rng.hpp"

namespace testing {

inline cwm::Matrix random_spd(int p, cwm::Rng& rng) {
  cwm::Matrix a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = rng.normal();
  }
  return a * a.transpose() + 0.5 * cwm::Matrix::Identity(p, p);
}

inline cwm::Vector random_vector(int p, cwm::Rng& rng, double scale = 1.0) {
  cwm::Vector v(p);
  for (int i = 0; i < p; ++i) v[i] = scale * rng.normal();
  return v;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace testing
