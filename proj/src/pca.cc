// Copyright 2026 The Semlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semlink/pca.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "semlink/status.h"

namespace semlink {

SymmetricEigen JacobiEigen(std::span<const double> matrix, std::size_t d) {
  if (matrix.size() != d * d) {
    throw Error(ErrorCode::kInvalidArgument, "jacobi: matrix is not d x d");
  }
  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * d + j]; };
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * d + j]; };

  double scale = 0;
  for (double x : a) scale += x * x;
  scale = std::sqrt(scale);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) off += A(p, q) * A(p, q);
    }
    if (std::sqrt(off) <= 1e-15 * scale || off == 0) break;

    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = A(p, q);
        if (apq == 0) continue;
        // Rotation that zeroes A(p, q).
        const double theta = (A(q, q) - A(p, p)) / (2 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (std::size_t r = 0; r < d; ++r) {
          const double arp = A(r, p);
          const double arq = A(r, q);
          A(r, p) = c * arp - s * arq;
          A(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < d; ++r) {
          const double apr = A(p, r);
          const double aqr = A(q, r);
          A(p, r) = c * apr - s * aqr;
          A(q, r) = s * apr + c * aqr;
        }
        for (std::size_t r = 0; r < d; ++r) {
          const double vrp = V(r, p);
          const double vrq = V(r, q);
          V(r, p) = c * vrp - s * vrq;
          V(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return A(i, i) > A(j, j);
  });
  SymmetricEigen out;
  out.values.resize(d);
  out.vectors.resize(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    out.values[k] = A(order[k], order[k]);
    for (std::size_t r = 0; r < d; ++r) out.vectors[k * d + r] = V(r, order[k]);
  }
  return out;
}

PcaProjection PcaFit(std::span<const double> rows, std::size_t dim,
                     std::size_t k) {
  if (dim == 0 || rows.size() % dim != 0) {
    throw Error(ErrorCode::kInvalidArgument, "pca: rows are not a multiple of dim");
  }
  const std::size_t n = rows.size() / dim;
  if (k == 0 || k > dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "pca: components must be in [1, " + std::to_string(dim) + "]");
  }
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "pca: need at least 2 rows");

  PcaProjection proj;
  proj.dim = dim;
  proj.mean.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) proj.mean[j] += rows[i * dim + j];
  }
  for (double& m : proj.mean) m /= static_cast<double>(n);

  std::vector<double> cov(dim * dim, 0.0);
  std::vector<double> centered(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) centered[j] = rows[i * dim + j] - proj.mean[j];
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = a; b < dim; ++b) cov[a * dim + b] += centered[a] * centered[b];
    }
  }
  bool degenerate = true;
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a; b < dim; ++b) {
      cov[a * dim + b] /= static_cast<double>(n - 1);
      cov[b * dim + a] = cov[a * dim + b];
      if (cov[a * dim + b] != 0) degenerate = false;
    }
  }
  if (degenerate) throw Error(ErrorCode::kInvalidArgument, "pca: all rows identical");

  SymmetricEigen eig = JacobiEigen(cov, dim);
  proj.axes.assign(eig.vectors.begin(), eig.vectors.begin() + k * dim);
  proj.eigenvalues.assign(eig.values.begin(), eig.values.begin() + k);
  for (std::size_t c = 0; c < k; ++c) {
    auto axis = std::span<double>(proj.axes).subspan(c * dim, dim);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < dim; ++j) {
      if (std::abs(axis[j]) > std::abs(axis[arg])) arg = j;
    }
    if (axis[arg] < 0) {
      for (double& x : axis) x = -x;
    }
    // Round-off can leave tiny negative eigenvalues on rank-deficient data.
    proj.eigenvalues[c] = std::max(0.0, proj.eigenvalues[c]);
  }
  return proj;
}

std::vector<double> PcaTransform(const PcaProjection& projection,
                                 std::span<const double> rows) {
  const std::size_t dim = projection.dim;
  const std::size_t k = projection.components();
  if (dim == 0 || rows.size() % dim != 0) {
    throw Error(ErrorCode::kSchemaMismatch, "pca: row width does not match projection");
  }
  const std::size_t n = rows.size() / dim;
  std::vector<double> out(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      double dot = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        dot += (rows[i * dim + j] - projection.mean[j]) * projection.axes[c * dim + j];
      }
      out[i * k + c] = dot;
    }
  }
  return out;
}

}  // namespace semlink
