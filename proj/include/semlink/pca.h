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

#ifndef SEMLINK_PCA_H_
#define SEMLINK_PCA_H_

#include <cstddef>
#include <span>
#include <vector>

namespace semlink {

// Eigen-decomposition of a symmetric d x d row-major matrix by cyclic Jacobi
// rotations. Returns eigenvalues in descending order and the matching
// unit eigenvectors as rows of `vectors` (row-major, d x d).
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};
SymmetricEigen JacobiEigen(std::span<const double> matrix, std::size_t d);

struct PcaProjection {
  std::size_t dim = 0;
  std::vector<double> mean;         // dim
  std::vector<double> axes;         // k x dim, row-major, orthonormal rows
  std::vector<double> eigenvalues;  // k, descending

  std::size_t components() const { return eigenvalues.size(); }

  friend bool operator==(const PcaProjection&, const PcaProjection&) = default;
};

// Principal axes of the sample covariance (n - 1 denominator) of `rows`
// (row-major, num_rows x dim). Each axis has its largest-magnitude
// coordinate positive. Throws Error(kInvalidArgument) if k is 0 or exceeds
// dim, with fewer than two rows, or when every row is identical.
PcaProjection PcaFit(std::span<const double> rows, std::size_t dim,
                     std::size_t k);

// Projects row-major rows of width projection.dim onto the axes.
std::vector<double> PcaTransform(const PcaProjection& projection,
                                 std::span<const double> rows);

}  // namespace semlink

#endif  // SEMLINK_PCA_H_
