/*
 * Copyright 2026 The wumrsi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>

namespace wumrsi {

/// Lawson-Hanson active-set solution of min ||A x - b|| subject to x >= 0,
/// expressed through the normal equations (gram = A^T A, rhs = A^T b).
/// Intended for the small column counts used by the fitters.
[[nodiscard]] Eigen::VectorXd nnls_gram(const Eigen::MatrixXd &gram, const Eigen::VectorXd &rhs,
                                        int max_iterations = 0);

[[nodiscard]] Eigen::VectorXd nnls(const Eigen::MatrixXd &a, const Eigen::VectorXd &b);

}  // namespace wumrsi
