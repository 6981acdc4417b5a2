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

#include "wumrsi/common/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wumrsi/common/error.hpp"

namespace wumrsi {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd &gram, const Eigen::VectorXd &rhs,
                              const std::vector<bool> &passive)
{
  const Eigen::Index n = gram.rows();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (passive[static_cast<std::size_t>(i)]) {
      idx.push_back(i);
    }
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (idx.empty()) {
    return out;
  }
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd g(k, k);
  Eigen::VectorXd r(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    r(a) = rhs(idx[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b) {
      g(a, b) = gram(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
  }
  const Eigen::VectorXd s = g.ldlt().solve(r);
  for (Eigen::Index a = 0; a < k; ++a) {
    out(idx[static_cast<std::size_t>(a)]) = s(a);
  }
  return out;
}

}  // namespace

Eigen::VectorXd nnls_gram(const Eigen::MatrixXd &gram, const Eigen::VectorXd &rhs, int max_iterations)
{
  const Eigen::Index n = gram.rows();
  if (gram.cols() != n || rhs.size() != n) {
    throw InvalidArgument("nnls: gram/rhs shape mismatch");
  }
  if (max_iterations <= 0) {
    max_iterations = static_cast<int>(30 * n + 30);
  }
  const double scale = std::max({gram.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff(),
                                 std::numeric_limits<double>::min()});
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(n);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = rhs - gram * x;

  int iter = 0;
  while (iter < max_iterations) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!passive[static_cast<std::size_t>(i)] && w(i) > best_w) {
        best_w = w(i);
        best = i;
      }
    }
    if (best < 0) {
      break;
    }
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd s = solve_passive(gram, rhs, passive);
    while (iter++ < max_iterations) {
      double alpha = std::numeric_limits<double>::infinity();
      bool feasible = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[static_cast<std::size_t>(i)] && s(i) <= 0.0) {
          feasible = false;
          const double denom = x(i) - s(i);
          if (denom > 0.0) {
            alpha = std::min(alpha, x(i) / denom);
          }
        }
      }
      if (feasible) {
        break;
      }
      if (!std::isfinite(alpha)) {
        alpha = 0.0;
      }
      x += alpha * (s - x);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[static_cast<std::size_t>(i)] && x(i) <= tol) {
          passive[static_cast<std::size_t>(i)] = false;
          x(i) = 0.0;
        }
      }
      s = solve_passive(gram, rhs, passive);
    }
    x = s;
    w = rhs - gram * x;
  }
  return x.cwiseMax(0.0);
}

Eigen::VectorXd nnls(const Eigen::MatrixXd &a, const Eigen::VectorXd &b)
{
  if (a.rows() != b.size()) {
    throw InvalidArgument("nnls: A/b shape mismatch");
  }
  return nnls_gram(a.transpose() * a, a.transpose() * b);
}

}  // namespace wumrsi
