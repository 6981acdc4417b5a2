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

#include <filesystem>
#include <string>
#include <vector>

#include "wumrsi/eval/benchmark.hpp"
#include "wumrsi/eval/metrics.hpp"

namespace wumrsi::eval {

/// Writes <id>_<method>_nrmse.csv per report, <id>_summary.csv and
/// <id>_nrmse_box.svg. Returns the files written.
std::vector<std::filesystem::path> write_benchmark_report(const std::filesystem::path &dir,
                                                          const std::vector<EvalReport> &reports);

/// Writes <name>_bland_altman.csv (pairs) and <name>_bland_altman.svg.
std::vector<std::filesystem::path> write_bland_altman(const std::filesystem::path &dir, const std::string &name,
                                                      const BlandAltman &ba);

/// Box plot of several labelled series (finite values only).
[[nodiscard]] std::string svg_box_plot(const std::vector<std::string> &labels,
                                       const std::vector<std::vector<double>> &series, const std::string &y_label);

/// Bland-Altman scatter with bias and limit lines.
[[nodiscard]] std::string svg_bland_altman(const BlandAltman &ba, const std::string &title);

/// Replaces characters outside [A-Za-z0-9._-] so a tag can appear in a file name.
[[nodiscard]] std::string file_tag(const std::string &s);

}  // namespace wumrsi::eval
