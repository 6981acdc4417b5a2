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


#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using namespace wumrsi::cli;

template <typename T>
void apply(const std::optional<T> &flag, T &field)
{
  if (flag) {
    field = *flag;
  }
}

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  bool print_config = false;

  std::optional<std::string> input;
  std::optional<std::string> method;
  std::optional<std::string> subtract;
  std::optional<std::string> truth;
  std::optional<std::string> mask;
  std::optional<std::string> kind;
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::optional<std::string> mode;
  std::optional<std::string> name;
  std::optional<std::string> difference;
  std::vector<std::string> methods;
  std::vector<std::string> external;
  std::optional<std::size_t> n;
  std::optional<double> noise_sigma;
  std::optional<std::string> input_kind;
};

void override_config(const std::string &cmd, const Flags &f, RunConfig &cfg)
{
  apply(f.seed, cfg.seed);
  apply(f.threads, cfg.threads);
  apply(f.out, cfg.out);
  if (cmd == "simulate") {
    apply(f.kind, cfg.simulate.kind);
  } else if (cmd == "remove-nuisance") {
    apply(f.input, cfg.remove_nuisance.input);
    apply(f.method, cfg.remove_nuisance.method);
    apply(f.subtract, cfg.remove_nuisance.subtract_file);
    apply(f.truth, cfg.remove_nuisance.truth);
  } else if (cmd == "fit") {
    apply(f.input, cfg.fit.input);
    apply(f.noise_sigma, cfg.fit.noise_sigma);
  } else if (cmd == "qsm") {
    apply(f.input, cfg.qsm.input);
    apply(f.mask, cfg.qsm.mask);
  } else if (cmd == "mwf") {
    apply(f.input, cfg.mwf.input);
    if (f.input_kind) {
      try {
        cfg.mwf.mwf.input = wumrsi::mwf::parse_input_kind(*f.input_kind);
      } catch (const std::exception &e) {
        throw UsageError(e.what());
      }
    }
  } else if (cmd == "eval") {
    apply(f.mode, cfg.eval.mode);
    apply(f.a, cfg.eval.a);
    apply(f.b, cfg.eval.b);
    apply(f.mask, cfg.eval.mask);
    apply(f.name, cfg.eval.name);
    apply(f.difference, cfg.eval.difference);
    if (!f.methods.empty()) {
      cfg.eval.methods = f.methods;
    }
    if (!f.external.empty()) {
      cfg.eval.external = f.external;
    }
  } else if (cmd == "export-dataset") {
    apply(f.n, cfg.export_dataset.dataset.n_pairs);
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"wumrsi: water-unsuppressed MRSI processing on synthetic phantoms"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "YAML run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", f.seed, "root seed for every random stream");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", f.out, "output directory");
  app.add_flag("--print-config", f.print_config, "print the effective configuration and exit");

  auto *sim = app.add_subcommand("simulate", "simulate a phantom volume");
  sim->add_option("--kind", f.kind, "mrsi, qsm-sphere or mwf-two-pool");

  auto *rn = app.add_subcommand("remove-nuisance", "remove water, sidebands and lipids");
  rn->add_option("--input", f.input, "input spectral volume");
  rn->add_option("--method", f.method, "hlsvd-l2, modulus-l2 or subtract-file");
  rn->add_option("--subtract", f.subtract, "nuisance estimate for subtract-file");
  rn->add_option("--truth", f.truth, "metabolite truth; enables the NRMSE report");

  auto *fit = app.add_subcommand("fit", "fit a metabolite basis voxel by voxel");
  fit->add_option("--input", f.input, "cleaned spectral volume");
  fit->add_option("--noise-sigma", f.noise_sigma, "complex noise std (0 estimates it)");

  auto *qsm = app.add_subcommand("qsm", "susceptibility mapping from multi-echo phase");
  qsm->add_option("--input", f.input, "echo volume or time-domain spectral volume");
  qsm->add_option("--mask", f.mask, "brain mask");

  auto *mwf = app.add_subcommand("mwf", "myelin water fraction mapping");
  mwf->add_option("--input", f.input, "decay volume or time-domain spectral volume");
  mwf->add_option("--input-kind", f.input_kind, "gre or mrsi");

  auto *ev = app.add_subcommand("eval", "compare maps or benchmark nuisance removal");
  ev->add_option("--mode", f.mode, "compare or benchmark");
  ev->add_option("--a", f.a, "first map");
  ev->add_option("--b", f.b, "second map");
  ev->add_option("--mask", f.mask, "comparison mask");
  ev->add_option("--name", f.name, "report name");
  ev->add_option("--difference", f.difference, "absolute or percent");
  ev->add_option("--methods", f.methods, "benchmarked methods");
  ev->add_option("--external", f.external, "external estimates as tag=path");

  auto *ex = app.add_subcommand("export-dataset", "write a training dataset");
  ex->add_option("--n", f.n, "number of pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    if (!f.config.empty()) {
      cfg = load_config(f.config);
    }
    override_config(cmd, f, cfg);
  } catch (const std::exception &e) {
    std::cerr << "wumrsi: " << e.what() << "\n";
    return kExitUsage;
  }
  if (f.print_config) {
    std::cout << dump_yaml(cfg);
    return kExitOk;
  }
  return run_command(cmd, cfg, std::cout, std::cerr);
}
