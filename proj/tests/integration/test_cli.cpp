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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sys/wait.h>

#include <json.hpp>

#include "config.hpp"
#include "test_support.hpp"
#include "wumrsi/mwf/decay_volume.hpp"
#include "wumrsi/mwf/phantom.hpp"
#include "wumrsi/phantom/volume_phantom.hpp"
#include "wumrsi/qsm/echo_volume.hpp"
#include "wumrsi/qsm/phantom.hpp"
#include "wumrsi/spectral/wmk.hpp"

using namespace wumrsi;
namespace fs = std::filesystem;

namespace {

const std::string kSmallMrsi = "simulate:\n  mrsi:\n    dims: [8, 8, 4]\n";

int run_cli(const std::string &args, const fs::path &log)
{
  const std::string cmd = std::string(WUMRSI_CLI_PATH) + " " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_text(const fs::path &p, const std::string &text)
{
  std::ofstream(p) << text;
  return p;
}

nlohmann::json run_meta(const fs::path &dir)
{
  std::ifstream f(dir / "run_meta.json");
  return nlohmann::json::parse(f);
}

/// Relative path -> bytes of every output below dir. run_meta.json holds
/// timings and config.yaml the output path, so both are left out.
std::map<std::string, std::string> tree_bytes(const fs::path &dir)
{
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "run_meta.json" && e.path().filename() != "config.yaml") {
      out[fs::relative(e.path(), dir).string()] = test::read_bytes(e.path());
    }
  }
  return out;
}

}  // namespace

TEST(Config, UnknownKeyReportsLine)
{
  try {
    (void)cli::parse_config("seed: 1\nsimulate:\n  mrsi:\n    brain_fil: 0.5\n", "cfg.yaml");
    FAIL() << "expected ConfigError";
  } catch (const cli::ConfigError &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("cfg.yaml:4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("brain_fil"), std::string::npos) << msg;
  }
  EXPECT_THROW((void)cli::parse_config("threads: many\n"), cli::ConfigError);
  EXPECT_THROW((void)cli::parse_config("seed: [1\n"), cli::ConfigError);
}

TEST(Config, DumpRoundTrips)
{
  auto cfg = cli::parse_config("seed: 42\nfit:\n  noise_sigma: 0.25\n");
  EXPECT_EQ(cfg.seed, 42U);
  EXPECT_EQ(cfg.fit.noise_sigma, 0.25);
  const auto again = cli::parse_config(cli::dump_yaml(cfg));
  EXPECT_EQ(cli::dump_yaml(again), cli::dump_yaml(cfg));
  EXPECT_EQ(cli::dump_json(again), cli::dump_json(cfg));
}

TEST(Cli, ZeroVoxelsIsConfigError)
{
  test::TempDir dir("cli");
  const auto cfg = write_text(dir / "c.yaml", "simulate:\n  mrsi:\n    dims: [0, 8, 4]\n");
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "o").string() + " simulate", dir / "log"), 2);
  EXPECT_EQ(run_meta(dir / "o")["exit_code"], 2);
}

TEST(Cli, UsageExitCodes)
{
  test::TempDir dir("cli");
  const auto out = (dir / "o").string();
  EXPECT_EQ(run_cli("--help", dir / "log"), 0);
  EXPECT_EQ(run_cli("--out " + out + " frobnicate", dir / "log"), 2);
  EXPECT_EQ(run_cli("--out " + out + " simulate --bogus", dir / "log"), 2);
  EXPECT_EQ(run_cli("--out " + out + " remove-nuisance --input x --method wavelet", dir / "log"), 2);
  EXPECT_EQ(run_cli("--out " + out + " remove-nuisance --input x --method subtract-file", dir / "log"), 2);
  EXPECT_EQ(run_cli("--out " + out + " fit", dir / "log"), 2);
  // Unreadable input is a stage failure, not a usage error.
  EXPECT_EQ(run_cli("--out " + out + " fit --input " + (dir / "missing.wmk").string(), dir / "log"), 1);
}

TEST(Cli, SimulateIsDeterministic)
{
  test::TempDir dir("cli");
  const auto cfg = write_text(dir / "c.yaml", kSmallMrsi);
  const auto base = "--config " + cfg.string() + " --seed 5 --threads 2 ";
  ASSERT_EQ(run_cli(base + "--out " + (dir / "a").string() + " simulate", dir / "log"), 0);
  ASSERT_EQ(run_cli(base + "--out " + (dir / "b").string() + " simulate", dir / "log"), 0);
  const auto a = tree_bytes(dir / "a");
  EXPECT_TRUE(a.count("x1.wmk/data.bin"));
  EXPECT_TRUE(a.count("m.wmk/data.bin"));
  EXPECT_TRUE(a.count("brain_mask.wmk/data.bin"));
  const auto b = tree_bytes(dir / "b");
  ASSERT_EQ(a.size(), b.size());
  for (const auto &[name, bytes] : a) {
    EXPECT_TRUE(b.count(name) && b.at(name) == bytes) << name;
  }
  auto ca = cli::load_config(dir / "a" / "config.yaml");
  auto cb = cli::load_config(dir / "b" / "config.yaml");
  cb.out = ca.out;
  EXPECT_EQ(cli::dump_yaml(ca), cli::dump_yaml(cb));

  ASSERT_EQ(run_cli("--config " + cfg.string() + " --seed 5 --threads 1 --out " + (dir / "c").string() + " simulate",
                    dir / "log"),
            0);
  EXPECT_TRUE(test::read_bytes(dir / "c" / "x1.wmk" / "data.bin") == a.at("x1.wmk/data.bin"));
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --seed 6 --out " + (dir / "d").string() + " simulate", dir / "log"),
            0);
  EXPECT_FALSE(test::read_bytes(dir / "d" / "x1.wmk" / "data.bin") == a.at("x1.wmk/data.bin"));
}

TEST(Cli, RunMetaAndFlagOverrides)
{
  test::TempDir dir("cli");
  const auto cfg = write_text(dir / "c.yaml", kSmallMrsi + "seed: 3\nthreads: 1\n");
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --seed 11 --out " + (dir / "o").string() + " simulate",
                    dir / "log"),
            0);
  const auto meta = run_meta(dir / "o");
  for (const char *key : {"tool", "version", "command", "seed", "threads", "started_utc", "wall_seconds", "exit_code",
                          "outputs", "summary", "config"}) {
    EXPECT_TRUE(meta.contains(key)) << key;
  }
  EXPECT_EQ(meta["command"], "simulate");
  EXPECT_EQ(meta["seed"], 11);
  EXPECT_EQ(meta["exit_code"], 0);
  EXPECT_GE(meta["wall_seconds"].get<double>(), 0.0);
  const auto saved = cli::load_config(dir / "o" / "config.yaml");
  EXPECT_EQ(saved.seed, 11U);
  EXPECT_EQ(saved.simulate.mrsi.dims.nx, 8U);
}

TEST(Cli, SubtractFileWithTruthNuisance)
{
  test::TempDir dir("cli");
  phantom::VolumePhantomConfig pc;
  pc.dims = {8, 8, 4};
  pc.noise_sigma = 0.01;
  const auto ph = phantom::simulate_volume(pc);
  spectral::write_spectral_volume(dir / "x1.wmk", ph.total);
  spectral::write_spectral_volume(dir / "m.wmk", ph.metabolites);
  // y = w + s + l; noise stays in the cleaned output and in neither file.
  const Eigen::MatrixXcd y = ph.water.fids() + ph.sidebands.fids() + ph.lipids.fids();
  spectral::write_spectral_volume(dir / "y.wmk", ph.total.with_fids(y));

  const auto args = "--out " + (dir / "o").string() + " remove-nuisance --input " + (dir / "x1.wmk").string() +
                    " --method subtract-file --subtract " + (dir / "y.wmk").string() + " --truth " +
                    (dir / "m.wmk").string();
  ASSERT_EQ(run_cli(args, dir / "log"), 0) << test::read_bytes(dir / "log");
  const auto meta = run_meta(dir / "o");
  EXPECT_EQ(meta["summary"]["method"], "subtract_file");
  // The cleaned signal keeps the measurement noise, so truth is m + noise.
  spectral::write_spectral_volume(dir / "m_noisy.wmk", ph.total.with_fids(ph.total.fids() - y));
  const auto args2 = "--out " + (dir / "o2").string() + " remove-nuisance --input " + (dir / "x1.wmk").string() +
                     " --method subtract-file --subtract " + (dir / "y.wmk").string() + " --truth " +
                     (dir / "m_noisy.wmk").string();
  ASSERT_EQ(run_cli(args2, dir / "log"), 0);
  EXPECT_LT(run_meta(dir / "o2")["summary"]["nrmse_mean_percent"].get<double>(), 0.1);
  EXPECT_TRUE(fs::exists(dir / "o2" / "metabolites.wmk" / "data.bin"));
  EXPECT_TRUE(fs::exists(dir / "o2" / "remove_nuisance_summary.csv"));
}

TEST(Cli, SubtractFileWithEnergies)
{
  test::TempDir dir("cli");
  phantom::VolumePhantomConfig pc;
  pc.dims = {6, 6, 4};
  const auto ph = phantom::simulate_volume(pc);
  const Eigen::MatrixXcd y = ph.total.fids() - ph.metabolites.fids();
  // Network-style output: y normalized per voxel, energies stored alongside.
  std::vector<double> energies(ph.total.n_voxels(), 1.0);
  Eigen::MatrixXcd yn = y;
  for (Eigen::Index v = 0; v < y.cols(); ++v) {
    const double e = ph.total.fids().col(v).norm();
    if (e > 0.0) {
      energies[static_cast<std::size_t>(v)] = e;
      yn.col(v) /= e;
    }
  }
  spectral::write_spectral_volume(dir / "x1.wmk", ph.total);
  spectral::write_spectral_volume(dir / "m.wmk", ph.metabolites);
  spectral::write_spectral_volume(dir / "y.wmk", ph.total.with_fids(yn), spectral::WmkDomain::time, &energies);
  const auto args = "--out " + (dir / "o").string() + " remove-nuisance --input " + (dir / "x1.wmk").string() +
                    " --method subtract-file --subtract " + (dir / "y.wmk").string() + " --truth " +
                    (dir / "m.wmk").string();
  ASSERT_EQ(run_cli(args, dir / "log"), 0) << test::read_bytes(dir / "log");
  // float32 storage of y bounds the reachable accuracy.
  EXPECT_LT(run_meta(dir / "o")["summary"]["nrmse_mean_percent"].get<double>(), 0.1);
}

TEST(Cli, HlsvdOnWaterOnlyPhantomReportsResidual)
{
  test::TempDir dir("cli");
  const auto cfg = write_text(dir / "c.yaml",
                              "simulate:\n  components: true\n  mrsi:\n    dims: [8, 8, 4]\n    sidebands: false\n"
                              "    lipid_amplitude: 0\n");
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "sim").string() + " simulate", dir / "log"), 0);
  const auto args = "--out " + (dir / "o").string() + " remove-nuisance --input " +
                    (dir / "sim" / "x1.wmk").string() + " --method hlsvd-l2 --truth " +
                    (dir / "sim" / "m.wmk").string();
  ASSERT_EQ(run_cli(args, dir / "log"), 0) << test::read_bytes(dir / "log");
  const auto meta = run_meta(dir / "o");
  EXPECT_EQ(meta["summary"]["beta"], 0.0);
  EXPECT_LT(meta["summary"]["nrmse_mean_percent"].get<double>(), 5.0);
  EXPECT_TRUE(fs::exists(dir / "o" / "remove_nuisance_hlsvd_l2_nrmse.csv"));
  EXPECT_TRUE(fs::exists(dir / "o" / "remove_nuisance_nrmse_box.svg"));
}

TEST(Cli, OversizedRankIsConfigError)
{
  test::TempDir dir("cli");
  const auto cfg = write_text(dir / "c.yaml", kSmallMrsi + "remove_nuisance:\n  pipeline:\n    hlsvd:\n      rank: 300\n");
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "sim").string() + " simulate", dir / "log"), 0);
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "o").string() + " remove-nuisance --input " +
                        (dir / "sim" / "x1.wmk").string(),
                    dir / "log"),
            2);
}

TEST(Cli, VoidFitsGiveExitThree)
{
  test::TempDir dir("cli");
  mwf::TwoPoolPhantomConfig pc;
  pc.dims = {6, 6, 4};
  auto vol = mwf::make_two_pool_phantom(pc);
  for (auto &m : vol.magnitude) {
    for (auto &v : m.storage()) {
      v = 0.0;
    }
  }
  mwf::write_decay_volume(dir / "zero.wmk", vol);
  EXPECT_EQ(run_cli("--out " + (dir / "o").string() + " mwf --input " + (dir / "zero.wmk").string(), dir / "log"), 3)
      << test::read_bytes(dir / "log");
  EXPECT_EQ(run_meta(dir / "o")["exit_code"], 3);
  EXPECT_TRUE(fs::exists(dir / "o" / "mwf.wmk" / "data.bin"));
}

TEST(Cli, QsmWritesIntermediatesAndStageErrors)
{
  test::TempDir dir("cli");
  const auto cfg = write_text(dir / "c.yaml",
                              "simulate:\n  kind: qsm-sphere\n  qsm_sphere:\n    dims: [32, 32, 32]\n"
                              "    head_radius_mm: 26\n    sphere_radius_mm: 8\n    source_offset_mm: [0, 0, -40]\n"
                              "qsm:\n  ndi:\n    iterations: 30\n");
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "sim").string() + " simulate", dir / "log"), 0);
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "q").string() + " qsm --input " +
                        (dir / "sim" / "echoes.wmk").string(),
                    dir / "log"),
            0)
      << test::read_bytes(dir / "log");
  for (const char *f : {"rss.wmk", "unwrapped.wmk", "quality.wmk", "field.wmk", "local_field.wmk", "chi.wmk",
                        "final_mask.wmk"}) {
    EXPECT_TRUE(fs::exists(dir / "q" / f / "header.json")) << f;
  }
  EXPECT_TRUE(fs::exists(dir / "q" / "ndi_objective.csv"));
  EXPECT_EQ(run_meta(dir / "q")["summary"]["ndi_iterations"], 30);

  const auto head = spectral::read_mask(dir / "sim" / "head_mask.wmk");
  spectral::write_mask(dir / "empty.wmk", Mask(head.dims(), head.voxel_mm()), "mask");
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "e").string() + " qsm --input " +
                        (dir / "sim" / "echoes.wmk").string() + " --mask " + (dir / "empty.wmk").string(),
                    dir / "log"),
            1);
  EXPECT_EQ(run_meta(dir / "e")["stage"], "refine");
}

TEST(Cli, EvalIdenticalMapsHaveZeroBias)
{
  test::TempDir dir("cli");
  const Dims3 d{5, 4, 3};
  Volume<double> map(d, {1, 1, 1}, 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    map[i] = 0.01 * static_cast<double>(i);
  }
  spectral::write_real_volume(dir / "a.wmk", map, "chi_ppm");
  ASSERT_EQ(run_cli("--out " + (dir / "o").string() + " eval --mode compare --a " + (dir / "a.wmk").string() +
                        " --b " + (dir / "a.wmk").string() + " --name chi",
                    dir / "log"),
            0);
  const auto s = run_meta(dir / "o")["summary"];
  EXPECT_EQ(s["bias"], 0.0);
  EXPECT_EQ(s["loa_low"], 0.0);
  EXPECT_EQ(s["loa_high"], 0.0);
  EXPECT_EQ(s["n"], 60);
  EXPECT_TRUE(fs::exists(dir / "o" / "chi_bland_altman.csv"));
  EXPECT_TRUE(fs::exists(dir / "o" / "chi_bland_altman.svg"));
}

TEST(Cli, ExportDatasetWritesManifest)
{
  test::TempDir dir("cli");
  ASSERT_EQ(run_cli("--seed 2 --out " + (dir / "o").string() + " export-dataset --n 10", dir / "log"), 0)
      << test::read_bytes(dir / "log");
  std::ifstream f(dir / "o" / "dataset" / "manifest.json");
  const auto manifest = nlohmann::json::parse(f);
  EXPECT_EQ(manifest["count"], 10);
  EXPECT_EQ(manifest["energies"].size(), 10U);
  EXPECT_EQ(fs::file_size(dir / "o" / "dataset" / "pairs.bin"), 10U * 3U * 451U * 8U);
}

TEST(Cli, MwfOnTwoPoolPhantom)
{
  test::TempDir dir("cli");
  const auto cfg = write_text(dir / "c.yaml", "simulate:\n  kind: mwf-two-pool\n");
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "sim").string() + " simulate", dir / "log"), 0);
  ASSERT_EQ(run_cli("--out " + (dir / "o").string() + " mwf --input-kind mrsi --input " +
                        (dir / "sim" / "decay.wmk").string(),
                    dir / "log"),
            0)
      << test::read_bytes(dir / "log");
  EXPECT_NEAR(run_meta(dir / "o")["summary"]["mwf_mean"].get<double>(), 0.15, 0.02);
  EXPECT_TRUE(fs::exists(dir / "o" / "stages.log"));
}

TEST(Cli, FitOnSimulatedMetabolites)
{
  test::TempDir dir("cli");
  phantom::VolumePhantomConfig pc;
  pc.dims = {4, 4, 2};
  pc.brain_fill = 0.9;
  pc.skull_fill = 1.0;
  const auto ph = phantom::simulate_volume(pc);
  spectral::write_spectral_volume(dir / "m.wmk", ph.metabolites);
  ASSERT_EQ(run_cli("--out " + (dir / "o").string() + " fit --noise-sigma 0.01 --input " + (dir / "m.wmk").string(),
                    dir / "log"),
            0)
      << test::read_bytes(dir / "log");
  const auto meta = run_meta(dir / "o");
  EXPECT_EQ(meta["summary"]["fitted"], count(ph.metabolites.brain_mask()));
  EXPECT_TRUE(fs::exists(dir / "o" / "amp_NAA.wmk" / "data.bin"));
  EXPECT_TRUE(fs::exists(dir / "o" / "fit_summary.csv"));
}
