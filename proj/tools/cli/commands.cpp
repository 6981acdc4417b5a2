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


#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "wumrsi/common/error.hpp"
#include "wumrsi/eval/report.hpp"
#include "wumrsi/fit/basis.hpp"
#include "wumrsi/fit/fit_volume.hpp"
#include "wumrsi/spectral/wmk.hpp"

#ifndef WUMRSI_VERSION
#define WUMRSI_VERSION "unknown"
#endif

namespace wumrsi::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Validation failures of user-supplied parameters are configuration errors.
template <typename F>
void checked(const std::string &what, F &&f)
{
  try {
    f();
  } catch (const InvalidArgument &e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::string require_path(const std::string &path, const std::string &what)
{
  if (path.empty()) {
    throw UsageError(what);
  }
  return path;
}

class Outputs
{
 public:
  Outputs(fs::path dir, CommandOutcome &outcome) : dir_(std::move(dir)), outcome_(outcome) {}

  fs::path operator()(const std::string &name)
  {
    outcome_.outputs.push_back(name);
    return dir_ / name;
  }

 private:
  fs::path dir_;
  CommandOutcome &outcome_;
};

double ratio(std::size_t part, std::size_t whole)
{
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

void check_flagged(CommandOutcome &o, const RunConfig &cfg, double flagged_ratio, std::ostream &log)
{
  o.summary["flagged_ratio"] = flagged_ratio;
  if (flagged_ratio > cfg.max_flagged_ratio) {
    log << "flagged ratio " << flagged_ratio << " exceeds " << cfg.max_flagged_ratio << "\n";
    o.exit_code = kExitFlagged;
  }
}

json finite_or_null(double x)
{
  return std::isfinite(x) ? json(x) : json(nullptr);
}

bool is_time_domain(const fs::path &path)
{
  return spectral::read_wmk(path).header.domain == spectral::WmkDomain::time;
}

Mask nonempty_or_all(const Mask &m)
{
  return count(m) > 0 ? m : Mask(m.dims(), m.voxel_mm(), 1);
}

}  // namespace

// ---------------------------------------------------------------- simulate

CommandOutcome cmd_simulate(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  Outputs file(out, o);
  const std::string &kind = cfg.simulate.kind;
  o.summary["kind"] = kind;
  if (kind == "mrsi") {
    auto p = cfg.simulate.mrsi;
    p.seed = cfg.seed;
    checked("simulate.mrsi", [&] { p.validate(); });
    const auto ph = phantom::simulate_volume(p, cfg.threads);
    spectral::write_spectral_volume(file("x1.wmk"), ph.total);
    if (cfg.simulate.components) {
      spectral::write_spectral_volume(file("w.wmk"), ph.water);
      spectral::write_spectral_volume(file("s.wmk"), ph.sidebands);
      spectral::write_spectral_volume(file("l.wmk"), ph.lipids);
      spectral::write_spectral_volume(file("m.wmk"), ph.metabolites);
    }
    spectral::write_mask(file("brain_mask.wmk"), ph.total.brain_mask(), "brain_mask");
    spectral::write_mask(file("skull_mask.wmk"), ph.total.skull_mask(), "skull_mask");
    o.summary["voxels"] = ph.total.n_voxels();
    o.summary["brain_voxels"] = count(ph.total.brain_mask());
    o.summary["skull_voxels"] = count(ph.total.skull_mask());
    json sb = json::array();
    for (const auto &c : ph.sideband_set) {
      sb.push_back({{"offset_hz", c.offset_hz},
                    {"amplitude_frac", c.amplitude_frac},
                    {"decay_hz", c.decay_hz},
                    {"phase_rad", c.phase_rad},
                    {"mirrored", c.mirrored}});
    }
    o.summary["sidebands"] = sb;
  } else if (kind == "qsm-sphere") {
    auto p = cfg.simulate.qsm_sphere;
    p.seed = cfg.seed;
    checked("simulate.qsm_sphere", [&] { p.validate(); });
    const auto ph = qsm::make_sphere_phantom(p);
    qsm::write_echo_volume(file("echoes.wmk"), ph.echoes, &ph.head);
    spectral::write_real_volume(file("chi_truth.wmk"), ph.chi_ppm, "chi_ppm", &ph.head);
    spectral::write_real_volume(file("local_field_truth.wmk"), ph.local_field_hz, "field_hz", &ph.head);
    spectral::write_real_volume(file("background_field.wmk"), ph.background_hz, "field_hz");
    spectral::write_mask(file("head_mask.wmk"), ph.head, "head_mask");
    spectral::write_mask(file("sphere_mask.wmk"), ph.sphere, "sphere_mask");
    o.summary["echoes"] = ph.echoes.n_echoes();
    o.summary["head_voxels"] = count(ph.head);
    o.summary["sphere_voxels"] = count(ph.sphere);
  } else if (kind == "mwf-two-pool") {
    auto p = cfg.simulate.two_pool;
    p.seed = cfg.seed;
    checked("simulate.two_pool", [&] { p.validate(); });
    const auto dv = mwf::make_two_pool_phantom(p);
    mwf::write_decay_volume(file("decay.wmk"), dv);
    Volume<double> truth(dv.dims(), dv.mask.voxel_mm(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t v = 0; v < truth.size(); ++v) {
      if (dv.mask[v] != 0) {
        truth[v] = p.mwf;
      }
    }
    spectral::write_real_volume(file("mwf_truth.wmk"), truth, "mwf", &dv.mask);
    o.summary["echoes"] = dv.n_echoes();
    o.summary["mask_voxels"] = count(dv.mask);
  } else {
    throw ConfigError("simulate.kind must be one of mrsi, qsm-sphere, mwf-two-pool (got '" + kind + "')");
  }
  log << "simulate (" << kind << "): wrote " << o.outputs.size() << " files to " << out.string() << "\n";
  return o;
}

// ---------------------------------------------------------------- remove-nuisance

CommandOutcome cmd_remove_nuisance(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  Outputs file(out, o);
  const auto &r = cfg.remove_nuisance;
  nuisance::NuisanceMethod method{};
  try {
    method = nuisance::parse_method(r.method);
  } catch (const InvalidArgument &e) {
    throw UsageError(std::string(e.what()) + " (expected hlsvd-l2, modulus-l2 or subtract-file)");
  }
  const auto input = require_path(r.input, "remove-nuisance needs an input volume (--input)");
  auto pcfg = r.pipeline;
  pcfg.threads = cfg.threads;
  checked("remove_nuisance.pipeline", [&] { pcfg.hlsvd.validate(); });
  if (method == nuisance::NuisanceMethod::external && r.subtract_file.empty()) {
    throw UsageError("subtract-file needs the nuisance estimate (--subtract PATH)");
  }

  const auto x1 = spectral::read_spectral_volume(input);
  const bool external = method == nuisance::NuisanceMethod::external;
  if (!external && x1.params().n_points <= 2 * static_cast<std::size_t>(pcfg.hlsvd.rank)) {
    throw ConfigError("remove_nuisance.pipeline.hlsvd.rank: " + std::to_string(pcfg.hlsvd.rank) +
                      " is too large for " + std::to_string(x1.params().n_points) + " time points");
  }
  const std::string tag = external ? "subtract_file" : nuisance::to_string(method);
  const auto res = [&] {
    if (!external) {
      return nuisance::classical_pipeline(x1, method, pcfg);
    }
    if (!fs::exists(r.subtract_file)) {
      throw IoError("subtract file not found: " + r.subtract_file);
    }
    const auto energies = spectral::read_wmk(r.subtract_file).energies;
    const auto y = spectral::read_spectral_volume(r.subtract_file);
    return nuisance::subtract_volume(x1, y, energies ? &*energies : nullptr);
  }();
  spectral::write_spectral_volume(file("metabolites.wmk"), res.metabolites);
  spectral::write_mask(file("flagged_mask.wmk"), res.flagged, "flagged");
  if (!res.failures.empty()) {
    std::ofstream f(file("failures.csv"));
    f << "voxel,x,y,z,message\n";
    for (const auto &fl : res.failures) {
      f << fl.voxel << "," << fl.coords[0] << "," << fl.coords[1] << "," << fl.coords[2] << ",\"" << fl.message
        << "\"\n";
    }
  }
  const std::size_t brain = count(x1.brain_mask());
  o.summary["method"] = tag;
  o.summary["processed"] = res.processed;
  o.summary["flagged"] = count(res.flagged);
  o.summary["failures"] = res.failures.size();
  if (method != nuisance::NuisanceMethod::external) {
    o.summary["beta"] = res.beta;
    o.summary["mean_abs_diag"] = res.mean_abs_diag;
  }

  if (!r.truth.empty()) {
    const auto truth = spectral::read_spectral_volume(r.truth);
    eval::BenchmarkConfig bc;
    bc.id = "remove_nuisance";
    bc.window_lo_ppm = r.window_lo_ppm;
    bc.window_hi_ppm = r.window_hi_ppm;
    bc.full_axis = r.full_axis;
    const auto cases = eval::benchmark_cases(x1.brain_mask(), x1.n_voxels());
    const auto report = eval::evaluate_cleaned(tag, res.metabolites, truth, cases, bc, &res.flagged);
    for (const auto &p : eval::write_benchmark_report(out, {report})) {
      o.outputs.push_back(p.filename().string());
    }
    o.summary["nrmse_mean_percent"] = finite_or_null(report.nrmse_mean);
    o.summary["nrmse_median_percent"] = finite_or_null(report.summary.median);
    o.summary["nrmse_window"] = report.window;
    log << "remove-nuisance (" << tag << "): mean NRMSE " << report.nrmse_mean << " % over "
        << report.summary.n << " voxels\n";
  }
  log << "remove-nuisance (" << tag << "): " << res.processed << " voxels, " << count(res.flagged)
      << " flagged\n";
  check_flagged(o, cfg, ratio(count(res.flagged), brain), log);
  return o;
}

// ---------------------------------------------------------------- fit

CommandOutcome cmd_fit(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  Outputs file(out, o);
  const auto &f = cfg.fit;
  const auto input = require_path(f.input, "fit needs an input volume (--input)");
  checked("fit.fit", [&] { f.fit.validate(); });
  if (f.noise_sigma < 0.0) {
    throw ConfigError("fit.noise_sigma must be non-negative");
  }
  const auto vol = spectral::read_spectral_volume(input);
  const auto basis = fit::default_basis(vol.params(), f.glioma);
  const auto maps = fit::fit_volume(vol, basis, f.fit, f.noise_sigma, cfg.threads);
  const Mask &brain = vol.brain_mask();

  std::ofstream csv(file("fit_summary.csv"));
  csv << "metabolite,n,mean_amplitude,median_crlb_percent\n";
  json mets = json::object();
  for (std::size_t j = 0; j < maps.names.size(); ++j) {
    const std::string tag = eval::file_tag(maps.names[j]);
    spectral::write_real_volume(file("amp_" + tag + ".wmk"), maps.amplitude[j], "amplitude", &brain);
    spectral::write_real_volume(file("crlb_" + tag + ".wmk"), maps.crlb_percent[j], "crlb_percent", &brain);
    const auto amp = eval::summarize(maps.amplitude[j].values());
    const auto crlb = eval::summarize(maps.crlb_percent[j].values());
    csv << maps.names[j] << "," << amp.n << "," << amp.mean << "," << crlb.median << "\n";
    mets[maps.names[j]] = {{"mean_amplitude", finite_or_null(amp.mean)},
                           {"median_crlb_percent", finite_or_null(crlb.median)}};
  }
  spectral::write_real_volume(file("snr.wmk"), maps.snr, "snr", &brain);
  spectral::write_real_volume(file("fwhm_ppm.wmk"), maps.fwhm_ppm, "fwhm_ppm", &brain);
  spectral::write_real_volume(file("shift_hz.wmk"), maps.shift_hz, "shift_hz", &brain);
  o.summary["fitted"] = maps.n_fitted;
  o.summary["failed"] = maps.n_failed;
  o.summary["metabolites"] = mets;
  o.summary["median_snr"] = finite_or_null(eval::summarize(maps.snr.values()).median);
  o.summary["median_fwhm_ppm"] = finite_or_null(eval::summarize(maps.fwhm_ppm.values()).median);
  log << "fit: " << maps.n_fitted << " voxels fitted, " << maps.n_failed << " failed\n";
  check_flagged(o, cfg, ratio(maps.n_failed, maps.n_fitted + maps.n_failed), log);
  return o;
}

// ---------------------------------------------------------------- qsm

CommandOutcome cmd_qsm(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  Outputs file(out, o);
  const auto &q = cfg.qsm;
  const auto input = require_path(q.input, "qsm needs a multi-echo input (--input)");
  qsm::EchoVolume ev;
  Mask mask;
  if (is_time_domain(input)) {
    const auto vol = spectral::read_spectral_volume(input);
    ev = qsm::fid_volume_to_echoes(vol, q.n_echoes);
    mask = nonempty_or_all(vol.brain_mask());
  } else {
    ev = qsm::read_echo_volume(input, &mask);
  }
  if (!q.mask.empty()) {
    mask = spectral::read_mask(q.mask);
  }
  const auto res = qsm::qsm_pipeline(ev, mask, q.qsm);

  spectral::write_real_volume(file("rss.wmk"), res.rss, "rss_magnitude");
  qsm::write_series(file("unwrapped.wmk"), res.unwrap.unwrapped, ev.te_ms, "unwrapped_phase");
  spectral::write_real_volume(file("quality.wmk"), res.unwrap.quality, "phase_quality", &res.refined.refined);
  spectral::write_real_volume(file("field.wmk"), res.field.field.values, "field_hz", &res.field.field.mask);
  spectral::write_real_volume(file("local_field.wmk"), res.local_field.values, "field_hz", &res.local_field.mask);
  spectral::write_real_volume(file("chi.wmk"), res.chi().chi, "chi_ppm", &res.final_mask);
  spectral::write_mask(file("final_mask.wmk"), res.final_mask, "final_mask");
  {
    std::ofstream f(file("ndi_objective.csv"));
    f << "step,objective\n" << std::setprecision(17);
    for (std::size_t i = 0; i < res.ndi.objective.size(); ++i) {
      f << i << "," << res.ndi.objective[i] << "\n";
    }
  }
  std::vector<double> chi_in;
  for (std::size_t v = 0; v < res.final_mask.size(); ++v) {
    if (res.final_mask[v] != 0) {
      chi_in.push_back(res.chi().chi[v]);
    }
  }
  const auto s = eval::summarize(chi_in);
  o.summary["echoes"] = ev.n_echoes();
  o.summary["regions"] = res.unwrap.n_regions;
  o.summary["te_eff_ms"] = res.field.te_eff_ms;
  o.summary["final_mask_voxels"] = count(res.final_mask);
  o.summary["ndi_iterations"] = res.ndi.iterations;
  o.summary["ndi_stalled"] = res.ndi.stalled;
  o.summary["chi_mean_ppm"] = finite_or_null(s.mean);
  o.summary["chi_median_ppm"] = finite_or_null(s.median);
  log << "qsm: " << ev.n_echoes() << " echoes, " << count(res.final_mask) << " voxels, NDI "
      << res.ndi.iterations << " iterations\n";
  return o;
}

// ---------------------------------------------------------------- mwf

CommandOutcome cmd_mwf(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  Outputs file(out, o);
  const auto &m = cfg.mwf;
  const auto input = require_path(m.input, "mwf needs a multi-echo decay input (--input)");
  auto mcfg = m.mwf;
  mcfg.threads = cfg.threads;
  checked("mwf", [&] {
    mcfg.bounds.validate();
    mcfg.rpca_config.validate();
  });
  mwf::DecayVolume dv;
  if (is_time_domain(input)) {
    const auto vol = spectral::read_spectral_volume(input);
    dv = mwf::decay_from_echoes(qsm::fid_volume_to_echoes(vol, m.n_echoes), nonempty_or_all(vol.brain_mask()));
  } else {
    dv = mwf::read_decay_volume(input);
  }
  const auto res = mwf_pipeline(dv, mcfg);
  const Mask &mask = res.map.mask;
  spectral::write_real_volume(file("mwf.wmk"), res.map.mwf, "mwf", &mask);
  spectral::write_real_volume(file("t2s_fast.wmk"), res.map.t2s_fast_ms, "t2s_ms", &mask);
  spectral::write_real_volume(file("t2s_slow.wmk"), res.map.t2s_slow_ms, "t2s_ms", &mask);
  spectral::write_real_volume(file("amp_fast.wmk"), res.map.amp_fast, "amplitude", &mask);
  spectral::write_real_volume(file("amp_slow.wmk"), res.map.amp_slow, "amplitude", &mask);
  {
    std::ofstream f(file("stages.log"));
    for (const auto &st : res.stages) {
      f << "stage " << st << "\n";
    }
    f << "rpca patches " << res.rpca_patches << " unconverged " << res.rpca_unconverged << "\n";
  }
  std::size_t void_fits = 0;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v] != 0 && !std::isfinite(res.map.mwf[v])) {
      ++void_fits;
    }
  }
  const double mean = mwf::masked_mean(res.map.mwf, mask);
  o.summary["echoes_in"] = dv.n_echoes();
  o.summary["stages"] = res.stages;
  o.summary["mask_voxels"] = count(mask);
  o.summary["mwf_mean"] = finite_or_null(mean);
  o.summary["rpca_patches"] = res.rpca_patches;
  o.summary["rpca_unconverged"] = res.rpca_unconverged;
  o.summary["void_fits"] = void_fits;
  log << "mwf: mean " << mean << " over " << count(mask) << " voxels\n";
  check_flagged(o, cfg, ratio(void_fits, count(mask)), log);
  return o;
}

// ---------------------------------------------------------------- eval

namespace {

CommandOutcome eval_compare(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  const auto &e = cfg.eval;
  const auto a_path = require_path(e.a, "eval compare needs two maps (--a, --b)");
  const auto b_path = require_path(e.b, "eval compare needs two maps (--a, --b)");
  eval::Difference diff{};
  try {
    diff = eval::parse_difference(e.difference);
  } catch (const InvalidArgument &ex) {
    throw UsageError(ex.what());
  }
  const auto a = spectral::read_real_volume(a_path);
  const auto b = spectral::read_real_volume(b_path);
  require_same_grid(a, b, "eval compare");
  const Mask mask = e.mask.empty() ? Mask(a.dims(), a.voxel_mm(), 1) : spectral::read_mask(e.mask);
  require_same_grid(a, mask, "eval compare mask");
  std::vector<double> va;
  std::vector<double> vb;
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (mask[v] != 0) {
      va.push_back(a[v]);
      vb.push_back(b[v]);
    }
  }
  const auto ba = eval::bland_altman(va, vb, diff);
  for (const auto &p : eval::write_bland_altman(out, eval::file_tag(e.name), ba)) {
    o.outputs.push_back(p.filename().string());
  }
  o.summary["mode"] = "compare";
  o.summary["difference"] = eval::to_string(diff);
  o.summary["n"] = ba.n;
  o.summary["bias"] = ba.bias;
  o.summary["sd"] = ba.sd;
  o.summary["loa_low"] = ba.loa_low;
  o.summary["loa_high"] = ba.loa_high;
  log << "eval compare: bias " << ba.bias << ", limits [" << ba.loa_low << ", " << ba.loa_high << "], n "
      << ba.n << "\n";
  return o;
}

CommandOutcome eval_benchmark(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  const auto &e = cfg.eval;
  auto bc = e.benchmark;
  bc.phantom.seed = cfg.seed;
  bc.pipeline.threads = cfg.threads;
  checked("eval.benchmark", [&] {
    bc.validate();
    bc.pipeline.hlsvd.validate();
  });
  std::vector<nuisance::NuisanceMethod> methods;
  for (const auto &name : e.methods) {
    nuisance::NuisanceMethod m{};
    try {
      m = nuisance::parse_method(name);
    } catch (const InvalidArgument &ex) {
      throw UsageError(ex.what());
    }
    if (m == nuisance::NuisanceMethod::external) {
      throw UsageError("eval benchmark: subtract-file estimates go in eval.external as tag=path");
    }
    methods.push_back(m);
  }
  std::vector<eval::ExternalEstimate> external;
  for (const auto &item : e.external) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw UsageError("eval benchmark: external estimate '" + item + "' is not tag=path");
    }
    const std::string path = item.substr(eq + 1);
    external.push_back(
        {item.substr(0, eq), spectral::read_spectral_volume(path), spectral::read_wmk(path).energies});
  }
  const auto ph = phantom::simulate_volume(bc.phantom, cfg.threads);
  const auto reports = eval::method_benchmark(ph.total, ph.metabolites, methods, external, bc);
  for (const auto &p : eval::write_benchmark_report(out, reports)) {
    o.outputs.push_back(p.filename().string());
  }
  o.summary["mode"] = "benchmark";
  o.summary["benchmark_id"] = bc.id;
  json per = json::object();
  for (const auto &r : reports) {
    per[r.method_tag] = {{"nrmse_mean_percent", finite_or_null(r.nrmse_mean)},
                         {"nrmse_median_percent", finite_or_null(r.summary.median)},
                         {"cases", r.summary.n},
                         {"failed", r.n_failed},
                         {"seconds", r.seconds}};
    log << "eval benchmark: " << r.method_tag << " mean NRMSE " << r.nrmse_mean << " % (" << r.summary.n
        << " cases, " << r.n_failed << " failed)\n";
  }
  o.summary["methods"] = per;
  return o;
}

}  // namespace

CommandOutcome cmd_eval(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  if (cfg.eval.mode == "compare") {
    return eval_compare(cfg, out, log);
  }
  if (cfg.eval.mode == "benchmark") {
    return eval_benchmark(cfg, out, log);
  }
  throw UsageError("eval mode must be compare or benchmark (got '" + cfg.eval.mode + "')");
}

// ---------------------------------------------------------------- export-dataset

CommandOutcome cmd_export_dataset(const RunConfig &cfg, const fs::path &out, std::ostream &log)
{
  CommandOutcome o;
  auto d = cfg.export_dataset.dataset;
  d.seed = cfg.seed;
  d.threads = cfg.threads;
  checked("export_dataset", [&] {
    d.acquisition.validate();
    d.draw.validate();
  });
  const auto manifest = phantom::export_dataset(d, out / "dataset");
  o.outputs.push_back("dataset/manifest.json");
  o.outputs.push_back("dataset/pairs.bin");
  o.summary["count"] = manifest.count;
  o.summary["beta"] = manifest.beta;
  log << "export-dataset: " << manifest.count << " records in " << (out / "dataset").string() << "\n";
  return o;
}

// ---------------------------------------------------------------- dispatch

const std::vector<std::string> &command_names()
{
  static const std::vector<std::string> names{"simulate", "remove-nuisance", "fit",           "qsm",
                                              "mwf",      "eval",            "export-dataset"};
  return names;
}

Command find_command(const std::string &name)
{
  static const std::map<std::string, Command> table{
      {"simulate", cmd_simulate}, {"remove-nuisance", cmd_remove_nuisance},
      {"fit", cmd_fit},           {"qsm", cmd_qsm},
      {"mwf", cmd_mwf},           {"eval", cmd_eval},
      {"export-dataset", cmd_export_dataset}};
  const auto it = table.find(name);
  return it == table.end() ? nullptr : it->second;
}

namespace {

std::string utc_now()
{
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

int run_command(const std::string &name, const RunConfig &cfg, std::ostream &log, std::ostream &err)
{
  const Command cmd = find_command(name);
  if (cmd == nullptr) {
    err << "wumrsi: unknown command '" << name << "'\n";
    return kExitUsage;
  }
  const fs::path out = cfg.out;
  try {
    fs::create_directories(out);
    std::ofstream(out / "config.yaml") << dump_yaml(cfg);
  } catch (const std::exception &e) {
    err << "wumrsi " << name << ": cannot prepare output directory " << out.string() << ": " << e.what() << "\n";
    return kExitStage;
  }

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  CommandOutcome outcome;
  int code = kExitOk;
  std::string error;
  std::string stage;
  try {
    outcome = cmd(cfg, out, log);
    code = outcome.exit_code;
  } catch (const UsageError &e) {
    code = kExitUsage;
    error = e.what();
  } catch (const ConfigError &e) {
    code = kExitUsage;
    error = e.what();
  } catch (const StageError &e) {
    code = kExitStage;
    stage = e.stage();
    error = e.what();
  } catch (const std::exception &e) {
    code = kExitStage;
    error = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!error.empty()) {
    err << "wumrsi " << name << ": " << (stage.empty() ? "" : "[stage " + stage + "] ") << error << "\n";
  }

  json meta;
  meta["tool"] = "wumrsi";
  meta["version"] = WUMRSI_VERSION;
  meta["command"] = name;
  meta["seed"] = cfg.seed;
  meta["threads"] = cfg.threads;
  meta["started_utc"] = started;
  meta["wall_seconds"] = wall;
  meta["exit_code"] = code;
  meta["stage"] = stage.empty() ? json(nullptr) : json(stage);
  meta["error"] = error.empty() ? json(nullptr) : json(error);
  meta["outputs"] = outcome.outputs;
  meta["summary"] = outcome.summary;
  meta["config"] = json::parse(dump_json(cfg));
  std::ofstream(out / "run_meta.json") << meta.dump(2) << "\n";
  return code;
}

}  // namespace wumrsi::cli
