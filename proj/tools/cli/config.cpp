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


#include "config.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

namespace wumrsi::cli {

namespace {

template <typename E>
using EnumNames = std::vector<std::pair<const char *, E>>;

const EnumNames<nuisance::ModeSelection> kSelection{{"rank-then-band", nuisance::ModeSelection::rank_then_band},
                                                    {"band-then-rank", nuisance::ModeSelection::band_then_rank}};
const EnumNames<mwf::InputKind> kInputKind{{"gre", mwf::InputKind::gre}, {"mrsi", mwf::InputKind::mrsi}};

// One description of every key, shared by the reader and the writers.

template <typename V>
void visit_acquisition(V &v, spectral::AcquisitionParams &a)
{
  v.field("bandwidth_hz", a.bandwidth_hz);
  v.field("n_points", a.n_points);
  v.field("te_ms", a.te_ms);
  v.field("field_tesla", a.field_tesla);
  v.field("larmor_mhz", a.larmor_mhz);
  v.field("ref_ppm", a.ref_ppm);
}

template <typename V>
void visit_sideband_draw(V &v, phantom::SidebandDrawConfig &s)
{
  v.field("min_components", s.min_components);
  v.field("max_components", s.max_components);
  v.field("min_offset_hz", s.min_offset_hz);
  v.field("max_offset_hz", s.max_offset_hz);
  v.field("min_frac", s.min_frac);
  v.field("max_frac", s.max_frac);
  v.field("min_decay_hz", s.min_decay_hz);
  v.field("max_decay_hz", s.max_decay_hz);
  v.field("mirrored", s.mirrored);
}

template <typename V>
void visit_sideband_augment(V &v, phantom::SidebandAugmentConfig &s)
{
  v.field("max_shift_hz", s.max_shift_hz);
  v.field("mirror_probability", s.mirror_probability);
  v.field("max_amp_frac", s.max_amp_frac);
}

template <typename V>
void visit_volume_phantom(V &v, phantom::VolumePhantomConfig &p)
{
  v.field("dims", p.dims);
  v.field("voxel_mm", p.voxel_mm);
  v.section("acquisition", [&] { visit_acquisition(v, p.acquisition); });
  v.field("brain_fill", p.brain_fill);
  v.field("skull_fill", p.skull_fill);
  v.field("water_amp_factor", p.water_amp_factor);
  v.field("water_damping_hz", p.water_damping_hz);
  v.field("skull_water_frac", p.skull_water_frac);
  v.field("metabolite_variation", p.metabolite_variation);
  v.field("sidebands", p.sidebands);
  v.section("sideband_draw", [&] { visit_sideband_draw(v, p.sideband_draw); });
  v.field("vary_sidebands", p.vary_sidebands);
  v.section("sideband_variation", [&] { visit_sideband_augment(v, p.sideband_variation); });
  v.field("lipid_amplitude", p.lipid_amplitude);
  v.field("lipid_leak", p.lipid_leak);
  v.field("lipid_damping_min", p.lipid_damping_min);
  v.field("lipid_damping_max", p.lipid_damping_max);
  v.field("noise_sigma", p.noise_sigma);
}

template <typename V>
void visit_sphere(V &v, qsm::SpherePhantomConfig &p)
{
  v.field("dims", p.dims);
  v.field("voxel_mm", p.voxel_mm);
  v.field("head_radius_mm", p.head_radius_mm);
  v.field("sphere_radius_mm", p.sphere_radius_mm);
  v.field("sphere_chi_ppm", p.sphere_chi_ppm);
  v.field("source_radius_mm", p.source_radius_mm);
  v.field("source_chi_ppm", p.source_chi_ppm);
  v.field("source_offset_mm", p.source_offset_mm);
  v.field("offset_hz", p.offset_hz);
  v.field("gradient_hz_per_mm", p.gradient_hz_per_mm);
  v.field("t2star_ms", p.t2star_ms);
  v.field("b0_tesla", p.b0_tesla);
  v.field("te_ms", p.te_ms);
  v.field("noise_sigma", p.noise_sigma);
}

template <typename V>
void visit_two_pool(V &v, mwf::TwoPoolPhantomConfig &p)
{
  v.field("dims", p.dims);
  v.field("voxel_mm", p.voxel_mm);
  v.field("mask_fill", p.mask_fill);
  v.field("mwf", p.mwf);
  v.field("t2s_fast_ms", p.t2s_fast_ms);
  v.field("t2s_slow_ms", p.t2s_slow_ms);
  v.field("s0", p.s0);
  v.field("snr", p.snr);
  v.field("te_ms", p.te_ms);
}

template <typename V>
void visit_pipeline(V &v, nuisance::PipelineConfig &p)
{
  v.section("hlsvd", [&] {
    v.field("rank", p.hlsvd.rank);
    v.field("band_center_ppm", p.hlsvd.band_center_ppm);
    v.field("band_halfwidth_ppm", p.hlsvd.band_halfwidth_ppm);
    v.field("hankel_rows", p.hlsvd.hankel_rows);
    v.field_enum("selection", p.hlsvd.selection, kSelection);
  });
  v.field("diag_target", p.diag_target);
  v.field("beta", p.beta);
  v.field("max_basis_columns", p.max_basis_columns);
  v.field("min_lipid_fraction", p.min_lipid_fraction);
}

template <typename V>
void visit_fit(V &v, fit::FitConfig &f)
{
  v.field("shift_bound_hz", f.shift_bound_hz);
  v.field("damping_max_hz", f.damping_max_hz);
  v.field("grid_step_hz", f.grid_step_hz);
  v.field("damping_grid", f.damping_grid);
  v.field("max_iterations", f.max_iterations);
  v.field("tolerance", f.tolerance);
  v.field("nonnegative", f.nonnegative);
  v.field("fwhm_peak_ppm", f.fwhm_peak_ppm);
}

template <typename V>
void visit_qsm(V &v, qsm::QsmConfig &q)
{
  v.field("quality_threshold", q.quality_threshold);
  v.field("closing_radius", q.closing_radius);
  v.field("t2star_ms", q.t2star_ms);
  v.field("b0_tesla", q.b0_tesla);
  v.section("vsharp", [&] {
    v.field("radii_mm", q.vsharp.radii_mm);
    v.field("tsvd", q.vsharp.tsvd);
  });
  v.section("ndi", [&] {
    v.field("iterations", q.ndi.iterations);
    v.field("lambda", q.ndi.lambda);
    v.field("initial_step", q.ndi.initial_step);
    v.field("max_halvings", q.ndi.max_halvings);
    v.field("b0_dir", q.ndi.b0_dir);
  });
}

template <typename V>
void visit_mwf(V &v, mwf::MwfConfig &m)
{
  v.field_enum("input_kind", m.input, kInputKind);
  v.field("tukey_alpha", m.tukey_alpha);
  v.field("last_te_ms", m.last_te_ms);
  v.field("rpca", m.rpca);
  v.section("rpca_config", [&] {
    auto &r = m.rpca_config;
    v.field("mu1", r.mu1);
    v.field("mu2", r.mu2);
    v.field("rho", r.rho);
    v.field("delta1", r.delta1);
    v.field("delta2", r.delta2);
    v.field("delta3", r.delta3);
    v.field("patch", r.patch);
    v.field("lambda_s", r.lambda_s);
    v.field("max_iterations", r.max_iterations);
  });
  v.section("bounds", [&] {
    v.field("fast_min_ms", m.bounds.fast_min_ms);
    v.field("fast_max_ms", m.bounds.fast_max_ms);
    v.field("slow_min_ms", m.bounds.slow_min_ms);
    v.field("slow_max_ms", m.bounds.slow_max_ms);
  });
}

template <typename V>
void visit_dataset(V &v, phantom::DatasetConfig &d)
{
  v.field("n_pairs", d.n_pairs);
  v.field("lipid_basis_size", d.lipid_basis_size);
  v.field("diag_target", d.diag_target);
  v.section("acquisition", [&] { visit_acquisition(v, d.acquisition); });
  v.section("draw", [&] {
    auto &t = d.draw;
    v.field("min_water_factor", t.min_water_factor);
    v.field("max_water_factor", t.max_water_factor);
    v.field("metabolite_scale_min", t.metabolite_scale_min);
    v.field("metabolite_scale_max", t.metabolite_scale_max);
    v.field("metabolite_damping_min", t.metabolite_damping_min);
    v.field("metabolite_damping_max", t.metabolite_damping_max);
    v.field("water_damping_min", t.water_damping_min);
    v.field("water_damping_max", t.water_damping_max);
    v.field("lipid_amp_max", t.lipid_amp_max);
    v.field("lipid_damping_min", t.lipid_damping_min);
    v.field("lipid_damping_max", t.lipid_damping_max);
    v.field("noise_sigma_max", t.noise_sigma_max);
    v.section("sidebands", [&] { visit_sideband_draw(v, t.sidebands); });
    v.section("augment", [&] { visit_sideband_augment(v, t.augment); });
  });
}

template <typename V>
void visit(V &v, RunConfig &c)
{
  v.field("seed", c.seed);
  v.field("threads", c.threads);
  v.field("out", c.out);
  v.field("max_flagged_ratio", c.max_flagged_ratio);
  v.section("simulate", [&] {
    v.field("kind", c.simulate.kind);
    v.field("components", c.simulate.components);
    v.section("mrsi", [&] { visit_volume_phantom(v, c.simulate.mrsi); });
    v.section("qsm_sphere", [&] { visit_sphere(v, c.simulate.qsm_sphere); });
    v.section("two_pool", [&] { visit_two_pool(v, c.simulate.two_pool); });
  });
  v.section("remove_nuisance", [&] {
    auto &r = c.remove_nuisance;
    v.field("input", r.input);
    v.field("method", r.method);
    v.field("subtract_file", r.subtract_file);
    v.field("truth", r.truth);
    v.field("window_lo_ppm", r.window_lo_ppm);
    v.field("window_hi_ppm", r.window_hi_ppm);
    v.field("full_axis", r.full_axis);
    v.section("pipeline", [&] { visit_pipeline(v, r.pipeline); });
  });
  v.section("fit", [&] {
    v.field("input", c.fit.input);
    v.field("glioma", c.fit.glioma);
    v.field("noise_sigma", c.fit.noise_sigma);
    v.section("fit", [&] { visit_fit(v, c.fit.fit); });
  });
  v.section("qsm", [&] {
    v.field("input", c.qsm.input);
    v.field("mask", c.qsm.mask);
    v.field("n_echoes", c.qsm.n_echoes);
    visit_qsm(v, c.qsm.qsm);
  });
  v.section("mwf", [&] {
    v.field("input", c.mwf.input);
    v.field("n_echoes", c.mwf.n_echoes);
    visit_mwf(v, c.mwf.mwf);
  });
  v.section("eval", [&] {
    auto &e = c.eval;
    v.field("mode", e.mode);
    v.field("a", e.a);
    v.field("b", e.b);
    v.field("mask", e.mask);
    v.field("name", e.name);
    v.field("difference", e.difference);
    v.field("methods", e.methods);
    v.field("external", e.external);
    v.section("benchmark", [&] {
      auto &b = e.benchmark;
      v.field("id", b.id);
      v.field("n_cases", b.n_cases);
      v.field("window_lo_ppm", b.window_lo_ppm);
      v.field("window_hi_ppm", b.window_hi_ppm);
      v.field("full_axis", b.full_axis);
      v.section("phantom", [&] { visit_volume_phantom(v, b.phantom); });
      v.section("pipeline", [&] { visit_pipeline(v, b.pipeline); });
    });
  });
  v.section("export_dataset", [&] { visit_dataset(v, c.export_dataset.dataset); });
}

// ---------------------------------------------------------------- reader

class Reader
{
 public:
  Reader(const YAML::Node &root, std::string source) : source_(std::move(source)) { frames_.push_back({root, "", {}}); }

  template <typename T>
  void field(const char *key, T &value)
  {
    Frame &f = frames_.back();
    f.known.insert(key);
    if (!f.node || !f.node.IsMap()) {
      return;
    }
    const YAML::Node n = std::as_const(f.node)[key];
    if (!n) {
      return;
    }
    try {
      read(n, value);
    } catch (const YAML::Exception &e) {
      fail(n, "bad value for '" + f.path + key + "': " + e.msg);
    } catch (const ConfigError &) {
      throw;
    }
  }

  template <typename E>
  void field_enum(const char *key, E &value, const EnumNames<E> &names)
  {
    std::string s;
    for (const auto &[name, e] : names) {
      if (e == value) {
        s = name;
      }
    }
    field(key, s);
    for (const auto &[name, e] : names) {
      if (s == name) {
        value = e;
        return;
      }
    }
    std::string allowed;
    for (const auto &[name, e] : names) {
      allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    }
    fail(std::as_const(frames_.back().node)[key], "'" + frames_.back().path + key + "' must be one of " + allowed);
  }

  template <typename F>
  void section(const char *key, F &&body)
  {
    Frame &f = frames_.back();
    f.known.insert(key);
    YAML::Node child;
    if (f.node && f.node.IsMap()) {
      const YAML::Node n = std::as_const(f.node)[key];
      if (n && !n.IsNull()) {
        if (!n.IsMap()) {
          fail(n, "'" + f.path + key + "' must be a mapping");
        }
        child = n;
      }
    }
    frames_.push_back({child, f.path + key + ".", {}});
    body();
    finish();
    frames_.pop_back();
  }

  void finish()
  {
    const Frame &f = frames_.back();
    if (!f.node || !f.node.IsMap()) {
      return;
    }
    for (auto it = f.node.begin(); it != f.node.end(); ++it) {
      const auto key = it->first.as<std::string>();
      if (f.known.count(key) == 0) {
        fail(it->first, "unknown key '" + f.path + key + "'");
      }
    }
  }

 private:
  struct Frame {
    YAML::Node node;
    std::string path;
    std::set<std::string> known;
  };

  [[noreturn]] void fail(const YAML::Node &n, const std::string &msg) const
  {
    std::ostringstream os;
    os << source_;
    if (n && n.Mark().line >= 0) {
      os << ":" << n.Mark().line + 1;
    }
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  template <typename T>
  void read(const YAML::Node &n, T &value)
  {
    value = n.as<T>();
  }
  void read(const YAML::Node &n, unsigned &value)
  {
    const auto x = n.as<long long>();
    if (x < 0) {
      fail(n, "expected a non-negative integer");
    }
    value = static_cast<unsigned>(x);
  }
  void read(const YAML::Node &n, std::size_t &value)
  {
    const auto x = n.as<long long>();
    if (x < 0) {
      fail(n, "expected a non-negative integer");
    }
    value = static_cast<std::size_t>(x);
  }
  void read(const YAML::Node &n, std::optional<double> &value)
  {
    if (n.IsNull()) {
      value.reset();
    } else {
      value = n.as<double>();
    }
  }
  void read(const YAML::Node &n, Dims3 &d)
  {
    std::array<std::size_t, 3> a{};
    read(n, a);
    d = {a[0], a[1], a[2]};
  }
  template <typename T>
  void read(const YAML::Node &n, std::array<T, 3> &a)
  {
    if (!n.IsSequence() || n.size() != 3) {
      fail(n, "expected a list of 3 values");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      read(n[i], a[i]);
    }
  }
  template <typename T>
  void read(const YAML::Node &n, std::vector<T> &v)
  {
    if (n.IsNull()) {
      v.clear();
      return;
    }
    if (!n.IsSequence()) {
      fail(n, "expected a list");
    }
    v.clear();
    for (const auto &e : n) {
      T x{};
      read(e, x);
      v.push_back(std::move(x));
    }
  }

  std::string source_;
  std::vector<Frame> frames_;
};

// ---------------------------------------------------------------- writers

std::string format_double(double x)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, r.ptr};
}

class YamlWriter
{
 public:
  YamlWriter() { out_ << YAML::BeginMap; }

  template <typename T>
  void field(const char *key, const T &value)
  {
    out_ << YAML::Key << key << YAML::Value;
    write(value);
  }

  template <typename E>
  void field_enum(const char *key, const E &value, const EnumNames<E> &names)
  {
    for (const auto &[name, e] : names) {
      if (e == value) {
        field(key, std::string(name));
      }
    }
  }

  template <typename F>
  void section(const char *key, F &&body)
  {
    out_ << YAML::Key << key << YAML::Value << YAML::BeginMap;
    body();
    out_ << YAML::EndMap;
  }

  std::string str()
  {
    out_ << YAML::EndMap;
    return std::string(out_.c_str()) + "\n";
  }

 private:
  void write(double x) { out_ << format_double(x); }
  void write(bool b) { out_ << (b ? "true" : "false"); }
  void write(const std::string &s) { out_ << YAML::DoubleQuoted << s; }
  void write(const std::optional<double> &x)
  {
    if (x) {
      write(*x);
    } else {
      out_ << YAML::Null;
    }
  }
  void write(const Dims3 &d) { write(std::array<std::size_t, 3>{d.nx, d.ny, d.nz}); }
  template <typename T>
  void write(const std::array<T, 3> &a)
  {
    out_ << YAML::Flow << YAML::BeginSeq;
    for (const auto &x : a) {
      write(x);
    }
    out_ << YAML::EndSeq;
  }
  template <typename T>
  void write(const std::vector<T> &v)
  {
    out_ << YAML::Flow << YAML::BeginSeq;
    for (const auto &x : v) {
      write(x);
    }
    out_ << YAML::EndSeq;
  }
  template <typename T>
  void write(const T &x)
  {
    out_ << x;
  }

  YAML::Emitter out_;
};

class JsonWriter
{
 public:
  JsonWriter() { stack_.push_back(&root_); }

  template <typename T>
  void field(const char *key, const T &value)
  {
    (*stack_.back())[key] = to_json(value);
  }

  template <typename E>
  void field_enum(const char *key, const E &value, const EnumNames<E> &names)
  {
    for (const auto &[name, e] : names) {
      if (e == value) {
        (*stack_.back())[key] = name;
      }
    }
  }

  template <typename F>
  void section(const char *key, F &&body)
  {
    auto &child = (*stack_.back())[key];
    child = nlohmann::ordered_json::object();
    stack_.push_back(&child);
    body();
    stack_.pop_back();
  }

  [[nodiscard]] const nlohmann::ordered_json &json() const { return root_; }

 private:
  static nlohmann::ordered_json to_json(const std::optional<double> &x)
  {
    return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
  }
  static nlohmann::ordered_json to_json(const Dims3 &d) { return {d.nx, d.ny, d.nz}; }
  template <typename T>
  static nlohmann::ordered_json to_json(const T &x)
  {
    return x;
  }

  nlohmann::ordered_json root_ = nlohmann::ordered_json::object();
  std::vector<nlohmann::ordered_json *> stack_;
};

}  // namespace

RunConfig parse_config(const std::string &text, const std::string &source)
{
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig cfg;
  if (!root || root.IsNull()) {
    return cfg;
  }
  if (!root.IsMap()) {
    throw ConfigError(source + ": top level must be a mapping");
  }
  Reader r(root, source);
  visit(r, cfg);
  r.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string dump_yaml(const RunConfig &cfg)
{
  RunConfig copy = cfg;
  YamlWriter w;
  visit(w, copy);
  return w.str();
}

std::string dump_json(const RunConfig &cfg)
{
  RunConfig copy = cfg;
  JsonWriter w;
  visit(w, copy);
  return w.json().dump(2);
}

}  // namespace wumrsi::cli
