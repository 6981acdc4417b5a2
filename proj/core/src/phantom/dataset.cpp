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

#include "wumrsi/phantom/dataset.hpp"

#include <fstream>
#include <string>

#include "json.hpp"

#include "wumrsi/common/error.hpp"
#include "wumrsi/common/parallel.hpp"
#include "wumrsi/spectral/fourier.hpp"

namespace wumrsi::phantom {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kMaxResample = 16;

void append_float32(std::vector<float> &out, const Eigen::VectorXcd &v)
{
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    out.push_back(static_cast<float>(v(k).real()));
    out.push_back(static_cast<float>(v(k).imag()));
  }
}

}  // namespace

nuisance::LipidOperator dataset_lipid_operator(const DatasetConfig &cfg)
{
  if (cfg.lipid_basis_size == 0) {
    throw InvalidArgument("dataset: lipid_basis_size must be positive");
  }
  const auto n = static_cast<Eigen::Index>(cfg.acquisition.n_points);
  Eigen::MatrixXcd basis(n, static_cast<Eigen::Index>(cfg.lipid_basis_size));
  for (std::size_t c = 0; c < cfg.lipid_basis_size; ++c) {
    Rng rng = substream(cfg.seed, "dataset.lipid_basis", c);
    const auto lines =
        draw_lipids(uniform(rng, 0.5, 1.5), cfg.draw.lipid_damping_min, cfg.draw.lipid_damping_max, rng);
    const Fid fid(synthesize(lines, cfg.acquisition), cfg.acquisition);
    basis.col(static_cast<Eigen::Index>(c)) = spectral::fid_to_spectrum(fid).bins();
  }
  auto factor = std::make_shared<const nuisance::LipidFactor>(nuisance::factorize_lipid_basis(basis));
  const auto tuned = nuisance::autotune_beta(*factor, cfg.diag_target);
  return {factor, tuned.beta};
}

TrainingPair generate_record(const DatasetConfig &cfg, const nuisance::LipidOperator &op, std::size_t index)
{
  for (int attempt = 0; attempt < kMaxResample; ++attempt) {
    Rng rng = substream(cfg.seed, "dataset.record", (static_cast<std::uint64_t>(index) << 8) | attempt);
    const PhantomSpec spec = draw_training_spec(cfg.draw, rng);
    try {
      return make_training_pair(spec, op, cfg.acquisition);
    } catch (const DegenerateEnergy &) {
      continue;
    }
  }
  throw NumericalError("dataset: record " + std::to_string(index) + " kept degenerating after resampling");
}

DatasetManifest export_dataset(const DatasetConfig &cfg, const fs::path &out_dir)
{
  cfg.acquisition.validate();
  cfg.draw.validate();
  const nuisance::LipidOperator op = dataset_lipid_operator(cfg);

  std::vector<std::vector<float>> payload(cfg.n_pairs);
  std::vector<double> energies(cfg.n_pairs);
  parallel_for(cfg.n_pairs, cfg.threads, [&](std::size_t i) {
    const TrainingPair p = generate_record(cfg, op, i);
    auto &buf = payload[i];
    buf.reserve(6 * cfg.acquisition.n_points);
    append_float32(buf, p.x1.bins());
    append_float32(buf, p.x2.bins());
    append_float32(buf, p.y_truth.bins());
    energies[i] = p.energy;
  });

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create directory " + out_dir.string() + ": " + ec.message());
  }
  const fs::path bin_path = out_dir / "pairs.bin";
  {
    std::ofstream out(bin_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open for writing: " + bin_path.string());
    }
    for (const auto &buf : payload) {
      out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out) {
      throw IoError("write failed: " + bin_path.string());
    }
  }

  DatasetManifest manifest{cfg.n_pairs, cfg.seed, cfg.acquisition, op.beta(), energies};
  json j;
  j["format"] = "wumrsi-pairs";
  j["version"] = 1;
  j["count"] = manifest.count;
  j["seed"] = manifest.seed;
  j["n_points"] = cfg.acquisition.n_points;
  j["records"] = {"x1", "x2", "y"};
  j["dtype"] = "float32";
  j["layout"] = "record-major, interleaved real/imag, little-endian";
  j["normalization"] = "divided by energy E = ||x1 - x2||";
  j["params"] = {{"bandwidth_hz", cfg.acquisition.bandwidth_hz},
                 {"te_ms", cfg.acquisition.te_ms},
                 {"larmor_mhz", cfg.acquisition.larmor_mhz},
                 {"ref_ppm", cfg.acquisition.ref_ppm},
                 {"field_tesla", cfg.acquisition.field_tesla},
                 {"lipid_beta", op.beta()},
                 {"lipid_basis_size", cfg.lipid_basis_size},
                 {"diag_target", cfg.diag_target},
                 {"max_water_factor", cfg.draw.max_water_factor},
                 {"noise_sigma_max", cfg.draw.noise_sigma_max},
                 {"lipid_amp_max", cfg.draw.lipid_amp_max}};
  j["energies"] = energies;
  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + manifest_path.string());
  }
  out << j.dump(2) << '\n';
  return manifest;
}

DatasetManifest read_manifest(const fs::path &dir)
{
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open: " + path.string());
  }
  try {
    json j;
    in >> j;
    DatasetManifest m;
    m.count = j.at("count").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.acquisition.n_points = j.at("n_points").get<std::size_t>();
    const auto &p = j.at("params");
    m.acquisition.bandwidth_hz = p.at("bandwidth_hz").get<double>();
    m.acquisition.te_ms = p.at("te_ms").get<double>();
    m.acquisition.larmor_mhz = p.at("larmor_mhz").get<double>();
    m.acquisition.ref_ppm = p.at("ref_ppm").get<double>();
    m.acquisition.field_tesla = p.at("field_tesla").get<double>();
    m.beta = p.at("lipid_beta").get<double>();
    m.energies = j.at("energies").get<std::vector<double>>();
    if (m.energies.size() != m.count) {
      throw IoError(path.string() + ": energies count differs from record count");
    }
    return m;
  } catch (const json::exception &e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<DatasetRecord> read_records(const fs::path &dir, const DatasetManifest &manifest)
{
  const fs::path path = dir / "pairs.bin";
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open: " + path.string());
  }
  const auto n = static_cast<Eigen::Index>(manifest.acquisition.n_points);
  const std::size_t per_record = 6 * static_cast<std::size_t>(n);
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != manifest.count * per_record * sizeof(float)) {
    throw IoError(path.string() + ": size does not match manifest count");
  }
  in.seekg(0);
  std::vector<float> buf(per_record);
  std::vector<DatasetRecord> records(manifest.count);
  for (auto &r : records) {
    in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(per_record * sizeof(float)));
    auto unpack = [&](std::size_t offset) {
      Eigen::VectorXcd v(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        v(k) = {buf[offset + 2 * static_cast<std::size_t>(k)], buf[offset + 2 * static_cast<std::size_t>(k) + 1]};
      }
      return v;
    };
    r.x1 = unpack(0);
    r.x2 = unpack(2 * static_cast<std::size_t>(n));
    r.y = unpack(4 * static_cast<std::size_t>(n));
  }
  return records;
}

}  // namespace wumrsi::phantom
