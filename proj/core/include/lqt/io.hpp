// Copyright 2026 The lqt-bench Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lqt/bayesopt.hpp"
#include "lqt/data_driven.hpp"
#include "lqt/datagen.hpp"
#include "lqt/statespace.hpp"

namespace lqt::io {

/// Columns t, x1.., xhat1.., y1.., yhat1.., u1.., r1.., cost, cum_cost.
/// Optional signals get columns only when the first record carries them.
void write_trace_csv(const std::filesystem::path& path,
                     const SimulationTrace& trace);

struct DatasetMeta {
  std::uint64_t seed = 0;
  std::uint64_t model_hash = 0;
  ProbingNoiseConfig noise;
  Vector x0;
  Vector r0;
  Matrix F;
};

/// CSV `t,u1..um,y1..yp` plus `<path>.json` with seed, noise settings, model
/// hash and reference.
void write_dataset(const std::filesystem::path& csv, const IoDataset& data,
                   const DatasetMeta& meta);

/// Reads the CSV and rebuilds r(t) from the sidecar reference (F, r0).
IoDataset read_dataset(const std::filesystem::path& csv);
DatasetMeta read_dataset_meta(const std::filesystem::path& csv);

/// First line `# {json header}`, then d rows of comma-separated %.17g.
void write_kernel(const std::filesystem::path& path, const KernelMatrix& kernel,
                  const TrainingResult* training = nullptr);
KernelMatrix read_kernel(const std::filesystem::path& path);

/// {"Q": [...], "R": [...], "gamma": 0.99}; Q and R may be diagonals or
/// full nested arrays.
CostWeights read_weights(const std::filesystem::path& path,
                         double default_gamma = 0.99);
void write_weights(const std::filesystem::path& path, const CostWeights& w);

/// {"A": [[...]], "B": [[...]], "C": [[...]]}
StateSpaceModel read_model(const std::filesystem::path& path);

/// {"lower": [...], "upper": [...]}
SearchDomain read_bounds(const std::filesystem::path& path);

/// Columns iter, theta_1.., fitness.
void write_bo_history_csv(const std::filesystem::path& path,
                          const BoResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace lqt::io
