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

#include "lqt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "json_matrix.hpp"

namespace lqt::io {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  return in;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void put_values(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << fmt(v(i));
}

void put_names(std::ostream& os, const char* stem, Eigen::Index count) {
  for (Eigen::Index i = 1; i <= count; ++i) os << ',' << stem << i;
}

std::vector<double> split_doubles(const std::string& line, const fs::path& path) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kIo, "malformed number '" + cell + "' in " +
                                      path.string());
    }
  }
  return out;
}

json parse_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, path.string() + ": " + e.what());
  }
}

fs::path sidecar(const fs::path& csv) {
  fs::path s = csv;
  s += ".json";
  return s;
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const fs::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_trace_csv(const fs::path& path, const SimulationTrace& trace) {
  auto out = open_out(path);
  const auto& recs = trace.records();
  out << 't';
  if (!recs.empty()) {
    const TraceRecord& first = recs.front();
    if (first.x) put_names(out, "x", first.x->size());
    if (first.xhat) put_names(out, "xhat", first.xhat->size());
    put_names(out, "y", first.y.size());
    if (first.yhat) put_names(out, "yhat", first.yhat->size());
    put_names(out, "u", first.u.size());
    put_names(out, "r", first.r.size());
  }
  out << ",cost,cum_cost\n";
  for (std::size_t t = 0; t < recs.size(); ++t) {
    const TraceRecord& rec = recs[t];
    out << t;
    if (rec.x) put_values(out, *rec.x);
    if (rec.xhat) put_values(out, *rec.xhat);
    put_values(out, rec.y);
    if (rec.yhat) put_values(out, *rec.yhat);
    put_values(out, rec.u);
    put_values(out, rec.r);
    out << ',' << fmt(rec.cost) << ',' << fmt(rec.cum_cost) << '\n';
  }
}

void write_dataset(const fs::path& csv, const IoDataset& data,
                   const DatasetMeta& meta) {
  data.validate();
  {
    auto out = open_out(csv);
    out << 't';
    put_names(out, "u", data.m());
    put_names(out, "y", data.p());
    out << '\n';
    for (Eigen::Index t = 0; t < data.u.cols(); ++t) {
      out << t;
      put_values(out, data.u.col(t));
      put_values(out, data.y.col(t));
      out << '\n';
    }
  }
  json j;
  j["seed"] = meta.seed;
  j["model_hash"] = meta.model_hash;
  j["samples"] = data.size();
  j["m"] = data.m();
  j["p"] = data.p();
  j["noise"] = {{"sigma", meta.noise.sigma},
                {"amplitudes", meta.noise.amplitudes},
                {"omega2", meta.noise.omega2},
                {"bandwidth", meta.noise.bandwidth},
                {"seed", meta.noise.seed}};
  j["x0"] = detail::to_json(meta.x0);
  j["r0"] = detail::to_json(meta.r0);
  j["F"] = detail::to_json(meta.F);
  write_text(sidecar(csv), j.dump(2) + "\n");
}

DatasetMeta read_dataset_meta(const fs::path& csv) {
  const json j = parse_json(sidecar(csv));
  DatasetMeta meta;
  try {
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.model_hash = j.at("model_hash").get<std::uint64_t>();
    const json& n = j.at("noise");
    meta.noise.sigma = n.at("sigma").get<double>();
    meta.noise.amplitudes = n.at("amplitudes").get<std::vector<double>>();
    meta.noise.omega2 = n.at("omega2").get<double>();
    meta.noise.bandwidth = n.at("bandwidth").get<double>();
    meta.noise.seed = n.at("seed").get<std::uint64_t>();
    meta.x0 = detail::vector_from_json(j.at("x0"));
    meta.r0 = detail::vector_from_json(j.at("r0"));
    meta.F = detail::matrix_from_json(j.at("F"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, sidecar(csv).string() + ": " + e.what());
  }
  return meta;
}

IoDataset read_dataset(const fs::path& csv) {
  const DatasetMeta meta = read_dataset_meta(csv);
  const json j = parse_json(sidecar(csv));
  const auto m = j.at("m").get<Eigen::Index>();
  const auto p = j.at("p").get<Eigen::Index>();

  auto in = open_in(csv);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split_doubles(line, csv));
    if (static_cast<Eigen::Index>(rows.back().size()) != 1 + m + p) {
      throw Error(ErrorKind::kIo, csv.string() + ": row " +
                                      std::to_string(rows.size()) +
                                      " has the wrong column count");
    }
  }
  const auto M = static_cast<Eigen::Index>(rows.size());
  IoDataset data{Matrix(m, M), Matrix(p, M), Matrix(p, M)};
  const ReferenceGenerator gen(meta.F, meta.r0);
  Vector r = gen.r0;
  for (Eigen::Index t = 0; t < M; ++t) {
    const auto& row = rows[static_cast<std::size_t>(t)];
    for (Eigen::Index i = 0; i < m; ++i) data.u(i, t) = row[1 + i];
    for (Eigen::Index i = 0; i < p; ++i) data.y(i, t) = row[1 + m + i];
    data.r.col(t) = r;
    r = reference_step(gen, r);
  }
  data.validate();
  return data;
}

void write_kernel(const fs::path& path, const KernelMatrix& kernel,
                  const TrainingResult* training) {
  kernel.validate();
  const BlockLayout& l = kernel.layout;
  json header;
  header["d"] = l.d();
  header["N"] = l.N;
  header["m"] = l.m;
  header["p"] = l.p;
  header["blocks"] = {
      {"ubar", {l.ubar_offset(), l.N * l.m}},
      {"ybar", {l.ybar_offset(), l.N * l.p}},
      {"r", {l.r_offset(), l.p}},
      {"u", {l.u_offset(), l.m}},
  };
  if (training) {
    header["training"] = {{"iterations", training->iterations},
                          {"final_delta", training->final_delta},
                          {"converged", training->converged},
                          {"excitation_rank", training->excitation_rank},
                          {"regularization", training->regularization}};
  }
  auto out = open_out(path);
  out << "# " << header.dump() << '\n';
  for (Eigen::Index i = 0; i < kernel.H.rows(); ++i) {
    for (Eigen::Index j = 0; j < kernel.H.cols(); ++j) {
      if (j) out << ',';
      out << fmt(kernel.H(i, j));
    }
    out << '\n';
  }
}

KernelMatrix read_kernel(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("# ", 0) != 0) {
    throw Error(ErrorKind::kIo, path.string() + ": missing kernel header");
  }
  KernelMatrix kernel;
  try {
    const json header = json::parse(line.substr(2));
    kernel.layout = BlockLayout{header.at("N").get<Eigen::Index>(),
                                header.at("m").get<Eigen::Index>(),
                                header.at("p").get<Eigen::Index>()};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, path.string() + ": " + e.what());
  }
  const Eigen::Index d = kernel.layout.d();
  kernel.H.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!std::getline(in, line)) {
      throw Error(ErrorKind::kIo, path.string() + ": truncated kernel");
    }
    const auto row = split_doubles(line, path);
    if (static_cast<Eigen::Index>(row.size()) != d) {
      throw Error(ErrorKind::kIo, path.string() + ": kernel row has wrong width");
    }
    for (Eigen::Index j = 0; j < d; ++j) kernel.H(i, j) = row[static_cast<std::size_t>(j)];
  }
  kernel.validate();
  return kernel;
}

CostWeights read_weights(const fs::path& path, double default_gamma) {
  const json j = parse_json(path);
  try {
    const double gamma = j.value("gamma", default_gamma);
    return CostWeights(detail::weight_from_json(j.at("Q")),
                       detail::weight_from_json(j.at("R")), gamma);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, path.string() + ": " + e.what());
  }
}

void write_weights(const fs::path& path, const CostWeights& w) {
  json j;
  j["Q"] = detail::to_json(Vector(w.Q.diagonal()));
  j["R"] = detail::to_json(Vector(w.R.diagonal()));
  j["gamma"] = w.gamma;
  write_text(path, j.dump(2) + "\n");
}

StateSpaceModel read_model(const fs::path& path) {
  const json j = parse_json(path);
  try {
    return StateSpaceModel(detail::matrix_from_json(j.at("A")),
                           detail::matrix_from_json(j.at("B")),
                           detail::matrix_from_json(j.at("C")));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, path.string() + ": " + e.what());
  }
}

SearchDomain read_bounds(const fs::path& path) {
  const json j = parse_json(path);
  try {
    SearchDomain d{detail::vector_from_json(j.at("lower")),
                   detail::vector_from_json(j.at("upper"))};
    d.validate();
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, path.string() + ": " + e.what());
  }
}

void write_bo_history_csv(const fs::path& path, const BoResult& result) {
  auto out = open_out(path);
  out << "iter";
  const Eigen::Index dim =
      result.history.empty() ? 0 : result.history.front().theta.size();
  put_names(out, "theta_", dim);
  out << ",fitness\n";
  for (const BoSample& s : result.history) {
    out << s.iteration;
    put_values(out, s.theta);
    out << ',' << fmt(s.fitness) << '\n';
  }
}

}  // namespace lqt::io
