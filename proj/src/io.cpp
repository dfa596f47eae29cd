/*
Copyright 2026 The gbnlearn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "gbnlearn/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <tuple>
#include <vector>

#include "gbnlearn/error.hpp"

namespace gbnlearn::io {

namespace {

// Yields non-empty, non-comment lines with their 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(number_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

template <typename T>
T read_field(std::istringstream& fields, const LineReader& reader, const char* what) {
  T value{};
  if (!(fields >> value)) reader.fail(std::string("expected ") + what);
  return value;
}

void expect_end(std::istringstream& fields, const LineReader& reader) {
  std::string extra;
  if (fields >> extra) reader.fail("unexpected trailing token '" + extra + "'");
}

double read_real(std::istringstream& fields, const LineReader& reader) {
  std::string token;
  if (!(fields >> token)) reader.fail("expected a number");
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    reader.fail("'" + token + "' is not a number");
  }
  if (used != token.size()) reader.fail("'" + token + "' is not a number");
  if (std::isnan(value)) reader.fail("NaN is not allowed");
  return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

template <typename F>
auto with_path(const std::filesystem::path& path, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_dag(std::ostream& out, const Dag& dag) {
  out << dag.node_count() << '\n';
  for (const auto& [p, c] : dag.edges()) out << p << ' ' << c << '\n';
}

Dag read_dag(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields)) reader.fail("missing node count");
  const auto n = read_field<std::size_t>(fields, reader, "node count");
  expect_end(fields, reader);
  std::vector<Edge> edges;
  while (reader.next(fields)) {
    const auto p = read_field<std::size_t>(fields, reader, "parent index");
    const auto c = read_field<std::size_t>(fields, reader, "child index");
    expect_end(fields, reader);
    edges.emplace_back(p, c);
  }
  return Dag(n, edges);
}

void write_model(std::ostream& out, const GaussianBayesNet& gbn) {
  for (NodeId i = 0; i < gbn.node_count(); ++i) {
    out << "node " << i << " sigma2 " << format_double(gbn.variance(i)) << '\n';
  }
  for (NodeId i = 0; i < gbn.node_count(); ++i) {
    const auto ps = gbn.dag().parents(i);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      out << "coef " << i << ' ' << ps[k] << ' '
          << format_double(gbn.coefficients(i)(static_cast<Eigen::Index>(k))) << '\n';
    }
  }
}

// Node lines may appear in any order but must cover 0..n-1 exactly once;
// coef lines name (child, parent) and define the edge set.
GaussianBayesNet read_model(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  std::vector<std::optional<double>> variances;
  std::vector<std::tuple<NodeId, NodeId, double>> coefs;
  while (reader.next(fields)) {
    const auto kind = read_field<std::string>(fields, reader, "record kind");
    if (kind == "node") {
      const auto i = read_field<std::size_t>(fields, reader, "node index");
      if (read_field<std::string>(fields, reader, "'sigma2'") != "sigma2") reader.fail("expected 'sigma2'");
      const double v = read_real(fields, reader);
      expect_end(fields, reader);
      if (i >= variances.size()) variances.resize(i + 1);
      if (variances[i]) reader.fail("node " + std::to_string(i) + " listed twice");
      variances[i] = v;
    } else if (kind == "coef") {
      const auto i = read_field<std::size_t>(fields, reader, "child index");
      const auto j = read_field<std::size_t>(fields, reader, "parent index");
      const double a = read_real(fields, reader);
      expect_end(fields, reader);
      coefs.emplace_back(i, j, a);
    } else {
      reader.fail("unknown record '" + kind + "'");
    }
  }
  if (variances.empty()) reader.fail("no node records");
  const std::size_t n = variances.size();
  std::vector<double> sigma2(n);
  for (NodeId i = 0; i < n; ++i) {
    if (!variances[i]) reader.fail("missing node " + std::to_string(i));
    sigma2[i] = *variances[i];
  }

  std::vector<Edge> edges;
  edges.reserve(coefs.size());
  for (const auto& [i, j, a] : coefs) edges.emplace_back(j, i);
  Dag dag(n, edges);  // validates indices, duplicates and cycles

  std::vector<Eigen::VectorXd> coeffs(n);
  for (NodeId i = 0; i < n; ++i) coeffs[i].resize(static_cast<Eigen::Index>(dag.parents(i).size()));
  for (const auto& [i, j, a] : coefs) {
    const auto ps = dag.parents(i);
    const auto k = std::lower_bound(ps.begin(), ps.end(), j) - ps.begin();
    coeffs[i](static_cast<Eigen::Index>(k)) = a;
  }
  return GaussianBayesNet(std::move(dag), std::move(coeffs), std::move(sigma2));
}

void write_samples(std::ostream& out, const SampleMatrix& data) {
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(data(r, c));
    }
    out << '\n';
  }
}

SampleMatrix read_samples(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  while (reader.next(fields)) {
    std::string line = fields.str();
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream cells(line);
    std::size_t count = 0;
    std::string token;
    while (cells >> token) {
      std::istringstream one(token);
      values.push_back(read_real(one, reader));
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) {
      reader.fail("row has " + std::to_string(count) + " columns, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) reader.fail("no sample rows");
  SampleMatrix data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
    }
  }
  return data;
}

void save_dag(const std::filesystem::path& path, const Dag& dag) {
  auto out = open_out(path);
  write_dag(out, dag);
}

Dag load_dag(const std::filesystem::path& path) {
  auto in = open_in(path);
  return with_path(path, [&] { return read_dag(in); });
}

void save_model(const std::filesystem::path& path, const GaussianBayesNet& gbn) {
  auto out = open_out(path);
  write_model(out, gbn);
}

GaussianBayesNet load_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  return with_path(path, [&] { return read_model(in); });
}

void save_samples(const std::filesystem::path& path, const SampleMatrix& data) {
  auto out = open_out(path);
  write_samples(out, data);
}

SampleMatrix load_samples(const std::filesystem::path& path) {
  auto in = open_in(path);
  return with_path(path, [&] { return read_samples(in); });
}

}  // namespace gbnlearn::io
