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

#pragma once

// Plain-text formats. Blank lines and lines starting with '#' are ignored
// on input; doubles are written with 17 significant digits so a write/read
// cycle is lossless.
//
//   DAG:      "n" then one "parent child" pair per line, sorted.
//   Model:    "node i sigma2 v" for every node, then "coef i j a" for each
//             edge j -> i (a is the weight of parent j in node i's equation).
//   Samples:  headerless CSV, one row per sample.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gbnlearn/dag.hpp"
#include "gbnlearn/gbn.hpp"

namespace gbnlearn::io {

std::string format_double(double value);

void write_dag(std::ostream& out, const Dag& dag);
Dag read_dag(std::istream& in);

void write_model(std::ostream& out, const GaussianBayesNet& gbn);
GaussianBayesNet read_model(std::istream& in);

void write_samples(std::ostream& out, const SampleMatrix& data);
SampleMatrix read_samples(std::istream& in);

// File wrappers; IoError when the file cannot be opened, ParseError on
// malformed content.
void save_dag(const std::filesystem::path& path, const Dag& dag);
Dag load_dag(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const GaussianBayesNet& gbn);
GaussianBayesNet load_model(const std::filesystem::path& path);
void save_samples(const std::filesystem::path& path, const SampleMatrix& data);
SampleMatrix load_samples(const std::filesystem::path& path);

}  // namespace gbnlearn::io
