// src/acoustics.cc

// Copyright 2026  The pvd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pvd/acoustics.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "pvd/error.h"
#include "text_util.h"

namespace pvd {

CostMatrix::CostMatrix(std::uint32_t num_frames, std::uint32_t num_labels,
                       std::vector<float> costs)
    : num_frames_(num_frames), num_labels_(num_labels), costs_(std::move(costs)) {
  if (num_frames_ == 0 || num_labels_ == 0)
    throw ValidationError("cost matrix needs at least one frame and one label");
  if (costs_.size() != static_cast<std::size_t>(num_frames_) * num_labels_)
    throw ValidationError("cost matrix size does not match its dimensions");
  for (float c : costs_)
    if (!std::isfinite(c)) throw ValidationError("non-finite acoustic cost");
}

CostMatrix LoadCostMatrix(std::istream &in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string_view> fields;
  // Header: first non-blank line.
  while (std::getline(in, line)) {
    ++lineno;
    fields = text::SplitWhitespace(line);
    if (!fields.empty()) break;
  }
  if (fields.empty()) throw ParseError(lineno, "missing 'T D' header");
  std::uint32_t frames = 0, labels = 0;
  if (fields.size() != 2 || !text::ParseNumber(fields[0], &frames) ||
      !text::ParseNumber(fields[1], &labels))
    throw ParseError(lineno, "expected header 'T D'");
  if (frames == 0 || labels == 0)
    throw ParseError(lineno, "T and D must be at least 1");

  std::vector<float> costs;
  costs.reserve(static_cast<std::size_t>(frames) * labels);
  std::uint32_t row = 0;
  while (row < frames && std::getline(in, line)) {
    ++lineno;
    fields = text::SplitWhitespace(line);
    if (fields.empty()) continue;
    ++row;
    if (fields.size() != labels)
      throw ParseError(lineno, "row " + std::to_string(row) + " has " +
                                   std::to_string(fields.size()) + " of " +
                                   std::to_string(labels) + " entries");
    for (std::size_t j = 0; j < fields.size(); ++j) {
      float v = 0.0f;
      if (!text::ParseNumber(fields[j], &v))
        throw ParseError(lineno, "row " + std::to_string(row) + " column " +
                                     std::to_string(j + 1) + ": bad number '" +
                                     std::string(fields[j]) + "'");
      if (!std::isfinite(v))
        throw ParseError(lineno, "row " + std::to_string(row) + " column " +
                                     std::to_string(j + 1) + ": non-finite value");
      costs.push_back(v);
    }
  }
  if (row != frames)
    throw ParseError(lineno, "expected " + std::to_string(frames) +
                                 " rows, found " + std::to_string(row));
  while (std::getline(in, line)) {
    ++lineno;
    if (!text::SplitWhitespace(line).empty())
      throw ParseError(lineno, "more rows than the header declares");
  }
  return CostMatrix(frames, labels, std::move(costs));
}

CostMatrix LoadCostMatrixFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return LoadCostMatrix(in);
}

void WriteCostMatrix(const CostMatrix &m, std::ostream &out) {
  out << m.num_frames() << ' ' << m.num_labels() << '\n';
  for (std::uint32_t t = 0; t < m.num_frames(); ++t) {
    auto row = m.Row(t);
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? " " : "") << text::FormatFloat(row[j]);
    out << '\n';
  }
}

double AcousticCost(const CostMatrix &m, std::uint32_t frame, Label ilabel,
                    float scale) {
  if (ilabel == kEpsilon)
    throw UsageError("epsilon label has no acoustic cost");
  if (ilabel > m.num_labels())
    throw UsageError("ilabel " + std::to_string(ilabel) + " exceeds D=" +
                     std::to_string(m.num_labels()));
  if (frame >= m.num_frames())
    throw UsageError("frame " + std::to_string(frame) + " out of range");
  if (!(scale > 0.0f)) throw UsageError("acoustic scale must be positive");
  return ScaledCost(m, frame, ilabel, scale);
}

}  // namespace pvd
