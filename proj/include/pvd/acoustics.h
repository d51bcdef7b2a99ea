// include/pvd/acoustics.h

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

#ifndef PVD_ACOUSTICS_H_
#define PVD_ACOUSTICS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pvd/wfst.h"

namespace pvd {

// Per-frame acoustic costs (negative log-likelihoods). Row = frame,
// column = ilabel - 1.
class CostMatrix {
 public:
  CostMatrix(std::uint32_t num_frames, std::uint32_t num_labels,
             std::vector<float> costs);

  std::uint32_t num_frames() const { return num_frames_; }
  std::uint32_t num_labels() const { return num_labels_; }
  std::span<const float> Row(std::uint32_t frame) const {
    return std::span<const float>(costs_).subspan(
        static_cast<std::size_t>(frame) * num_labels_, num_labels_);
  }
  // Unchecked access used on the decoding hot path.
  float Raw(std::uint32_t frame, Label ilabel) const {
    return costs_[static_cast<std::size_t>(frame) * num_labels_ + ilabel - 1];
  }

  bool operator==(const CostMatrix &) const = default;

 private:
  std::uint32_t num_frames_;
  std::uint32_t num_labels_;
  std::vector<float> costs_;
};

// "T D" header followed by T rows of D reals.
CostMatrix LoadCostMatrix(std::istream &in);
CostMatrix LoadCostMatrixFile(const std::string &path);
void WriteCostMatrix(const CostMatrix &m, std::ostream &out);

// scale * cost of `ilabel` at `frame`. Epsilon and out-of-range indices are
// usage errors.
double AcousticCost(const CostMatrix &m, std::uint32_t frame, Label ilabel,
                    float scale);

// Hot-path variant without range checks; same arithmetic as AcousticCost.
inline double ScaledCost(const CostMatrix &m, std::uint32_t frame,
                         Label ilabel, float scale) {
  return static_cast<double>(scale) * static_cast<double>(m.Raw(frame, ilabel));
}

}  // namespace pvd

#endif  // PVD_ACOUSTICS_H_
