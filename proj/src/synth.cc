// src/synth.cc

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

#include "pvd/synth.h"

#include <algorithm>
#include <random>
#include <vector>

#include "pvd/error.h"

namespace pvd {

namespace {

template <typename T>
T UniformInt(std::mt19937_64 &rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

float UniformReal(std::mt19937_64 &rng, float lo, float hi) {
  return std::uniform_real_distribution<float>(lo, hi)(rng);
}

}  // namespace

RandomInstance GenerateInstance(std::uint64_t seed, const RandomInstanceOptions &opt) {
  if (opt.max_states < 1 || opt.max_labels < 1 || opt.max_frames < 1 ||
      opt.max_arcs < opt.max_states)
    throw UsageError("random instance options are inconsistent");
  std::mt19937_64 rng(seed);
  const StateId S = UniformInt<StateId>(rng, std::min<StateId>(2, opt.max_states),
                                        opt.max_states);
  const Label D = UniformInt<Label>(rng, 1, opt.max_labels);
  const std::uint32_t T = UniformInt<std::uint32_t>(rng, 1, opt.max_frames);
  const std::uint32_t A = UniformInt<std::uint32_t>(rng, S, opt.max_arcs);

  auto olabel = [&] {
    return UniformInt<int>(rng, 0, 1) ? UniformInt<Label>(rng, 1, opt.max_olabel)
                                      : kEpsilon;
  };
  auto weight = [&] {
    // Occasional exact zeros exercise ties and zero-weight epsilon cycles.
    return UniformInt<int>(rng, 0, 9) == 0 ? 0.0f : UniformReal(rng, 0.0f, 5.0f);
  };

  std::vector<Arc> arcs;
  arcs.reserve(A);
  for (StateId s = 0; s < S; ++s)
    arcs.push_back(Arc{s, UniformInt<StateId>(rng, 0, S - 1), UniformInt<Label>(rng, 1, D),
                       olabel(), weight(), 0});
  std::bernoulli_distribution is_epsilon(opt.epsilon_fraction);
  while (arcs.size() < A) {
    Arc a{UniformInt<StateId>(rng, 0, S - 1), UniformInt<StateId>(rng, 0, S - 1),
          kEpsilon, olabel(), weight(), 0};
    if (!is_epsilon(rng)) a.ilabel = UniformInt<Label>(rng, 1, D);
    arcs.push_back(a);
  }

  std::vector<std::pair<StateId, float>> finals;
  const int num_finals = UniformInt<int>(rng, 1, 3);
  for (int i = 0; i < num_finals; ++i)
    finals.emplace_back(UniformInt<StateId>(rng, 0, S - 1), UniformReal(rng, 0.0f, 2.0f));

  std::vector<float> costs(static_cast<std::size_t>(T) * D);
  for (auto &c : costs) c = UniformReal(rng, 0.0f, 5.0f);

  return RandomInstance{Wfst::Build(S, 0, std::move(arcs), std::move(finals)),
                        CostMatrix(T, D, std::move(costs))};
}

Wfst SyntheticGraph(StateId num_states, std::uint32_t num_arcs, Label num_labels,
                    GraphShape shape, std::uint64_t seed) {
  if (num_states < 2 || num_labels < 1 || num_arcs < num_states)
    throw UsageError("synthetic graph needs >= 2 states and >= 1 arc per state");
  std::mt19937_64 rng(seed);
  std::vector<Arc> arcs;
  arcs.reserve(num_arcs);
  auto add = [&](StateId src, StateId dst, float w) {
    arcs.push_back(Arc{src, dst, UniformInt<Label>(rng, 1, num_labels),
                       UniformInt<Label>(rng, 1, 1000), w, 0});
  };

  std::uint32_t rest = num_arcs;
  if (shape == GraphShape::kSkewed) {
    const auto hub_arcs = static_cast<std::uint32_t>(0.3 * num_arcs);
    for (std::uint32_t i = 0; i < hub_arcs; ++i)
      add(0, UniformInt<StateId>(rng, 1, num_states - 1), UniformReal(rng, 0.0f, 4.0f));
    rest -= hub_arcs;
    // A cheap way back to the hub from everywhere keeps it active each frame.
    for (StateId s = 1; s < num_states && rest > 0; ++s, --rest)
      add(s, 0, UniformReal(rng, 0.0f, 0.5f));
  }
  const StateId first = shape == GraphShape::kSkewed ? 1 : 0;
  const StateId spread = num_states - first;
  for (std::uint32_t i = 0; i < rest; ++i)
    add(first + i % spread, UniformInt<StateId>(rng, 0, num_states - 1),
        UniformReal(rng, 0.0f, 4.0f));

  std::vector<std::pair<StateId, float>> finals;
  finals.reserve(num_states);
  for (StateId s = 0; s < num_states; ++s) finals.emplace_back(s, 0.0f);
  return Wfst::Build(num_states, 0, std::move(arcs), std::move(finals));
}

CostMatrix SyntheticCosts(std::uint32_t num_frames, Label num_labels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<float> costs(static_cast<std::size_t>(num_frames) * num_labels);
  for (auto &c : costs) c = UniformReal(rng, 0.0f, 6.0f);
  return CostMatrix(num_frames, num_labels, std::move(costs));
}

}  // namespace pvd
