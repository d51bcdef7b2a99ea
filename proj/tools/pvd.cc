// tools/pvd.cc

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

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvd/acoustics.h"
#include "pvd/bench.h"
#include "pvd/decoder.h"
#include "pvd/error.h"
#include "pvd/eval.h"
#include "pvd/lattice.h"
#include "pvd/scheduler.h"
#include "pvd/synth.h"
#include "pvd/verify.h"
#include "pvd/wfst.h"

namespace pvd {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitDecodeFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

// Shortest decimal string that reads back to the same float.
std::string FormatCost(double cost) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(cost));
  return std::string(buf, res.ptr);
}

std::string FormatWords(const std::vector<Label> &words, const SymbolTable *symbols) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    std::optional<std::string> w = symbols ? symbols->Find(words[i]) : std::nullopt;
    out += w ? *w : std::to_string(words[i]);
  }
  return out;
}

std::string FormatResult(const DecodeResult &r, const SymbolTable *symbols) {
  std::string out = "words: " + FormatWords(r.words, symbols) + "  cost: " +
                    FormatCost(r.best_cost);
  if (r.partial) out += " (partial)";
  return out;
}

void WriteLatticeFile(const Lattice &lat, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  WriteLatticeText(FinalizeLattice(lat), out);
  if (!out) throw UsageError("error writing '" + path + "'");
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  return lines;
}

std::vector<std::string> SplitWords(const std::string &line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Options shared by decode and batch-decode.
struct DecodeFlags {
  std::string wfst;
  std::string words;
  std::string scheduler = "dynamic";
  bool no_overlap = false;
  DecodeConfig config;

  void Register(CLI::App *app) {
    app->add_option("--wfst", wfst, "Decoding graph in OpenFST text format")->required();
    app->add_option("--words", words, "Word symbol table (word<TAB>id per line)");
    app->add_option("--beam", config.beam, "Token beam")->capture_default_str();
    app->add_option("--lattice-beam", config.lattice_beam, "Lattice pruning beam")
        ->capture_default_str();
    app->add_option("--acoustic-scale", config.acoustic_scale, "Acoustic cost scale")
        ->capture_default_str();
    app->add_option("--scheduler", scheduler, "Arc scheduler: static or dynamic")
        ->capture_default_str();
    app->add_option("--prune-interval", config.prune_interval,
                    "Frames between incremental lattice prunes")
        ->capture_default_str();
    app->add_option("--group-size", config.group_size, "Arcs per dynamic claim")
        ->capture_default_str();
    app->add_option("--shards", config.num_shards, "Lattice arc store shards")
        ->capture_default_str();
    app->add_option("--max-tokens-per-frame", config.max_tokens_per_frame,
                    "Token capacity per frame")
        ->capture_default_str();
    app->add_option("--max-lattice-arcs", config.max_lattice_arcs,
                    "Lattice arc capacity per frame")
        ->capture_default_str();
    app->add_flag("--no-overlap-pruning", no_overlap,
                  "Run incremental lattice pruning inline instead of on a helper thread");
  }

  DecodeConfig Finish() {
    config.scheduler = ParseSchedulerKind(scheduler);
    config.overlap_pruning = !no_overlap;
    config.Validate();
    return config;
  }

  std::optional<SymbolTable> Symbols() const {
    if (words.empty()) return std::nullopt;
    return SymbolTable::LoadFile(words);
  }
};

int RunDecode(DecodeFlags &flags, const std::string &costs_path,
              const std::string &lattice_out) {
  const DecodeConfig config = flags.Finish();
  const Wfst fst = LoadWfstFile(flags.wfst);
  const CostMatrix costs = LoadCostMatrixFile(costs_path);
  const std::optional<SymbolTable> symbols = flags.Symbols();
  const DecodeResult r = DecodeUtterance(fst, costs, config);
  std::cout << FormatResult(r, symbols ? &*symbols : nullptr) << '\n';
  if (!lattice_out.empty()) WriteLatticeFile(r.lattice, lattice_out);
  return kExitOk;
}

int RunBatchDecode(DecodeFlags &flags, const std::string &list_path,
                   const std::string &out_dir, unsigned workers) {
  const DecodeConfig config = flags.Finish();
  const Wfst fst = LoadWfstFile(flags.wfst);
  const std::optional<SymbolTable> symbols = flags.Symbols();
  const std::vector<std::string> inputs = ReadLines(list_path);
  if (inputs.empty()) throw UsageError("'" + list_path + "' lists no cost matrices");

  std::vector<std::string> outputs;
  std::set<std::string> seen;
  for (const std::string &in : inputs) {
    const std::string name = std::filesystem::path(in).stem().string() + ".lat";
    if (!seen.insert(name).second)
      throw UsageError("two inputs map to the same output name '" + name + "'");
    outputs.push_back((std::filesystem::path(out_dir) / name).string());
  }
  std::vector<CostMatrix> utts;
  utts.reserve(inputs.size());
  for (const std::string &in : inputs) utts.push_back(LoadCostMatrixFile(in));
  std::filesystem::create_directories(out_dir);

  const std::vector<BatchOutcome> results = DecodeBatch(fst, utts, config, workers);
  int status = kExitOk;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].result) {
      std::cout << inputs[i] << '\t'
                << FormatResult(*results[i].result, symbols ? &*symbols : nullptr) << '\n';
      WriteLatticeFile(results[i].result->lattice, outputs[i]);
      continue;
    }
    try {
      std::rethrow_exception(results[i].error);
    } catch (const CapacityError &e) {
      std::cout << inputs[i] << "\terror: " << e.what() << '\n';
      status = kExitCapacity;
    } catch (const DecodeFailure &e) {
      std::cout << inputs[i] << "\terror: " << e.what() << '\n';
      if (status == kExitOk) status = kExitDecodeFailure;
    }
  }
  return status;
}

int RunVerify(std::uint64_t seed, std::uint32_t instances, unsigned workers) {
  if (instances == 0) throw UsageError("--instances must be positive");
  if (workers == 0) throw UsageError("--workers must be positive");
  const Tolerances tol;
  constexpr double kBeams[] = {4.0, 8.0, 14.0};
  constexpr double kLatticeBeams[] = {0.5, 1.0, 2.0, 4.0, 8.0};
  std::uint32_t matched = 0, decode_ok = 0, prune_ok = 0, words_compared = 0, skipped = 0;
  for (std::uint32_t i = 0; i < instances; ++i) {
    const RandomInstance inst = GenerateInstance(InstanceSeed(seed, i));
    DecodeConfig config;
    config.num_workers = 1 + i % workers;
    config.scheduler = i % 2 ? SchedulerKind::kStatic : SchedulerKind::kDynamic;
    config.beam = kBeams[i % 3];
    config.prune_interval = 1 + i % 5;
    config.group_size = 1 + i % 8;
    const CheckOutcome eq = CheckDecodeEquivalence(inst, config, tol);
    const CheckOutcome pr = CheckPruning(inst, config, kLatticeBeams[i % 5], tol);
    decode_ok += eq.ok;
    prune_ok += pr.ok;
    words_compared += eq.words_compared;
    skipped += eq.skipped;
    if (eq.ok && pr.ok) {
      ++matched;
      continue;
    }
    const CheckOutcome &bad = eq.ok ? pr : eq;
    std::cerr << "instance " << i << " (seed " << InstanceSeed(seed, i)
              << "): " << (eq.ok ? "pruning" : "decode") << " mismatch: " << bad.detail << '\n';
  }
  std::cout << "decode equivalence: " << decode_ok << '/' << instances << " (words compared on "
            << words_compared << ", both sides failed on " << skipped << ")\n"
            << "pruning oracle: " << prune_ok << '/' << instances << '\n'
            << matched << '/' << instances << " matched\n";
  return matched == instances ? kExitOk : kExitDecodeFailure;
}

// Maps word strings to dense labels so that references, hypotheses and
// lattice output labels can be compared.
class Vocabulary {
 public:
  Label Intern(const std::string &w) {
    auto [it, inserted] = ids_.try_emplace(w, static_cast<Label>(ids_.size() + 1));
    return it->second;
  }
  std::vector<Label> Intern(const std::vector<std::string> &ws) {
    std::vector<Label> out;
    for (const auto &w : ws) out.push_back(Intern(w));
    return out;
  }

 private:
  std::map<std::string, Label> ids_;
};

// "utt-id rest..." lines keyed by their first field.
std::map<std::string, std::vector<std::string>> ReadKeyed(const std::string &path) {
  std::map<std::string, std::vector<std::string>> out;
  for (const std::string &line : ReadLines(path)) {
    std::vector<std::string> f = SplitWords(line);
    const std::string key = f.front();
    f.erase(f.begin());
    if (!out.emplace(key, std::move(f)).second)
      throw UsageError("'" + path + "' lists utterance '" + key + "' twice");
  }
  return out;
}

int RunScore(const std::string &ref_path, const std::string &hyp_path,
             const std::string &lattices_path, const std::string &words_path) {
  const auto refs = ReadKeyed(ref_path);
  const auto hyps = ReadKeyed(hyp_path);
  std::map<std::string, std::vector<std::string>> lattices;
  if (!lattices_path.empty()) lattices = ReadKeyed(lattices_path);
  std::optional<SymbolTable> symbols;
  if (!words_path.empty()) symbols = SymbolTable::LoadFile(words_path);

  Vocabulary vocab;
  // Lattice output labels are spelled through the symbol table when given,
  // otherwise compared as their decimal ids.
  auto relabel = [&](FinalLattice lat) {
    for (FinalArc &a : lat.arcs) {
      if (a.olabel == kEpsilon) continue;
      std::optional<std::string> w = symbols ? symbols->Find(a.olabel) : std::nullopt;
      a.olabel = vocab.Intern(w ? *w : std::to_string(a.olabel));
    }
    return lat;
  };

  char line[256];
  std::snprintf(line, sizeof(line), "%-16s %6s %5s %5s %5s %8s %8s %9s\n", "utterance", "words",
                "sub", "ins", "del", "wer%", "ower%", "density");
  std::cout << line;
  std::size_t ref_words = 0, errors = 0, oracle_errors = 0, lat_ref_words = 0;
  std::size_t lat_arcs = 0, lat_frames = 0;
  std::uint32_t S = 0, I = 0, D = 0;
  for (const auto &[key, ref_tokens] : refs) {
    const auto hyp = hyps.find(key);
    if (hyp == hyps.end()) throw UsageError("no hypothesis for utterance '" + key + "'");
    if (ref_tokens.empty()) throw UsageError("empty reference for utterance '" + key + "'");
    const std::vector<Label> ref = vocab.Intern(ref_tokens);
    const WerResult w = Wer(vocab.Intern(hyp->second), ref);
    ref_words += ref.size();
    errors += w.errors();
    S += w.substitutions;
    I += w.insertions;
    D += w.deletions;
    std::string ower = "-", density = "-";
    if (const auto lat = lattices.find(key); lat != lattices.end()) {
      if (lat->second.size() != 1)
        throw UsageError("lattice list line for '" + key + "' needs exactly one path");
      const FinalLattice fl = relabel(ReadLatticeFile(lat->second[0]));
      const OracleWerResult o = OracleWer(fl, ref);
      const std::uint32_t frames = LatticeFrameCount(fl);
      oracle_errors += o.errors;
      lat_ref_words += ref.size();
      lat_arcs += fl.arcs.size();
      lat_frames += frames;
      std::snprintf(line, sizeof(line), "%.2f", o.percent);
      ower = line;
      std::snprintf(line, sizeof(line), "%.2f", LatticeDensity(fl, frames));
      density = line;
    }
    std::snprintf(line, sizeof(line), "%-16s %6zu %5u %5u %5u %8.2f %8s %9s\n", key.c_str(),
                  ref.size(), w.substitutions, w.insertions, w.deletions, w.percent,
                  ower.c_str(), density.c_str());
    std::cout << line;
  }
  if (ref_words == 0) throw UsageError("'" + ref_path + "' has no utterances");
  std::string ower = "-", density = "-";
  if (lat_ref_words > 0) {
    std::snprintf(line, sizeof(line), "%.2f", 100.0 * oracle_errors / lat_ref_words);
    ower = line;
    std::snprintf(line, sizeof(line), "%.2f",
                  lat_frames ? static_cast<double>(lat_arcs) / lat_frames : 0.0);
    density = line;
  }
  std::snprintf(line, sizeof(line), "%-16s %6zu %5u %5u %5u %8.2f %8s %9s\n", "TOTAL",
                ref_words, S, I, D, 100.0 * errors / ref_words, ower.c_str(), density.c_str());
  std::cout << line;
  return kExitOk;
}

int RunBenchCommand(BenchOptions opt, const std::string &shape, bool no_serial,
                    const std::string &csv_path) {
  if (shape == "both")
    opt.shapes = {GraphShape::kUniform, GraphShape::kSkewed};
  else
    opt.shapes = {ParseGraphShape(shape)};
  opt.include_serial = !no_serial;
  for (unsigned w : opt.workers)
    if (w == 0) throw UsageError("--workers entries must be positive");
  const std::vector<BenchRow> rows = RunBench(opt);
  WriteBenchTable(rows, std::cout);
  if (csv_path.empty()) {
    std::cout << '\n';
    WriteBenchCsv(rows, std::cout);
  } else {
    std::ofstream out(csv_path);
    if (!out) throw UsageError("cannot open '" + csv_path + "' for writing");
    WriteBenchCsv(rows, out);
  }
  return kExitOk;
}

int Run(int argc, char **argv) {
  CLI::App app{"Parallel WFST Viterbi beam-search decoder with lattice generation.", "pvd"};
  app.require_subcommand(1);
  std::function<int()> action;

  DecodeFlags decode_flags;
  std::string costs_path, lattice_out;
  CLI::App *decode = app.add_subcommand("decode", "Decode one utterance");
  decode_flags.Register(decode);
  decode->add_option("--costs", costs_path, "Acoustic cost matrix")->required();
  decode->add_option("--workers", decode_flags.config.num_workers, "Decoder worker threads")
      ->capture_default_str();
  decode->add_option("--lattice-out", lattice_out, "Write the pruned lattice here");
  decode->callback([&] {
    action = [&] { return RunDecode(decode_flags, costs_path, lattice_out); };
  });

  DecodeFlags batch_flags;
  std::string costs_list, out_dir = ".";
  unsigned batch_workers = 1;
  CLI::App *batch = app.add_subcommand(
      "batch-decode", "Decode many utterances concurrently, one lattice file per input");
  batch_flags.Register(batch);
  batch->add_option("--costs-list", costs_list, "File with one cost matrix path per line")
      ->required();
  batch->add_option("--out-dir", out_dir, "Directory for <input-stem>.lat files")
      ->capture_default_str();
  batch->add_option("--workers", batch_workers, "Utterances decoded at once")
      ->capture_default_str();
  batch->callback([&] {
    action = [&] { return RunBatchDecode(batch_flags, costs_list, out_dir, batch_workers); };
  });

  std::uint64_t seed = 7;
  std::uint32_t instances = 1000;
  unsigned verify_workers = 4;
  CLI::App *verify = app.add_subcommand(
      "verify", "Check the decoder and lattice pruning against serial oracles");
  verify->add_option("--seed", seed, "Random seed")->capture_default_str();
  verify->add_option("--instances", instances, "Number of generated instances")
      ->capture_default_str();
  verify->add_option("--workers", verify_workers, "Largest worker count exercised")
      ->capture_default_str();
  verify->callback([&] {
    action = [&] { return RunVerify(seed, instances, verify_workers); };
  });

  std::string ref_path, hyp_path, lattices_path, words_path;
  CLI::App *score = app.add_subcommand("score", "Word error rate, oracle error rate, density");
  score->add_option("--ref", ref_path, "Reference transcripts: utt-id word...")->required();
  score->add_option("--hyp", hyp_path, "Hypotheses: utt-id word...")->required();
  score->add_option("--lattices", lattices_path, "Lattice list: utt-id lattice-path");
  score->add_option("--words", words_path, "Symbol table for lattice output labels");
  score->callback([&] {
    action = [&] { return RunScore(ref_path, hyp_path, lattices_path, words_path); };
  });

  BenchOptions bench_opt;
  std::string shape = "both", csv_path;
  bool no_serial = false;
  CLI::App *bench = app.add_subcommand("bench", "Time serial, static and dynamic decoding");
  bench->add_option("--arcs", bench_opt.num_arcs, "Arcs in the synthetic graph")
      ->capture_default_str();
  bench->add_option("--states", bench_opt.num_states, "States in the synthetic graph")
      ->capture_default_str();
  bench->add_option("--frames", bench_opt.num_frames, "Frames to decode")
      ->capture_default_str();
  bench->add_option("--labels", bench_opt.num_labels, "Input labels")->capture_default_str();
  bench->add_option("--beam", bench_opt.beam, "Token beam")->capture_default_str();
  bench->add_option("--lattice-beam", bench_opt.lattice_beam, "Lattice beam")
      ->capture_default_str();
  bench->add_option("--workers", bench_opt.workers, "Worker counts, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--shape", shape, "uniform, skewed or both")->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "Graph and cost seed")->capture_default_str();
  bench->add_flag("--no-serial", no_serial, "Skip the serial reference decoder");
  bench->add_option("--csv", csv_path, "Write the CSV table here instead of stdout");
  bench->callback([&] {
    action = [&] { return RunBenchCommand(bench_opt, shape, no_serial, csv_path); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const CapacityError &e) {
    std::cerr << "pvd: capacity exceeded: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const DecodeFailure &e) {
    std::cerr << "pvd: decode failed: " << e.what() << '\n';
    return kExitDecodeFailure;
  } catch (const InvariantViolation &e) {
    std::cerr << "pvd: internal error: " << e.what() << '\n';
    return kExitDecodeFailure;
  } catch (const Error &e) {  // parse, validation and usage errors
    std::cerr << "pvd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << "pvd: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace
}  // namespace pvd

int main(int argc, char **argv) { return pvd::Run(argc, argv); }
