// Copyright 2026 The Semlink Authors
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

#include "semlink/task.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "json.hpp"
#include "semlink/parallel.h"
#include "semlink/random.h"
#include "semlink/status.h"
#include "semlink/text_io.h"

namespace semlink {
namespace {

constexpr std::string_view kTaskHeader = "# task ";

std::vector<NodeId> EligibleNodes(const Snapshot& t0, const TaskSpec& spec) {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < t0.num_nodes(); ++u) {
    if (spec.Eligible(t0.Degree(u))) out.push_back(u);
  }
  return out;
}

bool PairEligible(const Snapshot& t0, const TaskSpec& spec, NodePair p) {
  return spec.Eligible(t0.Degree(p.u)) && spec.Eligible(t0.Degree(p.v)) &&
         !t0.Adjacent(p.u, p.v);
}

// Every eligible pair in (u, v) order, optionally skipping `exclude`.
std::vector<NodePair> EnumerateEligible(
    const Snapshot& t0, std::span<const NodeId> eligible,
    const std::unordered_set<std::uint64_t>* exclude = nullptr) {
  std::vector<NodePair> out;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    for (std::size_t j = i + 1; j < eligible.size(); ++j) {
      NodePair p{eligible[i], eligible[j]};
      if (t0.Adjacent(p.u, p.v)) continue;
      if (exclude && exclude->contains(p.Key())) continue;
      out.push_back(p);
    }
  }
  return out;
}

// Draws `count` distinct eligible pairs not in `exclude`. `available` is the
// size of that population; callers guarantee available >= count. Dense
// requests enumerate and take a partial shuffle; sparse ones use rejection.
std::vector<NodePair> DrawPairs(const Snapshot& t0,
                                std::span<const NodeId> eligible,
                                std::uint64_t available, std::size_t count,
                                Rng& rng,
                                const std::unordered_set<std::uint64_t>* exclude) {
  std::vector<NodePair> out;
  if (count == 0) return out;
  if (2 * static_cast<std::uint64_t>(count) >= available) {
    std::vector<NodePair> all = EnumerateEligible(t0, eligible, exclude);
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.Uniform(all.size() - i));
      std::swap(all[i], all[j]);
    }
    all.resize(count);
    return all;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  out.reserve(count);
  while (out.size() < count) {
    NodeId a = eligible[rng.Uniform(eligible.size())];
    NodeId b = eligible[rng.Uniform(eligible.size())];
    if (a == b) continue;
    NodePair p = NodePair::Canonical(a, b);
    if (t0.Adjacent(p.u, p.v)) continue;
    if (exclude && exclude->contains(p.Key())) continue;
    if (!seen.insert(p.Key()).second) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace

void TaskSpec::Validate() const {
  if (t1_day <= t0_day) {
    throw Error(ErrorCode::kInvalidArgument, "task: t1_day must exceed t0_day");
  }
  if (min_multiplicity < 1) {
    throw Error(ErrorCode::kInvalidArgument, "task: min_multiplicity must be >= 1");
  }
}

std::size_t TaskInstance::num_positive() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

std::uint64_t CountEligiblePairs(const Snapshot& t0, const TaskSpec& spec) {
  std::uint64_t nodes = 0;
  std::uint64_t adjacent = 0;
  for (NodeId u = 0; u < t0.num_nodes(); ++u) {
    if (!spec.Eligible(t0.Degree(u))) continue;
    ++nodes;
    for (NodeId v : t0.Neighbors(u)) {
      if (v > u && spec.Eligible(t0.Degree(v))) ++adjacent;
    }
  }
  return nodes * (nodes - (nodes > 0 ? 1 : 0)) / 2 - adjacent;
}

std::vector<std::uint8_t> LabelMultiplicity(const Snapshot& t1,
                                            std::span<const NodePair> pairs,
                                            std::uint32_t min_multiplicity,
                                            unsigned threads) {
  std::vector<std::uint8_t> labels(pairs.size());
  ParallelFor(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      labels[i] = t1.Multiplicity(pairs[i].u, pairs[i].v) >= min_multiplicity;
    }
  });
  return labels;
}

TaskInstance SamplePairs(const TemporalGraph& graph, const TaskSpec& spec) {
  spec.Validate();
  if (graph.num_nodes() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "task: graph has no nodes");
  }
  const Snapshot t0(graph, spec.t0_day);
  const Snapshot t1(graph, spec.t1_day);
  const std::vector<NodeId> eligible = EligibleNodes(t0, spec);

  TaskInstance task;
  task.spec = spec;
  if (!spec.num_samples) {
    task.pairs = EnumerateEligible(t0, eligible);
  } else {
    const std::uint64_t available = CountEligiblePairs(t0, spec);
    if (available < *spec.num_samples) {
      throw Error(ErrorCode::kInsufficientData,
                  "task: requested " + std::to_string(*spec.num_samples) +
                      " pairs but only " + std::to_string(available) +
                      " are eligible");
    }
    Rng rng(spec.seed);
    task.pairs = DrawPairs(t0, eligible, available, *spec.num_samples,
                           rng, nullptr);
  }
  task.labels = LabelMultiplicity(t1, task.pairs, spec.min_multiplicity);
  return task;
}

TaskInstance BalancedTrainingSet(const TemporalGraph& graph,
                                 const TaskSpec& spec, std::size_t size,
                                 std::uint64_t seed) {
  spec.Validate();
  if (size % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "balanced set size must be even");
  }
  const std::size_t half = size / 2;
  const Snapshot t0(graph, spec.t0_day);
  const Snapshot t1(graph, spec.t1_day);

  std::vector<NodePair> positives;
  const auto edges = graph.edges();
  for (std::size_t i = graph.EdgesUpTo(spec.t0_day);
       i < graph.EdgesUpTo(spec.t1_day); ++i) {
    NodePair p{edges[i].u, edges[i].v};
    if (PairEligible(t0, spec, p) &&
        t1.Multiplicity(p.u, p.v) >= spec.min_multiplicity) {
      positives.push_back(p);
    }
  }
  std::sort(positives.begin(), positives.end());
  positives.erase(std::unique(positives.begin(), positives.end()),
                  positives.end());
  if (positives.size() < half) {
    throw Error(ErrorCode::kInsufficientData,
                "balanced set: need " + std::to_string(half) +
                    " positives but only " + std::to_string(positives.size()) +
                    " are available (short by " +
                    std::to_string(half - positives.size()) + ")");
  }

  const std::vector<NodeId> eligible = EligibleNodes(t0, spec);
  const std::uint64_t negatives_available =
      CountEligiblePairs(t0, spec) - positives.size();
  if (negatives_available < half) {
    throw Error(ErrorCode::kInsufficientData,
                "balanced set: need " + std::to_string(half) +
                    " negatives but only " +
                    std::to_string(negatives_available) + " are available");
  }

  Rng rng(seed);
  Rng pick = rng.Split(1);
  for (std::size_t i = 0; i < half; ++i) {
    std::size_t j =
        i + static_cast<std::size_t>(pick.Uniform(positives.size() - i));
    std::swap(positives[i], positives[j]);
  }
  positives.resize(half);

  std::unordered_set<std::uint64_t> positive_keys;
  for (const NodePair& p : positives) positive_keys.insert(p.Key());
  // Exclude every positive, not only the chosen ones.
  for (std::size_t i = graph.EdgesUpTo(spec.t0_day);
       i < graph.EdgesUpTo(spec.t1_day); ++i) {
    NodePair p{edges[i].u, edges[i].v};
    if (t1.Multiplicity(p.u, p.v) >= spec.min_multiplicity) {
      positive_keys.insert(p.Key());
    }
  }
  Rng draw = rng.Split(2);
  std::vector<NodePair> negatives = DrawPairs(
      t0, eligible, negatives_available, half, draw, &positive_keys);

  struct Row {
    NodePair pair;
    std::uint8_t label;
  };
  std::vector<Row> rows;
  rows.reserve(size);
  for (const NodePair& p : positives) rows.push_back({p, 1});
  for (const NodePair& p : negatives) rows.push_back({p, 0});
  Rng mix = rng.Split(3);
  mix.Shuffle(std::span<Row>(rows));

  TaskInstance task;
  task.spec = spec;
  task.spec.num_samples = size;
  task.spec.seed = seed;
  for (const Row& r : rows) {
    task.pairs.push_back(r.pair);
    task.labels.push_back(r.label);
  }
  return task;
}

void WriteTask(const TaskInstance& task, std::ostream& out) {
  nlohmann::ordered_json header;
  header["format"] = "semlink-task";
  header["version"] = 1;
  header["t0_day"] = task.spec.t0_day;
  header["t1_day"] = task.spec.t1_day;
  if (task.spec.degree_cutoff) {
    header["degree_cutoff"] = *task.spec.degree_cutoff;
  } else {
    header["degree_cutoff"] = "inf";
  }
  header["min_multiplicity"] = task.spec.min_multiplicity;
  if (task.spec.num_samples) {
    header["num_samples"] = *task.spec.num_samples;
  } else {
    header["num_samples"] = "all";
  }
  header["seed"] = task.spec.seed;
  out << kTaskHeader << header.dump() << '\n';
  for (std::size_t i = 0; i < task.pairs.size(); ++i) {
    out << task.pairs[i].u << '\t' << task.pairs[i].v << '\t'
        << static_cast<int>(task.labels[i]) << '\n';
  }
}

void WriteTaskFile(const TaskInstance& task, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  WriteTask(task, out);
  CheckWritten(out, path);
}

TaskInstance ReadTask(std::istream& in) {
  TaskInstance task;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = Trim(line);
    if (text.empty()) continue;
    if (!have_header) {
      if (!text.starts_with(kTaskHeader)) {
        throw ParseError(line_no, "expected task header '# task {...}'");
      }
      try {
        auto h = nlohmann::json::parse(text.substr(kTaskHeader.size()));
        if (h.at("format") != "semlink-task" || h.at("version") != 1) {
          throw Error(ErrorCode::kSchemaMismatch, "unsupported task format");
        }
        TaskSpec& s = task.spec;
        s.t0_day = h.at("t0_day").get<Day>();
        s.t1_day = h.at("t1_day").get<Day>();
        if (h.at("degree_cutoff").is_string()) {
          s.degree_cutoff.reset();
        } else {
          s.degree_cutoff = h.at("degree_cutoff").get<std::uint32_t>();
        }
        s.min_multiplicity = h.at("min_multiplicity").get<std::uint32_t>();
        if (h.at("num_samples").is_string()) {
          s.num_samples.reset();
        } else {
          s.num_samples = h.at("num_samples").get<std::size_t>();
        }
        s.seed = h.at("seed").get<std::uint64_t>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, std::string("bad task header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    if (text.front() == '#') continue;
    auto fields = Split(text, '\t');
    if (fields.size() != 3) throw ParseError(line_no, "expected u, v, label");
    auto u = ParseUint(fields[0]);
    auto v = ParseUint(fields[1]);
    auto label = ParseUint(fields[2]);
    if (!u || !v || !label || *label > 1 || *u >= *v ||
        *v > std::numeric_limits<NodeId>::max()) {
      throw ParseError(line_no, "bad task row");
    }
    task.pairs.push_back({static_cast<NodeId>(*u), static_cast<NodeId>(*v)});
    task.labels.push_back(static_cast<std::uint8_t>(*label));
  }
  if (!have_header) throw ParseError(line_no + 1, "missing task header");
  return task;
}

TaskInstance ReadTaskFile(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  return ReadTask(in);
}

}  // namespace semlink
