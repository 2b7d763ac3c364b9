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

#include "semlink/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "json.hpp"
#include "semlink/features.h"
#include "semlink/status.h"
#include "semlink/text_io.h"

namespace semlink {

RocResult ComputeRoc(std::span<const double> scores,
                     std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "auc: scores and labels differ in length");
  }
  RocResult roc;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) throw Error(ErrorCode::kInvalidArgument, "auc: labels must be 0 or 1");
    if (std::isnan(scores[i])) throw RecordError(i, "auc: NaN score");
    (labels[i] ? roc.positives : roc.negatives) += 1;
  }
  if (roc.positives == 0 || roc.negatives == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "auc: undefined without both positive and negative labels");
  }

  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Rank sum of positives with midranks (1-based) over tie groups, plus the
  // ROC curve swept from the highest threshold down.
  double positive_rank_sum = 0;
  struct Group {
    std::size_t pos = 0;
    std::size_t neg = 0;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    Group g;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? g.pos : g.neg) += 1;
      ++j;
    }
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    positive_rank_sum += midrank * static_cast<double>(g.pos);
    groups.push_back(g);
    i = j;
  }
  const auto P = static_cast<double>(roc.positives);
  const auto N = static_cast<double>(roc.negatives);
  roc.auc = (positive_rank_sum - P * (P + 1) / 2.0) / (P * N);

  roc.curve.reserve(groups.size() + 1);
  roc.curve.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    tp += it->pos;
    fp += it->neg;
    roc.curve.push_back({static_cast<double>(fp) / N, static_cast<double>(tp) / P});
  }
  return roc;
}

double TrapezoidArea(std::span<const RocPoint> curve) {
  double area = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

void WriteRocCsv(const RocResult& roc, std::ostream& out) {
  out << "fpr,tpr\n";
  for (const RocPoint& p : roc.curve) {
    out << FormatDouble(p.fpr) << ',' << FormatDouble(p.tpr) << '\n';
  }
}

std::vector<CentralizationPoint> CentralizationCurve(const Snapshot& snapshot) {
  const std::size_t n = snapshot.num_nodes();
  if (snapshot.num_adjacent_pairs() == 0) {
    throw Error(ErrorCode::kInsufficientData, "centralization: snapshot has no edges");
  }
  std::vector<std::uint32_t> degrees = snapshot.Degrees();
  std::sort(degrees.begin(), degrees.end());
  const double endpoints = 2.0 * static_cast<double>(snapshot.num_adjacent_pairs());
  std::vector<CentralizationPoint> curve;
  curve.reserve(n + 1);
  curve.push_back({0.0, 0.0});
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += degrees[i];
    curve.push_back({static_cast<double>(i + 1) / static_cast<double>(n),
                     static_cast<double>(cumulative) / endpoints});
  }
  return curve;
}

PowerLawFit FitPowerLaw(std::span<const double> samples, double k_min,
                        std::size_t min_tail) {
  if (!(k_min >= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "power law: k_min must be >= 1");
  }
  const double shifted = k_min - 0.5;
  double log_sum = 0;
  std::size_t n = 0;
  double first = 0;
  bool all_equal = true;
  for (double k : samples) {
    if (!(k >= k_min)) continue;
    if (n == 0) first = k;
    all_equal = all_equal && k == first;
    log_sum += std::log(k / shifted);
    ++n;
  }
  if (n < std::max<std::size_t>(min_tail, 1)) {
    throw Error(ErrorCode::kInsufficientData,
                "power law: " + std::to_string(n) + " samples >= k_min, need " +
                    std::to_string(min_tail));
  }
  if (all_equal && n > 1 && first == k_min) {
    throw Error(ErrorCode::kInsufficientData,
                "power law: every tail sample equals k_min; exponent unbounded");
  }
  return {1.0 + static_cast<double>(n) / log_sum, n};
}

CutoffReport AnalyzeCutoff(const TemporalGraph& graph, Day cutoff, double k_min) {
  const Snapshot s(graph, cutoff);
  CutoffReport r;
  r.cutoff_day = cutoff;
  r.num_nodes = s.num_nodes();
  r.num_adjacent_pairs = s.num_adjacent_pairs();
  r.num_temporal_edges = s.num_temporal_edges();
  ComponentSummary cc = ConnectedComponents(s);
  r.component_sizes = std::move(cc.sizes);
  r.isolated = cc.isolated;
  r.degree_histogram = DegreeHistogram(s);
  r.average_clustering = AverageClustering(s);

  std::vector<NodeId> nodes(s.num_nodes());
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  const std::size_t top = std::min<std::size_t>(10, nodes.size());
  std::partial_sort(nodes.begin(), nodes.begin() + top, nodes.end(),
                    [&](NodeId a, NodeId b) {
                      if (s.Degree(a) != s.Degree(b)) return s.Degree(a) > s.Degree(b);
                      return a < b;
                    });
  for (std::size_t i = 0; i < top; ++i) {
    TopNode t{nodes[i], s.Degree(nodes[i]), {}};
    if (auto it = graph.vocab().find(nodes[i]); it != graph.vocab().end()) {
      t.name = it->second;
    }
    r.top_degree.push_back(std::move(t));
  }

  std::vector<double> degrees;
  for (std::uint32_t d : s.Degrees()) degrees.push_back(d);
  try {
    r.power_law = FitPowerLaw(degrees, k_min);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientData) throw;
  }
  if (s.num_adjacent_pairs() > 0) r.centralization = CentralizationCurve(s);
  return r;
}

std::vector<CutoffReport> AnalysisReport(const TemporalGraph& graph,
                                         std::span<const Day> cutoffs,
                                         double k_min) {
  std::vector<CutoffReport> out;
  for (Day c : cutoffs) out.push_back(AnalyzeCutoff(graph, c, k_min));
  return out;
}

void WriteAnalysisReport(std::span<const CutoffReport> reports,
                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto open = [&](const char* name, const char* header) {
    auto out = OpenForWrite(out_dir / name);
    out << header << '\n';
    return out;
  };
  auto components = open("components.csv", "cutoff_day,rank,size");
  auto histogram = open("degree_histogram.csv", "cutoff_day,degree,count");
  auto clustering = open("clustering.csv", "cutoff_day,average_clustering");
  auto top = open("top_degree.csv", "cutoff_day,rank,node,degree,concept");
  auto power = open("power_law.csv", "cutoff_day,alpha,tail_size");
  auto central = open("centralization.csv", "cutoff_day,node_fraction,edge_fraction");

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (const CutoffReport& r : reports) {
    for (std::size_t i = 0; i < r.component_sizes.size(); ++i) {
      components << r.cutoff_day << ',' << i + 1 << ',' << r.component_sizes[i] << '\n';
    }
    for (const auto& [degree, count] : r.degree_histogram) {
      histogram << r.cutoff_day << ',' << degree << ',' << count << '\n';
    }
    clustering << r.cutoff_day << ',' << FormatDouble(r.average_clustering) << '\n';
    for (std::size_t i = 0; i < r.top_degree.size(); ++i) {
      const TopNode& t = r.top_degree[i];
      top << r.cutoff_day << ',' << i + 1 << ',' << t.node << ',' << t.degree << ','
          << t.name << '\n';
    }
    if (r.power_law) {
      power << r.cutoff_day << ',' << FormatDouble(r.power_law->alpha) << ','
            << r.power_law->tail_size << '\n';
    }
    for (const CentralizationPoint& p : r.centralization) {
      central << r.cutoff_day << ',' << FormatDouble(p.node_fraction) << ','
              << FormatDouble(p.edge_fraction) << '\n';
    }
    nlohmann::ordered_json j;
    j["cutoff_day"] = r.cutoff_day;
    j["num_nodes"] = r.num_nodes;
    j["num_adjacent_pairs"] = r.num_adjacent_pairs;
    j["num_temporal_edges"] = r.num_temporal_edges;
    j["components_gt1"] = r.component_sizes.size();
    j["largest_component"] = r.component_sizes.empty() ? 0 : r.component_sizes.front();
    j["isolated"] = r.isolated;
    j["average_clustering"] = r.average_clustering;
    if (r.power_law) {
      j["power_law_alpha"] = r.power_law->alpha;
      j["power_law_tail"] = r.power_law->tail_size;
    } else {
      j["power_law_alpha"] = nullptr;
    }
    summary.push_back(std::move(j));
  }
  for (auto* s : {&components, &histogram, &clustering, &top, &power, &central}) {
    s->flush();
    if (!*s) throw Error(ErrorCode::kIo, "failed writing report in " + out_dir.string());
  }
  auto out = OpenForWrite(out_dir / "summary.json");
  out << summary.dump(2) << '\n';
  CheckWritten(out, out_dir / "summary.json");
}

}  // namespace semlink
