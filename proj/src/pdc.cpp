// Copyright 2026 The Corpus Studio Authors
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

#include "cstudio/pdc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>

#include "cstudio/errors.hpp"
#include "cstudio/text.hpp"

namespace cstudio {

std::vector<TitleOccurrence> extract_title_occurrences(const std::vector<Document>& corpus,
                                                       std::size_t n_max) {
  if (corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "extract_title_occurrences: empty corpus");
  std::vector<TitleOccurrence> out;
  for (const auto& doc : corpus) {
    const std::size_t count = doc.sections.size();
    const double denom = static_cast<double>(std::max<std::size_t>(1, count - (count > 0 ? 1 : 0)));
    for (std::size_t i = 0; i < count; ++i) {
      if (out.size() >= n_max) return out;
      TitleOccurrence occ;
      occ.title = doc.sections[i].title;
      occ.doc_id = doc.doc_id;
      occ.position = static_cast<double>(i) / denom;
      occ.tokens = text::distinct_tokens(occ.title);
      occ.ordinal = out.size();
      out.push_back(std::move(occ));
    }
  }
  return out;
}

double title_distance(const TitleOccurrence& a, const TitleOccurrence& b, double alpha) {
  const double diction = 1.0 - text::jaccard(a.token_set(), b.token_set());
  return alpha * diction + (1.0 - alpha) * std::abs(a.position - b.position);
}

std::string cluster_name(const std::vector<TitleOccurrence>& members) {
  if (members.empty()) throw Error(ErrorCode::kInvalidArgument, "cluster_name: no members");
  std::map<std::string, std::size_t> counts;
  for (const auto& m : members) ++counts[m.title];
  // std::map iterates titles in lexicographic order, so the first maximum wins ties.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

std::vector<TitleOccurrence> order_within_cluster(std::vector<TitleOccurrence> members,
                                                  const std::string& name) {
  std::vector<TitleOccurrence> out;
  if (members.empty()) return out;
  std::optional<std::size_t> start;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].title == name && (!start || members[i].ordinal < members[*start].ordinal)) start = i;
  }
  if (!start) throw Error(ErrorCode::kInvalidArgument, "order_within_cluster: name is not a member title");

  std::vector<std::set<std::string>> sets;
  sets.reserve(members.size());
  for (const auto& m : members) sets.push_back(m.token_set());

  std::vector<bool> used(members.size(), false);
  std::size_t prev = *start;
  used[prev] = true;
  out.push_back(members[prev]);
  for (std::size_t step = 1; step < members.size(); ++step) {
    std::optional<std::size_t> pick;
    double pick_sim = -1.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (used[i]) continue;
      const double sim = text::jaccard(sets[prev], sets[i]);
      const bool better =
          !pick || sim > pick_sim ||
          (sim == pick_sim &&
           std::tie(members[i].title, members[i].doc_id, members[i].ordinal) <
               std::tie(members[*pick].title, members[*pick].doc_id, members[*pick].ordinal));
      if (better) {
        pick = i;
        pick_sim = sim;
      }
    }
    used[*pick] = true;
    out.push_back(members[*pick]);
    prev = *pick;
  }
  return out;
}

std::vector<std::string> underline_tokens(const std::vector<TitleOccurrence>& members,
                                          const std::string& name) {
  std::vector<std::string> out;
  for (const auto& tok : text::distinct_tokens(name)) {
    const bool everywhere = std::all_of(members.begin(), members.end(), [&](const auto& m) {
      return std::find(m.tokens.begin(), m.tokens.end(), tok) != m.tokens.end();
    });
    if (everywhere) out.push_back(tok);
  }
  return out;
}

std::vector<std::vector<bool>> grey_flags(const std::vector<TitleOccurrence>& ordered) {
  std::vector<std::vector<bool>> out;
  out.reserve(ordered.size());
  std::set<std::string> seen;
  for (const auto& m : ordered) {
    std::vector<bool> flags;
    flags.reserve(m.tokens.size());
    for (const auto& t : m.tokens) flags.push_back(seen.count(t) > 0);
    out.push_back(std::move(flags));
    seen.insert(m.tokens.begin(), m.tokens.end());
  }
  return out;
}

namespace {

// Clusters live in slots named after their smallest member ordinal. Average
// link distances are kept as sums over member pairs so merges are exact
// additions; each slot caches its best partner to avoid a full rescan.
class AverageLinkage {
 public:
  AverageLinkage(const std::vector<TitleOccurrence>& occ, double alpha)
      : occ_(occ), n_(occ.size()), sums_(n_ * n_, 0.0), active_(n_, true), size_(n_, 1),
        members_(n_), counts_(n_), names_(n_), best_(n_) {
    std::vector<std::set<std::string>> sets;
    sets.reserve(n_);
    for (const auto& o : occ) sets.push_back(o.token_set());
    for (std::size_t i = 0; i < n_; ++i) {
      members_[i] = {i};
      counts_[i][occ[i].title] = 1;
      names_[i] = occ[i].title;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = alpha * (1.0 - text::jaccard(sets[i], sets[j])) +
                         (1.0 - alpha) * std::abs(occ[i].position - occ[j].position);
        sums_[i * n_ + j] = d;
        sums_[j * n_ + i] = d;
      }
    }
    for (std::size_t i = 0; i < n_; ++i) rescan(i);
  }

  std::vector<std::vector<std::size_t>> run(double cut) {
    for (;;) {
      std::optional<Key> top;
      for (std::size_t i = 0; i < n_; ++i) {
        if (active_[i] && best_[i] && (!top || *best_[i] < *top)) top = best_[i];
      }
      if (!top || top->distance > cut) break;
      merge(top->a, top->b);
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (active_[i]) out.push_back(members_[i]);
    }
    return out;
  }

 private:
  struct Key {
    double distance;
    std::string name_lo, name_hi;
    std::size_t a, b;  // slots, a < b
    bool operator<(const Key& o) const {
      return std::tie(distance, name_lo, name_hi, a, b) <
             std::tie(o.distance, o.name_lo, o.name_hi, o.a, o.b);
    }
  };

  Key key(std::size_t i, std::size_t j) const {
    const std::size_t a = std::min(i, j), b = std::max(i, j);
    const double avg = sums_[a * n_ + b] / static_cast<double>(size_[a] * size_[b]);
    const auto& [lo, hi] = std::minmax(names_[a], names_[b]);
    return Key{avg, lo, hi, a, b};
  }

  void rescan(std::size_t i) {
    best_[i].reset();
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i || !active_[j]) continue;
      Key k = key(i, j);
      if (!best_[i] || k < *best_[i]) best_[i] = std::move(k);
    }
  }

  void merge(std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < n_; ++k) {
      if (!active_[k] || k == a || k == b) continue;
      const double s = sums_[a * n_ + k] + sums_[b * n_ + k];
      sums_[a * n_ + k] = s;
      sums_[k * n_ + a] = s;
    }
    active_[b] = false;
    best_[b].reset();
    size_[a] += size_[b];
    members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
    std::sort(members_[a].begin(), members_[a].end());
    for (const auto& [t, c] : counts_[b]) counts_[a][t] += c;
    names_[a] = most_frequent(counts_[a]);

    rescan(a);
    for (std::size_t k = 0; k < n_; ++k) {
      if (!active_[k] || k == a) continue;
      if (!best_[k] || best_[k]->a == a || best_[k]->b == a || best_[k]->a == b || best_[k]->b == b) {
        rescan(k);
      } else if (Key nk = key(k, a); nk < *best_[k]) {
        best_[k] = std::move(nk);
      }
    }
  }

  static std::string most_frequent(const std::map<std::string, std::size_t>& counts) {
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    return best->first;
  }

  const std::vector<TitleOccurrence>& occ_;
  std::size_t n_;
  std::vector<double> sums_;
  std::vector<bool> active_;
  std::vector<std::size_t> size_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::map<std::string, std::size_t>> counts_;
  std::vector<std::string> names_;
  std::vector<std::optional<Key>> best_;
};

}  // namespace

PdcResult cluster_titles(const std::vector<TitleOccurrence>& occurrences, double alpha, double cut) {
  if (occurrences.empty()) throw Error(ErrorCode::kInvalidArgument, "cluster_titles: no occurrences");
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(cut >= 0.0 && cut <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "cluster_titles: alpha and cut must be in [0, 1]");

  // Ordinals index the input list from here on.
  std::vector<TitleOccurrence> occ = occurrences;
  for (std::size_t i = 0; i < occ.size(); ++i) occ[i].ordinal = i;

  auto groups = AverageLinkage(occ, alpha).run(cut);

  PdcResult result;
  result.total_titles = occ.size();
  for (const auto& g : groups) {
    std::vector<TitleOccurrence> members;
    members.reserve(g.size());
    double pos_sum = 0.0;
    for (std::size_t i : g) {
      members.push_back(occ[i]);
      pos_sum += occ[i].position;
    }
    TitleCluster c;
    c.name = cluster_name(members);
    c.count = members.size();
    c.mean_position = pos_sum / static_cast<double>(members.size());
    c.underline_tokens = underline_tokens(members, c.name);
    c.members = order_within_cluster(std::move(members), c.name);
    c.grey_flags = grey_flags(c.members);
    result.clusters.push_back(std::move(c));
  }
  std::sort(result.clusters.begin(), result.clusters.end(), [](const auto& x, const auto& y) {
    if (x.mean_position != y.mean_position) return x.mean_position < y.mean_position;
    if (x.count != y.count) return x.count > y.count;
    if (x.name != y.name) return x.name < y.name;
    return x.members.front().ordinal < y.members.front().ordinal;
  });
  return result;
}

}  // namespace cstudio
