#include "parmine/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "parmine/error.hpp"

namespace parmine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDenseCellLimit = std::size_t{1} << 22;

// Move into a node; lower value wins ties.
enum Move : std::uint8_t { kMatch = 0, kSrcGap = 1, kTgtGap = 2, kStart = 3 };

void check_gap_cost(double gap_cost) {
  if (!(gap_cost > 0.0 && gap_cost <= 0.5)) {
    throw Error("align: gap_cost must be in (0, 0.5]");
  }
}

double checked(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error("align: similarity outside [0, 1]");
  return s;
}

struct Node {
  double g = kInf;
  double sim = -1.0;  // negative until evaluated
  Move parent = kStart;
};

class DenseNodes {
 public:
  DenseNodes(std::size_t n, std::size_t m) : cols_(m + 1), nodes_((n + 1) * (m + 1)) {}
  Node& at(std::size_t i, std::size_t j) { return nodes_[i * cols_ + j]; }

 private:
  std::size_t cols_;
  std::vector<Node> nodes_;
};

class SparseNodes {
 public:
  SparseNodes(std::size_t, std::size_t m) : cols_(m + 1) {}
  Node& at(std::size_t i, std::size_t j) { return nodes_[i * cols_ + j]; }

 private:
  std::size_t cols_;
  std::unordered_map<std::size_t, Node> nodes_;
};

AlignmentResult all_gaps(std::size_t n, std::size_t m, double gap_cost) {
  AlignmentResult r;
  for (std::size_t i = 0; i < n; ++i) {
    r.gaps_src.push_back(i);
    r.total_cost += gap_cost;
  }
  for (std::size_t j = 0; j < m; ++j) {
    r.gaps_tgt.push_back(j);
    r.total_cost += gap_cost;
  }
  return r;
}

template <typename Nodes>
AlignmentResult backtrack(Nodes& nodes, std::size_t n, std::size_t m) {
  AlignmentResult r;
  r.total_cost = nodes.at(n, m).g;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    Node& node = nodes.at(i, j);
    switch (node.parent) {
      case kMatch:
        --i;
        --j;
        r.links.push_back({i, j, nodes.at(i, j).sim});
        break;
      case kSrcGap:
        --i;
        r.gaps_src.push_back(i);
        break;
      case kTgtGap:
        --j;
        r.gaps_tgt.push_back(j);
        break;
      case kStart:
        throw Error("align: broken back-pointer chain");
    }
  }
  std::reverse(r.links.begin(), r.links.end());
  std::reverse(r.gaps_src.begin(), r.gaps_src.end());
  std::reverse(r.gaps_tgt.begin(), r.gaps_tgt.end());
  return r;
}

struct Entry {
  double f;
  double g;
  std::size_t i;
  std::size_t j;
};

// Smallest f first; among equal f, the node further along the lattice.
struct EntryOrder {
  bool operator()(const Entry& a, const Entry& b) const {
    if (a.f != b.f) return a.f > b.f;
    return a.i + a.j < b.i + b.j;
  }
};

template <typename Nodes>
AlignmentResult astar(std::size_t n, std::size_t m, const PairScorer& sim, double gap_cost) {
  Nodes nodes(n, m);
  std::priority_queue<Entry, std::vector<Entry>, EntryOrder> open;
  std::size_t calls = 0;
  std::size_t expanded = 0;

  nodes.at(0, 0).g = 0.0;
  open.push({alignment_heuristic(0, 0, n, m, gap_cost), 0.0, 0, 0});

  auto relax = [&](std::size_t i, std::size_t j, double g, Move move) {
    Node& node = nodes.at(i, j);
    if (g < node.g) {
      node.g = g;
      node.parent = move;
      open.push({g + alignment_heuristic(i, j, n, m, gap_cost), g, i, j});
    } else if (g == node.g && move < node.parent) {
      node.parent = move;
    }
  };

  // Costs accumulate forward along each path exactly as in the dynamic
  // program, and every node whose f could still tie the goal is expanded, so
  // both g values and tie-broken back-pointers agree with align_bruteforce.
  while (!open.empty()) {
    Entry top = open.top();
    const double goal = nodes.at(n, m).g;
    if (goal < kInf && top.f > goal + 1e-9 * std::max(1.0, goal)) break;
    open.pop();
    Node& node = nodes.at(top.i, top.j);
    if (top.g != node.g) continue;  // stale entry
    ++expanded;
    const std::size_t i = top.i;
    const std::size_t j = top.j;
    if (i < n && j < m) {
      if (node.sim < 0.0) {
        node.sim = checked(sim(i, j));
        ++calls;
      }
      relax(i + 1, j + 1, node.g + (1.0 - node.sim), kMatch);
    }
    if (i < n) relax(i + 1, j, node.g + gap_cost, kSrcGap);
    if (j < m) relax(i, j + 1, node.g + gap_cost, kTgtGap);
  }

  AlignmentResult r = backtrack(nodes, n, m);
  r.similarity_calls = calls;
  r.expanded_nodes = expanded;
  return r;
}

}  // namespace

double alignment_heuristic(std::size_t i, std::size_t j, std::size_t n, std::size_t m,
                           double gap_cost) {
  const auto rest_src = static_cast<double>(n - i);
  const auto rest_tgt = static_cast<double>(m - j);
  return std::abs(rest_src - rest_tgt) * gap_cost;
}

AlignmentResult align(std::size_t n, std::size_t m, const PairScorer& sim, double gap_cost) {
  check_gap_cost(gap_cost);
  if (n == 0 || m == 0) return all_gaps(n, m, gap_cost);
  if ((n + 1) * (m + 1) <= kDenseCellLimit) return astar<DenseNodes>(n, m, sim, gap_cost);
  return astar<SparseNodes>(n, m, sim, gap_cost);
}

AlignmentResult align_bruteforce(std::size_t n, std::size_t m, const PairScorer& sim,
                                 double gap_cost) {
  check_gap_cost(gap_cost);
  if (n * m > kBruteForceCellLimit) {
    throw Error("align_bruteforce: " + std::to_string(n) + "x" + std::to_string(m) +
                " exceeds the " + std::to_string(kBruteForceCellLimit) + "-cell guard");
  }
  if (n == 0 || m == 0) return all_gaps(n, m, gap_cost);

  DenseNodes nodes(n, m);
  std::size_t calls = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      nodes.at(i, j).sim = checked(sim(i, j));
      ++calls;
    }
  }
  nodes.at(0, 0).g = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      Node& node = nodes.at(i, j);
      if (i > 0 && j > 0) {
        node.g = nodes.at(i - 1, j - 1).g + (1.0 - nodes.at(i - 1, j - 1).sim);
        node.parent = kMatch;
      }
      if (i > 0) {
        double g = nodes.at(i - 1, j).g + gap_cost;
        if (g < node.g) {
          node.g = g;
          node.parent = kSrcGap;
        }
      }
      if (j > 0) {
        double g = nodes.at(i, j - 1).g + gap_cost;
        if (g < node.g) {
          node.g = g;
          node.parent = kTgtGap;
        }
      }
    }
  }
  AlignmentResult r = backtrack(nodes, n, m);
  r.similarity_calls = calls;
  r.expanded_nodes = (n + 1) * (m + 1);
  return r;
}

AlignmentResult align(std::span<const Sentence> src, std::span<const Sentence> tgt,
                      const SentenceScorer& sim, double gap_cost) {
  return align(
      src.size(), tgt.size(), [&](std::size_t i, std::size_t j) { return sim(src[i], tgt[j]); },
      gap_cost);
}

std::vector<BiSentence> threshold_filter(const AlignmentResult& result, double threshold,
                                         std::span<const Sentence> src,
                                         std::span<const Sentence> tgt, std::uint64_t article_id,
                                         const std::string& direction) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error("threshold_filter: threshold must be in [0, 1]");
  }
  std::vector<BiSentence> out;
  for (const auto& link : result.links) {
    if (link.score < threshold) continue;
    if (link.src >= src.size() || link.tgt >= tgt.size()) {
      throw Error("threshold_filter: link index outside the sentence lists");
    }
    BiSentence b;
    b.src = src[link.src].text;
    b.tgt = tgt[link.tgt].text;
    b.score = link.score;
    b.origin = {article_id, link.src, link.tgt, direction};
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace parmine
