#include "parmine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>

#include "parmine/error.hpp"
#include "parmine/random.hpp"

namespace parmine {

namespace {

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, std::size_t>;

NgramCounts count_ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

// Reference counts clipped per n-gram: the maximum over the references.
NgramCounts max_reference_counts(const std::vector<Tokens>& refs, std::size_t n) {
  NgramCounts out;
  for (const auto& r : refs) {
    for (const auto& [g, c] : count_ngrams(r, n)) {
      auto& slot = out[g];
      slot = std::max(slot, c);
    }
  }
  return out;
}

void check_references(const EvalPair& p) {
  if (p.references.empty()) throw Error("evaluation pair has no reference");
}

std::size_t closest_ref_length(const EvalPair& p) {
  const std::size_t c = p.hypothesis.size();
  std::size_t best = p.references.front().size();
  for (const auto& r : p.references) {
    const std::size_t len = r.size();
    const auto diff = [c](std::size_t l) { return l > c ? l - c : c - l; };
    if (diff(len) < diff(best) || (diff(len) == diff(best) && len < best)) best = len;
  }
  return best;
}

double average_ref_length(const EvalPair& p) {
  double sum = 0.0;
  for (const auto& r : p.references) sum += static_cast<double>(r.size());
  return sum / static_cast<double>(p.references.size());
}

// ---- per-sentence statistics ----

// BLEU row: [matches_1, totals_1, ..., matches_N, totals_N, hyp_len, ref_len]
std::vector<double> bleu_row(const EvalPair& p, std::size_t max_n) {
  check_references(p);
  std::vector<double> row;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto hyp = count_ngrams(p.hypothesis, n);
    auto ref = max_reference_counts(p.references, n);
    double matches = 0.0;
    double total = 0.0;
    for (const auto& [g, c] : hyp) {
      total += static_cast<double>(c);
      if (auto it = ref.find(g); it != ref.end()) {
        matches += static_cast<double>(std::min(c, it->second));
      }
    }
    row.push_back(matches);
    row.push_back(total);
  }
  row.push_back(static_cast<double>(p.hypothesis.size()));
  row.push_back(static_cast<double>(closest_ref_length(p)));
  return row;
}

double bleu_from(const std::vector<double>& sums, std::size_t max_n) {
  const double c = sums[2 * max_n];
  const double r = sums[2 * max_n + 1];
  if (c == 0.0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (sums[2 * n] == 0.0 || sums[2 * n + 1] == 0.0) return 0.0;
    log_sum += std::log(sums[2 * n] / sums[2 * n + 1]);
  }
  const double bp = std::exp(std::min(0.0, 1.0 - r / c));
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

class NistWeights {
 public:
  NistWeights(std::span<const EvalPair> corpus, std::size_t max_n) {
    for (const auto& p : corpus) {
      for (const auto& r : p.references) {
        total_words_ += static_cast<double>(r.size());
        for (std::size_t n = 1; n <= max_n; ++n) {
          for (const auto& [g, c] : count_ngrams(r, n)) counts_[g] += static_cast<double>(c);
        }
      }
    }
  }

  double info(const Ngram& g) const {
    auto it = counts_.find(g);
    if (it == counts_.end()) return 0.0;
    double context = total_words_;
    if (g.size() > 1) {
      auto ctx = counts_.find(Ngram(g.begin(), g.end() - 1));
      context = ctx == counts_.end() ? 0.0 : ctx->second;
    }
    if (context <= 0.0) return 0.0;
    return std::log2(context / it->second);
  }

 private:
  std::map<Ngram, double> counts_;
  double total_words_ = 0.0;
};

// NIST row: [info_1, count_1, ..., info_N, count_N, hyp_len, avg_ref_len]
std::vector<double> nist_row(const EvalPair& p, std::size_t max_n, const NistWeights& weights) {
  check_references(p);
  std::vector<double> row;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto hyp = count_ngrams(p.hypothesis, n);
    auto ref = max_reference_counts(p.references, n);
    double info = 0.0;
    double total = 0.0;
    for (const auto& [g, c] : hyp) {
      total += static_cast<double>(c);
      if (auto it = ref.find(g); it != ref.end()) {
        info += static_cast<double>(std::min(c, it->second)) * weights.info(g);
      }
    }
    row.push_back(info);
    row.push_back(total);
  }
  row.push_back(static_cast<double>(p.hypothesis.size()));
  row.push_back(average_ref_length(p));
  return row;
}

double nist_from(const std::vector<double>& sums, std::size_t max_n) {
  double score = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (sums[2 * n + 1] > 0.0) score += sums[2 * n] / sums[2 * n + 1];
  }
  const double sys = sums[2 * max_n];
  const double ref = sums[2 * max_n + 1];
  if (sys == 0.0) return 0.0;
  // beta puts the penalty at 0.5 when the system output is 2/3 of the reference length.
  const double beta = std::log(0.5) / std::pow(std::log(1.5), 2);
  const double ratio = ref > 0.0 ? std::min(1.0, sys / ref) : 1.0;
  const double bp = std::exp(beta * std::pow(std::log(ratio), 2));
  return score * bp;
}

}  // namespace

double bleu(std::span<const EvalPair> corpus, std::size_t max_n) {
  if (corpus.empty()) throw Error("bleu: empty corpus");
  if (max_n == 0) throw Error("bleu: max_n must be positive");
  std::vector<double> sums(2 * max_n + 2, 0.0);
  for (const auto& p : corpus) {
    auto row = bleu_row(p, max_n);
    for (std::size_t k = 0; k < row.size(); ++k) sums[k] += row[k];
  }
  return bleu_from(sums, max_n);
}

double nist(std::span<const EvalPair> corpus, std::size_t max_n) {
  if (corpus.empty()) throw Error("nist: empty corpus");
  if (max_n == 0) throw Error("nist: max_n must be positive");
  NistWeights weights(corpus, max_n);
  std::vector<double> sums(2 * max_n + 2, 0.0);
  for (const auto& p : corpus) {
    auto row = nist_row(p, max_n, weights);
    for (std::size_t k = 0; k < row.size(); ++k) sums[k] += row[k];
  }
  return nist_from(sums, max_n);
}

// ---- TER ----

double TerResult::rate() const {
  if (ref_length > 0.0) return edits / ref_length;
  return edits > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

namespace {

using Seq = std::vector<int>;

std::size_t edit_distance(const Seq& a, const Seq& b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// For every reference position k, the number of hypothesis tokens consumed
// before reference token k on one optimal edit path.
std::vector<std::size_t> hyp_position_before_ref(const Seq& hyp, const Seq& ref) {
  const std::size_t n = hyp.size(), m = ref.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1)});
    }
  }
  std::vector<std::size_t> before(m + 1, 0);
  std::size_t i = n, j = m;
  before[m] = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1)) {
      --i;
      --j;
      before[j] = i;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      --i;
    } else {
      --j;
      before[j] = i;
    }
  }
  return before;
}

bool occurs_in(const Seq& ref, const Seq& hyp, std::size_t start, std::size_t len) {
  if (len > ref.size()) return false;
  for (std::size_t k = 0; k + len <= ref.size(); ++k) {
    if (std::equal(hyp.begin() + static_cast<std::ptrdiff_t>(start),
                   hyp.begin() + static_cast<std::ptrdiff_t>(start + len),
                   ref.begin() + static_cast<std::ptrdiff_t>(k))) {
      return true;
    }
  }
  return false;
}

// Moves hyp[start, start+len) so that it begins at dest of the sequence
// with the phrase removed.
Seq shifted(const Seq& hyp, std::size_t start, std::size_t len, std::size_t dest) {
  Seq rest;
  rest.reserve(hyp.size());
  rest.insert(rest.end(), hyp.begin(), hyp.begin() + static_cast<std::ptrdiff_t>(start));
  rest.insert(rest.end(), hyp.begin() + static_cast<std::ptrdiff_t>(start + len), hyp.end());
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(dest),
              hyp.begin() + static_cast<std::ptrdiff_t>(start),
              hyp.begin() + static_cast<std::ptrdiff_t>(start + len));
  return rest;
}

struct ShiftSearch {
  std::size_t edits = 0;
  std::size_t shifts = 0;
};

// Breadth-first over shift sequences; every phrase that occurs in the
// reference may move to any position.
ShiftSearch exact_shift_search(const Seq& hyp, const Seq& ref) {
  ShiftSearch best{edit_distance(hyp, ref), 0};
  std::set<Seq> seen{hyp};
  std::vector<Seq> level{hyp};
  for (std::size_t depth = 1; depth < best.edits + best.shifts && !level.empty(); ++depth) {
    std::vector<Seq> next;
    for (const auto& h : level) {
      for (std::size_t start = 0; start < h.size(); ++start) {
        for (std::size_t len = 1; len <= kMaxShiftLength && start + len <= h.size(); ++len) {
          if (!occurs_in(ref, h, start, len)) break;
          for (std::size_t dest = 0; dest + len <= h.size(); ++dest) {
            if (dest == start) continue;
            Seq s = shifted(h, start, len, dest);
            if (!seen.insert(s).second) continue;
            std::size_t ed = edit_distance(s, ref);
            if (ed + depth < best.edits + best.shifts) best = {ed, depth};
            next.push_back(std::move(s));
          }
        }
      }
    }
    level = std::move(next);
  }
  return best;
}

// Repeatedly applies the shift that lowers edits + shifts the most. Phrase
// destinations follow the current alignment: a phrase matching reference
// position k moves to where reference token k is produced.
ShiftSearch greedy_shift_search(Seq hyp, const Seq& ref) {
  ShiftSearch result{edit_distance(hyp, ref), 0};
  for (;;) {
    const auto before = hyp_position_before_ref(hyp, ref);
    std::size_t best_total = result.edits;  // a shift must beat stopping here
    std::size_t best_ed = result.edits;
    Seq best_seq;
    for (std::size_t start = 0; start < hyp.size(); ++start) {
      for (std::size_t len = 1; len <= kMaxShiftLength && start + len <= hyp.size(); ++len) {
        bool any = false;
        for (std::size_t k = 0; k + len <= ref.size(); ++k) {
          if (!std::equal(hyp.begin() + static_cast<std::ptrdiff_t>(start),
                          hyp.begin() + static_cast<std::ptrdiff_t>(start + len),
                          ref.begin() + static_cast<std::ptrdiff_t>(k))) {
            continue;
          }
          any = true;
          std::size_t target = before[k];
          if (target >= start && target <= start + len) continue;
          std::size_t dest = target > start ? target - len : target;
          Seq s = shifted(hyp, start, len, dest);
          std::size_t ed = edit_distance(s, ref);
          if (ed + 1 < best_total) {
            best_total = ed + 1;
            best_ed = ed;
            best_seq = std::move(s);
          }
        }
        if (!any) break;
      }
    }
    if (best_seq.empty()) return result;
    hyp = std::move(best_seq);
    result.edits = best_ed;
    ++result.shifts;
  }
}

}  // namespace

TerResult ter_detail(const Tokens& hypothesis, std::span<const Tokens> references,
                     bool allow_shifts) {
  std::unordered_map<std::string, int> ids;
  auto encode = [&](const Tokens& t) {
    Seq s;
    s.reserve(t.size());
    for (const auto& w : t) s.push_back(ids.emplace(w, static_cast<int>(ids.size())).first->second);
    return s;
  };
  const Seq hyp = encode(hypothesis);
  bool found = false;
  TerResult best;
  for (const auto& r : references) {
    if (r.empty()) continue;
    const Seq ref = encode(r);
    ShiftSearch s{edit_distance(hyp, ref), 0};
    if (allow_shifts) {
      s = hyp.size() <= kExactShiftSearchTokens ? exact_shift_search(hyp, ref)
                                                : greedy_shift_search(hyp, ref);
    }
    TerResult candidate{static_cast<double>(s.edits + s.shifts), static_cast<double>(ref.size()),
                        s.shifts};
    if (!found || candidate.rate() < best.rate()) best = candidate;
    found = true;
  }
  if (!found) throw Error("ter: every reference is empty");
  return best;
}

double ter(const Tokens& hypothesis, std::span<const Tokens> references) {
  return ter_detail(hypothesis, references).rate();
}

double corpus_ter(std::span<const EvalPair> corpus) {
  if (corpus.empty()) throw Error("ter: empty corpus");
  double edits = 0.0, length = 0.0;
  for (const auto& p : corpus) {
    auto r = ter_detail(p.hypothesis, p.references);
    edits += r.edits;
    length += r.ref_length;
  }
  return edits / length;
}

// ---- METEOR ----

double MeteorResult::score() const {
  if (matches == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double f_mean =
      10.0 * m / (static_cast<double>(hyp_length) + 9.0 * static_cast<double>(ref_length));
  const double frag = static_cast<double>(chunks) / m;
  return f_mean * (1.0 - 0.5 * frag * frag * frag);
}

namespace {

bool synonymous(const std::string& a, const std::string& b, const MeteorResources& res) {
  if (!res.synonyms) return false;
  std::vector<std::string> keys{a};
  if (res.stemmer) keys.push_back(res.stemmer->stem(a));
  std::string b_stem = res.stemmer ? res.stemmer->stem(b) : b;
  for (const auto& k : keys) {
    auto it = res.synonyms->find(k);
    if (it == res.synonyms->end()) continue;
    for (const auto& s : it->second) {
      if (s == b || s == b_stem) return true;
    }
  }
  return false;
}

MeteorResult meteor_against(const Tokens& hyp, const Tokens& ref, const MeteorResources& res) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> hyp_to_ref(hyp.size(), kNone);
  std::vector<char> ref_used(ref.size(), 0);
  std::vector<std::string> hyp_stem, ref_stem;
  if (res.stemmer) {
    for (const auto& t : hyp) hyp_stem.push_back(res.stemmer->stem(t));
    for (const auto& t : ref) ref_stem.push_back(res.stemmer->stem(t));
  }

  auto run_stage = [&](auto&& same) {
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      if (hyp_to_ref[i] != kNone) continue;
      std::size_t preferred = kNone;
      if (i > 0 && hyp_to_ref[i - 1] != kNone) preferred = hyp_to_ref[i - 1] + 1;
      std::size_t chosen = kNone;
      if (preferred < ref.size() && !ref_used[preferred] && same(i, preferred)) {
        chosen = preferred;
      } else {
        for (std::size_t j = 0; j < ref.size(); ++j) {
          if (!ref_used[j] && same(i, j)) {
            chosen = j;
            break;
          }
        }
      }
      if (chosen != kNone) {
        hyp_to_ref[i] = chosen;
        ref_used[chosen] = 1;
      }
    }
  };
  run_stage([&](std::size_t i, std::size_t j) { return hyp[i] == ref[j]; });
  if (res.stem_stage && res.stemmer) {
    run_stage([&](std::size_t i, std::size_t j) { return hyp_stem[i] == ref_stem[j]; });
  }
  if (res.synonym_stage && res.synonyms) {
    run_stage([&](std::size_t i, std::size_t j) { return synonymous(hyp[i], ref[j], res); });
  }

  MeteorResult r;
  r.hyp_length = hyp.size();
  r.ref_length = ref.size();
  std::size_t prev_ref = kNone;
  bool prev_matched = false;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    if (hyp_to_ref[i] == kNone) {
      prev_matched = false;
      continue;
    }
    ++r.matches;
    if (!prev_matched || hyp_to_ref[i] != prev_ref + 1) ++r.chunks;
    prev_ref = hyp_to_ref[i];
    prev_matched = true;
  }
  return r;
}

}  // namespace

MeteorResult meteor_detail(const Tokens& hypothesis, std::span<const Tokens> references,
                           const MeteorResources& resources) {
  bool found = false;
  MeteorResult best;
  for (const auto& r : references) {
    if (r.empty()) continue;
    auto candidate = meteor_against(hypothesis, r, resources);
    if (!found || candidate.score() > best.score()) best = candidate;
    found = true;
  }
  if (!found) throw Error("meteor: every reference is empty");
  return best;
}

double meteor_lite(const Tokens& hypothesis, std::span<const Tokens> references,
                   const MeteorResources& resources) {
  return meteor_detail(hypothesis, references, resources).score();
}

double corpus_meteor(std::span<const EvalPair> corpus, const MeteorResources& resources) {
  return CorpusScorer(corpus, Metric::meteor, resources).score_all();
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::bleu:
      return "bleu";
    case Metric::nist:
      return "nist";
    case Metric::ter:
      return "ter";
    case Metric::meteor:
      return "meteor";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "bleu") return Metric::bleu;
  if (name == "nist") return Metric::nist;
  if (name == "ter") return Metric::ter;
  if (name == "meteor") return Metric::meteor;
  throw Error("unknown metric \"" + std::string(name) + "\"");
}

// ---- corpus scoring and bootstrap ----

namespace {
constexpr std::size_t kBleuOrder = 4;
constexpr std::size_t kNistOrder = 5;
}  // namespace

CorpusScorer::CorpusScorer(std::span<const EvalPair> corpus, Metric metric,
                           const MeteorResources& resources)
    : metric_(metric), count_(corpus.size()) {
  if (corpus.empty()) throw Error(std::string(metric_name(metric)) + ": empty corpus");
  std::optional<NistWeights> weights;
  switch (metric) {
    case Metric::bleu:
      width_ = 2 * kBleuOrder + 2;
      break;
    case Metric::nist:
      width_ = 2 * kNistOrder + 2;
      weights.emplace(corpus, kNistOrder);
      break;
    case Metric::ter:
      width_ = 2;
      break;
    case Metric::meteor:
      width_ = 4;
      break;
  }
  stats_.reserve(count_ * width_);
  for (const auto& p : corpus) {
    std::vector<double> row;
    switch (metric) {
      case Metric::bleu:
        row = bleu_row(p, kBleuOrder);
        break;
      case Metric::nist:
        row = nist_row(p, kNistOrder, *weights);
        break;
      case Metric::ter: {
        auto r = ter_detail(p.hypothesis, p.references);
        row = {r.edits, r.ref_length};
        break;
      }
      case Metric::meteor: {
        auto r = meteor_detail(p.hypothesis, p.references, resources);
        row = {static_cast<double>(r.matches), static_cast<double>(r.chunks),
               static_cast<double>(r.hyp_length), static_cast<double>(r.ref_length)};
        break;
      }
    }
    stats_.insert(stats_.end(), row.begin(), row.end());
  }
}

double CorpusScorer::score_all() const {
  std::vector<std::size_t> all(count_);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return score(all);
}

double CorpusScorer::score(std::span<const std::size_t> indices) const {
  std::vector<double> sums(width_, 0.0);
  for (std::size_t i : indices) {
    if (i >= count_) throw Error("CorpusScorer: sentence index out of range");
    for (std::size_t k = 0; k < width_; ++k) sums[k] += stats_[i * width_ + k];
  }
  switch (metric_) {
    case Metric::bleu:
      return bleu_from(sums, kBleuOrder);
    case Metric::nist:
      return nist_from(sums, kNistOrder);
    case Metric::ter:
      return sums[1] > 0.0 ? sums[0] / sums[1] : 0.0;
    case Metric::meteor: {
      MeteorResult r;
      r.matches = static_cast<std::size_t>(sums[0]);
      r.chunks = static_cast<std::size_t>(sums[1]);
      r.hyp_length = static_cast<std::size_t>(sums[2]);
      r.ref_length = static_cast<std::size_t>(sums[3]);
      return r.score();
    }
  }
  return 0.0;
}

double corpus_score(std::span<const EvalPair> corpus, Metric metric,
                    const MeteorResources& resources) {
  switch (metric) {
    case Metric::bleu:
      return bleu(corpus);
    case Metric::nist:
      return nist(corpus);
    case Metric::ter:
      return corpus_ter(corpus);
    case Metric::meteor:
      return corpus_meteor(corpus, resources);
  }
  return 0.0;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

BootstrapResult bootstrap_diff(std::span<const EvalPair> sys_a, std::span<const EvalPair> sys_b,
                               Metric metric, std::size_t n_resamples, std::uint64_t seed,
                               const MeteorResources& resources) {
  if (sys_a.size() != sys_b.size()) {
    throw Error("bootstrap_diff: systems scored on " + std::to_string(sys_a.size()) + " and " +
                std::to_string(sys_b.size()) + " sentences");
  }
  if (n_resamples == 0) throw Error("bootstrap_diff: n_resamples must be positive");
  CorpusScorer a(sys_a, metric, resources);
  CorpusScorer b(sys_b, metric, resources);
  BootstrapResult result;
  result.resamples = n_resamples;
  result.observed_diff = a.score_all() - b.score_all();

  Rng rng(seed);
  const std::size_t n = a.size();
  std::vector<std::size_t> sample(n);
  std::vector<double> diffs;
  diffs.reserve(n_resamples);
  std::size_t against = 0;
  for (std::size_t r = 0; r < n_resamples; ++r) {
    for (auto& i : sample) i = static_cast<std::size_t>(rng.below(n));
    const double d = a.score(sample) - b.score(sample);
    diffs.push_back(d);
    if ((result.observed_diff > 0 && d <= 0) || (result.observed_diff < 0 && d >= 0)) ++against;
  }
  result.mean_diff = std::accumulate(diffs.begin(), diffs.end(), 0.0) /
                     static_cast<double>(diffs.size());
  std::sort(diffs.begin(), diffs.end());
  result.ci_low = quantile(diffs, 0.025);
  result.ci_high = quantile(diffs, 0.975);
  result.p_value = result.observed_diff == 0.0
                       ? 1.0
                       : static_cast<double>(against) / static_cast<double>(n_resamples);
  return result;
}

}  // namespace parmine
