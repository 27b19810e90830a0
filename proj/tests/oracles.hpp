#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance binary. Slow and obvious by design.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "parmine/analogy.hpp"
#include "parmine/random.hpp"
#include "parmine/text.hpp"

namespace parmine::oracle {

inline std::size_t edit_distance(const Tokens& a, const Tokens& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1,
                          t[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return t[a.size()][b.size()];
}

inline std::map<std::string, long> byte_counts(const std::string& s) {
  std::map<std::string, long> out;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t len = 1;
    const auto c = static_cast<unsigned char>(s[i]);
    if (c >= 0xf0) len = 4;
    else if (c >= 0xe0) len = 3;
    else if (c >= 0xc0) len = 2;
    ++out[s.substr(i, len)];
    i += len;
  }
  return out;
}

// Smallest of the eight tuples naming the same analogy square.
inline std::array<std::size_t, 4> canonical(std::size_t a, std::size_t b, std::size_t c,
                                            std::size_t d) {
  std::array<std::array<std::size_t, 4>, 8> forms = {{{a, b, c, d},
                                                      {b, a, d, c},
                                                      {c, d, a, b},
                                                      {d, c, b, a},
                                                      {a, c, b, d},
                                                      {c, a, d, b},
                                                      {b, d, a, c},
                                                      {d, b, c, a}}};
  return *std::min_element(forms.begin(), forms.end());
}

/// Every ordered 4-tuple of distinct sentences, checked directly.
inline std::vector<AnalogyQuadruple> analogies(const std::vector<Tokens>& s,
                                               std::size_t max_distance) {
  const std::size_t n = s.size();
  std::vector<std::size_t> dist(n * n);
  std::vector<std::string> text(n);
  for (std::size_t i = 0; i < n; ++i) {
    text[i] = join(s[i]);
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = edit_distance(s[i], s[j]);
  }
  // Character counts as dense vectors, so the constraint is a vector compare.
  std::map<std::string, std::size_t> alphabet;
  for (const auto& t : text) {
    for (const auto& [ch, count] : byte_counts(t)) alphabet.emplace(ch, alphabet.size());
  }
  std::vector<std::vector<long>> profile(n, std::vector<long>(alphabet.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [ch, count] : byte_counts(text[i])) profile[i][alphabet[ch]] = count;
  }
  auto profile_matches = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    for (std::size_t k = 0; k < alphabet.size(); ++k) {
      if (profile[a][k] - profile[b][k] != profile[c][k] - profile[d][k]) return false;
    }
    return true;
  };
  auto in_range = [&](std::size_t x) { return x >= 1 && x <= max_distance; };
  std::set<AnalogyQuadruple> found;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = dist[a * n + b];
      if (b == a || !in_range(ab)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t ac = dist[a * n + c];
        if (c == a || c == b || !in_range(ac)) continue;
        for (std::size_t d = 0; d < n; ++d) {
          if (dist[c * n + d] != ab || dist[b * n + d] != ac) continue;
          if (d == a || d == b || d == c) continue;
          if (!profile_matches(a, b, c, d)) continue;
          auto k = canonical(a, b, c, d);
          AnalogyQuadruple q;
          q.a = k[0];
          q.b = k[1];
          q.c = k[2];
          q.d = k[3];
          q.d_ab = q.d_cd = dist[q.a * n + q.b];
          q.d_ac = q.d_bd = dist[q.a * n + q.c];
          found.insert(q);
        }
      }
    }
  }
  return {found.begin(), found.end()};
}

inline bool occurs(const Tokens& phrase, const Tokens& ref) {
  return std::search(ref.begin(), ref.end(), phrase.begin(), phrase.end()) != ref.end();
}

/// Fewest edits + shifts over every sequence of block moves, each costing
/// one. As in TER, a moved block of up to ten words must occur in the
/// reference; it may go anywhere.
inline std::size_t ter_edits(const Tokens& hyp, const Tokens& ref) {
  std::set<Tokens> seen{hyp};
  std::vector<Tokens> level{hyp};
  std::size_t best = edit_distance(hyp, ref);
  for (std::size_t depth = 1; depth < best && !level.empty(); ++depth) {
    std::vector<Tokens> next;
    for (const auto& h : level) {
      for (std::size_t start = 0; start < h.size(); ++start) {
        for (std::size_t len = 1; len <= 10 && start + len <= h.size(); ++len) {
          Tokens block(h.begin() + start, h.begin() + start + len);
          if (!occurs(block, ref)) continue;
          Tokens rest = h;
          rest.erase(rest.begin() + start, rest.begin() + start + len);
          for (std::size_t dest = 0; dest <= rest.size(); ++dest) {
            Tokens moved = rest;
            moved.insert(moved.begin() + dest, block.begin(), block.end());
            if (!seen.insert(moved).second) continue;
            best = std::min(best, depth + edit_distance(moved, ref));
            next.push_back(std::move(moved));
          }
        }
      }
    }
    level = std::move(next);
  }
  return best;
}

/// Short sentences over a tiny vocabulary plus a few planted templates, so
/// that analogies are common.
inline std::vector<Tokens> analogy_corpus(std::size_t n, Rng& rng) {
  const std::vector<std::string> vocab = {"ala", "ma", "kota", "psa", "żółw", "i", "nie", "."};
  const std::vector<std::string> fillers = {"herbatę", "kawę", "sok", "wodę", "mleko"};
  std::vector<Tokens> out;
  while (out.size() < n) {
    Tokens t;
    if (rng.bernoulli(0.4)) {
      const char* heads[] = {"lubię", "mam", "chcę"};
      t = {heads[rng.below(3)], fillers[rng.below(fillers.size())], "."};
    } else {
      for (std::size_t k = 1 + rng.below(5); k > 0; --k) t.push_back(vocab[rng.below(vocab.size())]);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace parmine::oracle
