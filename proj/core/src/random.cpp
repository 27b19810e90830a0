#include "parmine/random.hpp"

#include <algorithm>
#include <unordered_set>

#include "parmine/error.hpp"

namespace parmine {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error("Rng::below: bound must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    std::uint64_t x = engine_();
    if (x < limit) return x % bound;
  }
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
  if (k > n) throw Error("Rng::sample_indices: k exceeds n");
  std::vector<std::size_t> picked;
  picked.reserve(k);
  if (2 * k > n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(all[i], all[j]);
      picked.push_back(all[i]);
    }
  } else {
    std::unordered_set<std::size_t> seen;
    while (picked.size() < k) {
      std::size_t x = static_cast<std::size_t>(below(n));
      if (seen.insert(x).second) picked.push_back(x);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace parmine
