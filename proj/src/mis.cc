// Copyright 2026 The iset-lab Authors
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

#include "isetlab/mis.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

#include "isetlab/errors.h"
#include "isetlab/online.h"

namespace isetlab {
namespace {

using Word = std::uint64_t;

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= Word{1} << (i & 63); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }
  std::size_t words() const { return words_.size(); }
  Word word(std::size_t i) const { return words_[i]; }
  Word& word(std::size_t i) { return words_[i]; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        fn(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::vector<Word> words_;
};

// Lexicographic branch and bound on local indices 0..k-1.
class MisSearch {
 public:
  MisSearch(std::vector<Bitset> conflict, std::vector<Bitset> compatible,
            std::size_t cap)
      : conflict_(std::move(conflict)),
        compatible_(std::move(compatible)),
        cap_(cap),
        words_(conflict_.empty() ? 0 : conflict_[0].words()) {}

  std::vector<std::size_t> run(std::size_t k) {
    if (k == 0 || cap_ == 0) return {};
    Bitset all(k);
    for (std::size_t i = 0; i < k; ++i) all.set(i);
    expand(all);
    return best_;
  }

 private:
  void record() {
    if (current_.size() > best_.size()) {
      best_ = current_;
      if (best_.size() >= cap_) done_ = true;
    }
  }

  // Clique-cover bound for every suffix of `order`: bound[j] bounds the
  // independence number of {order[j], ..., order.back()}.
  void suffix_bounds(const std::vector<std::size_t>& order,
                     std::vector<std::size_t>& bound) {
    classes_.clear();
    bound.assign(order.size(), 0);
    for (std::size_t j = order.size(); j-- > 0;) {
      const Bitset& adj = conflict_[order[j]];
      bool placed = false;
      for (Bitset& members : classes_) {
        bool fits = true;
        for (std::size_t w = 0; w < words_; ++w) {
          if ((members.word(w) & ~adj.word(w)) != 0) {
            fits = false;
            break;
          }
        }
        if (fits) {
          members.set(order[j]);
          placed = true;
          break;
        }
      }
      if (!placed) {
        classes_.emplace_back(words_ * 64);
        classes_.back().set(order[j]);
      }
      bound[j] = classes_.size();
    }
  }

  void expand(const Bitset& candidates) {
    std::vector<std::size_t> order;
    candidates.for_each([&](std::size_t i) { order.push_back(i); });
    std::vector<std::size_t> bound;
    suffix_bounds(order, bound);
    for (std::size_t j = 0; j < order.size() && !done_; ++j) {
      if (current_.size() + bound[j] <= best_.size()) break;
      const std::size_t v = order[j];
      current_.push_back(v);
      record();
      if (!done_) {
        Bitset next(words_ * 64);
        bool any = false;
        const Bitset& compat = compatible_[v];
        for (std::size_t w = 0; w < words_; ++w) {
          Word bits = candidates.word(w) & compat.word(w);
          // keep only indices greater than v
          const std::size_t vw = v >> 6;
          if (w < vw) bits = 0;
          if (w == vw) {
            const std::size_t shift = (v & 63) + 1;
            bits &= shift == 64 ? Word{0} : ~Word{0} << shift;
          }
          next.word(w) = bits;
          any = any || bits != 0;
        }
        if (any) expand(next);
      }
      current_.pop_back();
    }
  }

  std::vector<Bitset> conflict_;
  std::vector<Bitset> compatible_;
  std::size_t cap_;
  std::size_t words_;
  std::vector<Bitset> classes_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  bool done_ = false;
};

}  // namespace

std::vector<Vertex> mis_bruteforce(std::span<const Vertex> vertices,
                                   const PairStatusFn& status,
                                   const MisOptions& options) {
  std::vector<Vertex> labels(vertices.begin(), vertices.end());
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw UsageError("mis_bruteforce: duplicate vertex in input");
  }
  const std::size_t k = labels.size();
  if (k > options.limit) {
    throw LimitExceeded("mis_bruteforce: " + std::to_string(k) +
                        " vertices exceeds the limit of " +
                        std::to_string(options.limit));
  }
  const std::size_t bits = ((k + 63) / 64) * 64;
  std::vector<Bitset> conflict(k, Bitset(bits));
  std::vector<Bitset> compatible(k, Bitset(bits));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const PairKey pair = PairKey::of(labels[i], labels[j]);
      const auto s = status(pair);
      if (!s.has_value()) {
        throw UsageError("mis_bruteforce: status of pair {" +
                         std::to_string(pair.u) + ", " +
                         std::to_string(pair.v) + "} is unknown");
      }
      if (*s == EdgeStatus::kPresent) {
        conflict[i].set(j);
        conflict[j].set(i);
      } else {
        compatible[i].set(j);
        compatible[j].set(i);
      }
    }
  }
  const std::size_t cap = options.cap.value_or(k);
  MisSearch search(std::move(conflict), std::move(compatible), cap);
  std::vector<Vertex> out;
  for (std::size_t i : search.run(k)) out.push_back(labels[i]);
  return out;
}

std::vector<Vertex> mis_bruteforce(std::span<const Vertex> vertices,
                                   const EdgeOracle& graph,
                                   const MisOptions& options) {
  return mis_bruteforce(
      vertices,
      [&graph](PairKey pair) -> std::optional<EdgeStatus> {
        return graph.status(pair);
      },
      options);
}

std::vector<Vertex> mis_bruteforce(std::span<const Vertex> vertices,
                                   const Transcript& transcript,
                                   const MisOptions& options) {
  return mis_bruteforce(
      vertices,
      [&transcript](PairKey pair) -> std::optional<EdgeStatus> {
        if (!transcript.is_revealed(pair)) return std::nullopt;
        return transcript.status(pair);
      },
      options);
}

std::vector<Vertex> mis_bruteforce(const EdgeOracle& graph,
                                   const MisOptions& options) {
  std::vector<Vertex> all(graph.n());
  std::iota(all.begin(), all.end(), Vertex{0});
  return mis_bruteforce(all, graph, options);
}

}  // namespace isetlab
