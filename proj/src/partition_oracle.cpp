#include "regulo/partition_oracle.hpp"

#include <numeric>
#include <string>

#include "regulo/error.hpp"

namespace regulo::oracle {

PartSet PartSet::make(long long k, long long m) {
  const PolyParams params = PolyParams::make(k, m);
  PartSet s{params.k, params.m, {}};
  const auto largest = static_cast<std::uint64_t>(k * m + k - 1);
  for (std::uint64_t p = 1; p <= largest; ++p) {
    if (p % static_cast<std::uint64_t>(k) != 0) s.parts.push_back(p);
  }
  return s;
}

std::uint64_t PartSet::total() const noexcept {
  return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
}

std::uint64_t Partition::weight() const noexcept {
  return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
}

namespace {

// Out-of-place subset-sum table truncated at `limit`.
std::vector<Coefficient> subset_sum_table(const PartSet& set, std::uint64_t limit) {
  std::vector<Coefficient> table(limit + 1, 0);
  table[0] = 1;
  std::vector<Coefficient> next;
  for (std::uint64_t p : set.parts) {
    if (p > limit) break;
    next = table;
    for (std::uint64_t s = p; s <= limit; ++s) {
      if (table[s - p] != 0) next[s] += table[s - p];
    }
    table.swap(next);
  }
  return table;
}

// Histogram of subset sums of parts[first, last), visiting every subset.
void visit_subsets(const std::vector<std::uint64_t>& parts, std::size_t i, std::size_t last,
                   std::uint64_t partial, std::vector<std::uint64_t>& histogram) {
  if (i == last) {
    ++histogram[partial];
    return;
  }
  visit_subsets(parts, i + 1, last, partial, histogram);
  visit_subsets(parts, i + 1, last, partial + parts[i], histogram);
}

std::vector<Coefficient> enumeration_table(const PartSet& set) {
  // Each half is enumerated in full; the two weight histograms are then
  // combined pairwise, so the result counts every subset exactly once.
  const std::size_t split = set.parts.size() / 2;
  std::uint64_t low_total = 0;
  std::uint64_t high_total = 0;
  for (std::size_t i = 0; i < set.parts.size(); ++i) {
    (i < split ? low_total : high_total) += set.parts[i];
  }
  std::vector<std::uint64_t> low(low_total + 1, 0);
  std::vector<std::uint64_t> high(high_total + 1, 0);
  visit_subsets(set.parts, 0, split, 0, low);
  visit_subsets(set.parts, split, set.parts.size(), 0, high);

  std::vector<Coefficient> table(low_total + high_total + 1, 0);
  for (std::uint64_t a = 0; a <= low_total; ++a) {
    if (low[a] == 0) continue;
    for (std::uint64_t b = 0; b <= high_total; ++b) {
      if (high[b] != 0) table[a + b] += Coefficient(low[a]) * high[b];
    }
  }
  return table;
}

struct Enumerator {
  const std::vector<std::uint64_t>& parts;
  std::vector<std::uint64_t> prefix_sums;  // prefix_sums[i] = parts[0] + ... + parts[i-1]
  std::size_t cap;
  std::vector<std::uint64_t> current;
  std::vector<Partition> out;

  // Chooses the next part among parts[0, upto), largest first.
  void descend(std::size_t upto, std::uint64_t remaining) {
    if (remaining == 0) {
      if (out.size() >= cap) {
        throw Error(ErrorKind::output_cap_exceeded,
                    "more than " + std::to_string(cap) + " partitions; use count instead");
      }
      out.push_back(Partition{current});
      return;
    }
    for (std::size_t i = upto; i-- > 0;) {
      if (prefix_sums[i + 1] < remaining) return;  // parts[0..i] cannot reach it
      if (parts[i] > remaining) continue;
      current.push_back(parts[i]);
      descend(i, remaining - parts[i]);
      current.pop_back();
    }
  }
};

}  // namespace

Coefficient count(long long k, long long m, long long n) {
  const PartSet set = PartSet::make(k, m);
  const std::uint64_t total = set.total();
  if (n < 0 || static_cast<std::uint64_t>(n) > total) return 0;
  // Complementation maps weight n to N-n, so only the smaller side is needed.
  const std::uint64_t target = std::min<std::uint64_t>(n, total - n);
  return subset_sum_table(set, target)[target];
}

std::vector<Partition> enumerate(long long k, long long m, long long n, std::size_t cap) {
  const PartSet set = PartSet::make(k, m);
  if (n < 0 || static_cast<std::uint64_t>(n) > set.total()) return {};
  Enumerator e{set.parts, std::vector<std::uint64_t>(set.parts.size() + 1, 0), cap, {}, {}};
  std::partial_sum(set.parts.begin(), set.parts.end(), e.prefix_sums.begin() + 1);
  e.descend(set.parts.size(), static_cast<std::uint64_t>(n));
  return std::move(e.out);
}

std::vector<Coefficient> count_table(long long k, long long m, TableMode mode) {
  const PartSet set = PartSet::make(k, m);
  const std::uint64_t total = set.total();
  switch (mode) {
    case TableMode::dp:
      if (total > kDpCap) {
        throw Error(ErrorKind::cap_exceeded, "N = " + std::to_string(total) +
                                                 " exceeds the DP oracle cap " +
                                                 std::to_string(kDpCap));
      }
      return subset_sum_table(set, total);
    case TableMode::enumeration:
      if (total > kEnumerationCap) {
        throw Error(ErrorKind::cap_exceeded, "N = " + std::to_string(total) +
                                                 " exceeds the enumeration oracle cap " +
                                                 std::to_string(kEnumerationCap));
      }
      return enumeration_table(set);
  }
  return {};
}

}  // namespace regulo::oracle
