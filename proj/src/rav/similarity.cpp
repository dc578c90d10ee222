#include <vector>

#include "svgloop/rav.hpp"

namespace svgloop {
namespace {

struct Match {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};

// Longest common substring of a[alo,ahi) and b[blo,bhi). Among equally long
// matches the one starting earliest in `a`, then earliest in `b`, wins.
Match longest_match(std::string_view a, std::string_view b, std::size_t alo, std::size_t ahi, std::size_t blo,
                    std::size_t bhi, std::vector<std::size_t>& prev, std::vector<std::size_t>& cur) {
  Match best{alo, blo, 0};
  std::size_t width = bhi - blo;
  std::fill(prev.begin(), prev.begin() + width + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    cur[0] = 0;
    for (std::size_t j = blo; j < bhi; ++j) {
      std::size_t k = a[i] == b[j] ? prev[j - blo] + 1 : 0;
      cur[j - blo + 1] = k;
      if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace

double similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::size_t matched = 0;
  struct Range {
    std::size_t alo, ahi, blo, bhi;
  };
  std::vector<Range> todo{{0, a.size(), 0, b.size()}};
  while (!todo.empty()) {
    Range r = todo.back();
    todo.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    Match m = longest_match(a, b, r.alo, r.ahi, r.blo, r.bhi, prev, cur);
    if (m.size == 0) continue;
    matched += m.size;
    todo.push_back({r.alo, m.a, r.blo, m.b});
    todo.push_back({m.a + m.size, r.ahi, m.b + m.size, r.bhi});
  }
  return 2.0 * static_cast<double>(matched) / static_cast<double>(a.size() + b.size());
}

}  // namespace svgloop
