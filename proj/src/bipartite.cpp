#include "matchlab/bipartite.hpp"

#include <deque>

namespace matchlab {

BipartiteMatcher::BipartiteMatcher(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), adj_(rows), row_match_(rows, kUnmatched), col_match_(cols, kUnmatched) {}

void BipartiteMatcher::add_edge(std::size_t row, std::size_t col) { adj_[row].push_back(col); }

bool BipartiteMatcher::augment(std::size_t row, std::vector<bool>& seen) {
  for (auto col : adj_[row]) {
    if (seen[col]) continue;
    seen[col] = true;
    if (col_match_[col] == kUnmatched || augment(static_cast<std::size_t>(col_match_[col]), seen)) {
      row_match_[row] = static_cast<int>(col);
      col_match_[col] = static_cast<int>(row);
      return true;
    }
  }
  return false;
}

std::size_t BipartiteMatcher::solve() {
  std::size_t size = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_match_[r] != kUnmatched) {
      ++size;
      continue;
    }
    std::vector<bool> seen(cols_, false);
    if (augment(r, seen)) ++size;
  }
  return size;
}

void BipartiteMatcher::alternating_reach(std::vector<bool>& rows, std::vector<bool>& cols) const {
  rows.assign(rows_, false);
  cols.assign(cols_, false);
  std::deque<std::size_t> queue;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_match_[r] == kUnmatched) {
      rows[r] = true;
      queue.push_back(r);
    }
  }
  while (!queue.empty()) {
    auto r = queue.front();
    queue.pop_front();
    for (auto c : adj_[r]) {
      if (cols[c]) continue;
      cols[c] = true;
      int next = col_match_[c];
      if (next != kUnmatched && !rows[next]) {
        rows[next] = true;
        queue.push_back(static_cast<std::size_t>(next));
      }
    }
  }
}

}  // namespace matchlab
