#pragma once

#include <cstddef>
#include <vector>

namespace matchlab {

/// Maximum bipartite matching by augmenting paths (Kuhn). Rows are tried in index
/// order and each row's adjacency list in the order given, so results are deterministic.
class BipartiteMatcher {
 public:
  static constexpr int kUnmatched = -1;

  BipartiteMatcher(std::size_t rows, std::size_t cols);

  void add_edge(std::size_t row, std::size_t col);
  const std::vector<std::size_t>& neighbors(std::size_t row) const { return adj_[row]; }

  /// Runs to a maximum matching and returns its size.
  std::size_t solve();

  /// row -> col, kUnmatched if free. Valid after solve().
  const std::vector<int>& row_match() const { return row_match_; }
  const std::vector<int>& col_match() const { return col_match_; }

  /// Rows and columns reachable from free rows along alternating paths
  /// (non-matching edge row->col, matching edge col->row). Valid after solve().
  /// The reachable rows R satisfy N(R) = reachable cols and #N(R) = #R - #free rows.
  void alternating_reach(std::vector<bool>& rows, std::vector<bool>& cols) const;

 private:
  bool augment(std::size_t row, std::vector<bool>& seen);

  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> row_match_;
  std::vector<int> col_match_;
};

}  // namespace matchlab
