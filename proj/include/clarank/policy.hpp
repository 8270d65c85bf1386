#pragma once

#include <array>
#include <filesystem>
#include <string_view>

#include "clarank/conversation.hpp"
#include "clarank/ranker.hpp"

namespace clarank {

/// Maps every (polarity, length) cell to the composition used for it.
///
/// The built-in table interpolates Q0 with the answer alone for multi-word
/// negative answers, with question and answer for positive answers and for
/// multi-word "other" answers, and uses Q0 alone everywhere else.
class PolicyTable {
 public:
  PolicyTable();  // built-in heuristic rules

  static const PolicyTable& heuristic();

  /// JSON object mapping "polarity,length" (e.g. "N,multi") to one of
  /// "q0", "q0q", "q0a", "q0qa". Cells not mentioned keep the built-in choice.
  static PolicyTable load(const std::filesystem::path& path);
  static PolicyTable parse(std::string_view json_text);

  CompositionSpec select(AnswerType type) const { return cells_[slot(type)]; }
  void set(AnswerType type, CompositionSpec spec) { cells_[slot(type)] = spec; }

 private:
  static std::size_t slot(AnswerType t) {
    return static_cast<std::size_t>(t.polarity) * 2 + static_cast<std::size_t>(t.length);
  }

  std::array<CompositionSpec, 8> cells_{};
};

inline CompositionSpec select_composition(AnswerType type) {
  return PolicyTable::heuristic().select(type);
}

}  // namespace clarank
