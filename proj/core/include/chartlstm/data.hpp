#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "chartlstm/tree.hpp"
#include "chartlstm/vocab.hpp"

namespace chartlstm {

inline constexpr int kLabelEntailment = 0;
inline constexpr int kLabelNeutral = 1;
inline constexpr int kLabelContradiction = 2;

const char* label_name(int label);
int parse_label(const std::string& name);  // throws on unknown label

// Splits on ASCII whitespace runs and lowercases ASCII letters. No further
// normalization.
std::vector<std::string> tokenize(const std::string& text);

struct EntailmentExample {
  std::vector<std::string> premise;
  std::vector<std::string> hypothesis;
  int label = 0;
  std::unique_ptr<BinaryTree> premise_tree;    // optional
  std::unique_ptr<BinaryTree> hypothesis_tree; // optional

  bool has_trees() const { return premise_tree != nullptr; }
};

struct DefinitionExample {
  std::vector<std::string> definition;
  int target = -1;  // index into the output vocabulary
};

// TSV: label, sentence1, sentence2 [, binary_parse1, binary_parse2].
// Lines starting with '#' and blank lines are skipped; everything else must
// parse or loading fails with the offending line number.
std::vector<EntailmentExample> load_entailment(const std::string& path);
std::vector<EntailmentExample> load_entailment(std::istream& in,
                                               const std::string& origin);

// TSV: target_word, definition. Targets must be present in output_vocab.
std::vector<DefinitionExample> load_definitions(const std::string& path,
                                                const Vocabulary& output_vocab);
std::vector<DefinitionExample> load_definitions(std::istream& in,
                                                const Vocabulary& output_vocab,
                                                const std::string& origin);

// One word per line; blank lines and '#' comments skipped.
std::vector<std::string> load_word_list(const std::string& path);

}  // namespace chartlstm
