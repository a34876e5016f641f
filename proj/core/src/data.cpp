#include "chartlstm/data.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chartlstm {

namespace {

[[noreturn]] void fail_line(const std::string& origin, long line,
                            const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool skippable(const std::string& line) {
  if (line.empty()) return true;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return line[0] == '#' || false;
  return true;
}

// Checks that the parse column covers exactly the sentence tokens, in order.
void check_tree(const ParsedTree& parsed,
                const std::vector<std::string>& tokens,
                const std::string& origin, long line, const char* which) {
  if (parsed.tokens != tokens)
    fail_line(origin, line,
              std::string(which) + " parse yield does not match its sentence");
}

}  // namespace

const char* label_name(int label) {
  switch (label) {
    case kLabelEntailment: return "entailment";
    case kLabelNeutral: return "neutral";
    case kLabelContradiction: return "contradiction";
  }
  throw std::out_of_range("bad label index: " + std::to_string(label));
}

int parse_label(const std::string& name) {
  if (name == "entailment") return kLabelEntailment;
  if (name == "neutral") return kLabelNeutral;
  if (name == "contradiction") return kLabelContradiction;
  throw std::runtime_error("unknown label: '" + name + "'");
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        tokens.push_back(cur);
        cur.clear();
      }
      continue;
    }
    cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

std::vector<EntailmentExample> load_entailment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open entailment file: " + path);
  return load_entailment(in, path);
}

std::vector<EntailmentExample> load_entailment(std::istream& in,
                                               const std::string& origin) {
  std::vector<EntailmentExample> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3 && fields.size() != 5)
      fail_line(origin, line_no,
                "expected 3 or 5 tab-separated fields, got " +
                    std::to_string(fields.size()));
    EntailmentExample ex;
    try {
      ex.label = parse_label(fields[0]);
    } catch (const std::exception& e) {
      fail_line(origin, line_no, e.what());
    }
    ex.premise = tokenize(fields[1]);
    ex.hypothesis = tokenize(fields[2]);
    if (ex.premise.empty()) fail_line(origin, line_no, "empty premise");
    if (ex.hypothesis.empty()) fail_line(origin, line_no, "empty hypothesis");
    if (fields.size() == 5) {
      try {
        ParsedTree p = parse_bracketed(fields[3]);
        ParsedTree h = parse_bracketed(fields[4]);
        check_tree(p, ex.premise, origin, line_no, "premise");
        check_tree(h, ex.hypothesis, origin, line_no, "hypothesis");
        ex.premise_tree = std::move(p.tree);
        ex.hypothesis_tree = std::move(h.tree);
      } catch (const std::runtime_error& e) {
        fail_line(origin, line_no, e.what());
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<DefinitionExample> load_definitions(const std::string& path,
                                                const Vocabulary& output_vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open definitions file: " + path);
  return load_definitions(in, output_vocab, path);
}

std::vector<DefinitionExample> load_definitions(std::istream& in,
                                                const Vocabulary& output_vocab,
                                                const std::string& origin) {
  std::vector<DefinitionExample> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2)
      fail_line(origin, line_no,
                "expected 2 tab-separated fields, got " +
                    std::to_string(fields.size()));
    auto target_tokens = tokenize(fields[0]);
    if (target_tokens.size() != 1)
      fail_line(origin, line_no, "target must be a single word");
    DefinitionExample ex;
    auto id = output_vocab.find(target_tokens[0]);
    if (!id)
      fail_line(origin, line_no,
                "target word not in output vocabulary: " + target_tokens[0]);
    ex.target = *id;
    ex.definition = tokenize(fields[1]);
    if (ex.definition.empty()) fail_line(origin, line_no, "empty definition");
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word list: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    auto toks = tokenize(line);
    if (toks.size() != 1)
      throw std::runtime_error(path + ": expected one word per line");
    out.push_back(toks[0]);
  }
  return out;
}

}  // namespace chartlstm
