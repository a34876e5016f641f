#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace chartlstm {

// Bijection between words and indices 0..size-1.
class Vocabulary {
 public:
  int add(const std::string& word) {
    auto it = index_.find(word);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(words_.size());
    index_.emplace(word, id);
    words_.push_back(word);
    return id;
  }

  std::optional<int> find(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int at(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end())
      throw std::out_of_range("word not in vocabulary: " + word);
    return it->second;
  }

  const std::string& word(int id) const { return words_.at(static_cast<size_t>(id)); }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> words_;
};

}  // namespace chartlstm
