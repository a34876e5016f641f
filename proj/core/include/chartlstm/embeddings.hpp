#pragma once

#include <iosfwd>
#include <string>

#include "chartlstm/tensor.hpp"
#include "chartlstm/vocab.hpp"

namespace chartlstm {

// One row per vocabulary entry, in vocabulary index order.
struct EmbeddingTable {
  Tensor matrix;  // |V| x dim
  bool trainable = true;

  EmbeddingTable() = default;
  EmbeddingTable(int rows, int dim) : matrix(Shape::mat(rows, dim)) {}

  int rows() const { return matrix.shape.rows(); }
  int dim() const { return matrix.shape.cols(); }
  double* row(int r) { return matrix.value.data() + static_cast<size_t>(r) * dim(); }
  const double* row(int r) const {
    return matrix.value.data() + static_cast<size_t>(r) * dim();
  }
};

// Reads "word v1 .. vd" lines. Rows for words found in the file are copied;
// every word missing from the file gets the mean of all loaded rows.
EmbeddingTable load_pretrained(const std::string& path, const Vocabulary& vocab,
                               int dim);
EmbeddingTable load_pretrained(std::istream& in, const Vocabulary& vocab,
                               int dim, const std::string& origin = "<stream>");

// Projects mean-centered rows onto the top-k principal components, ordered by
// descending eigenvalue. Sign convention: the first nonzero entry of each
// component is positive.
EmbeddingTable pca_reduce(const EmbeddingTable& table, int k);

}  // namespace chartlstm
