#include "chartlstm/embeddings.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace chartlstm {

EmbeddingTable load_pretrained(const std::string& path, const Vocabulary& vocab,
                               int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  return load_pretrained(in, vocab, dim, path);
}

EmbeddingTable load_pretrained(std::istream& in, const Vocabulary& vocab,
                               int dim, const std::string& origin) {
  EmbeddingTable table(vocab.size(), dim);
  std::vector<bool> filled(static_cast<size_t>(vocab.size()), false);
  std::vector<double> mean(static_cast<size_t>(dim), 0.0);
  long loaded = 0;
  long line_count = 0;

  std::string line;
  while (std::getline(in, line)) {
    ++line_count;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> v;
    v.reserve(static_cast<size_t>(dim));
    double x;
    while (fields >> x) v.push_back(x);
    if (static_cast<int>(v.size()) != dim)
      throw std::runtime_error(origin + ":" + std::to_string(line_count) +
                               ": expected " + std::to_string(dim) +
                               " values, got " + std::to_string(v.size()));
    auto id = vocab.find(word);
    if (!id) continue;  // file may cover far more words than the vocabulary
    double* r = table.row(*id);
    for (int j = 0; j < dim; ++j) r[j] = v[static_cast<size_t>(j)];
    if (!filled[static_cast<size_t>(*id)]) {
      filled[static_cast<size_t>(*id)] = true;
      ++loaded;
      for (int j = 0; j < dim; ++j) mean[static_cast<size_t>(j)] += v[static_cast<size_t>(j)];
    }
  }
  if (line_count == 0)
    throw std::runtime_error(origin + ": empty embedding file");
  if (loaded == 0)
    throw std::runtime_error(origin + ": no vocabulary words found in file");

  for (int j = 0; j < dim; ++j) mean[static_cast<size_t>(j)] /= static_cast<double>(loaded);
  for (int i = 0; i < vocab.size(); ++i) {
    if (filled[static_cast<size_t>(i)]) continue;
    double* r = table.row(i);
    for (int j = 0; j < dim; ++j) r[j] = mean[static_cast<size_t>(j)];
  }
  return table;
}

EmbeddingTable pca_reduce(const EmbeddingTable& table, int k) {
  const int n = table.rows();
  const int d = table.dim();
  if (k > d)
    throw std::invalid_argument("pca_reduce: k = " + std::to_string(k) +
                                " exceeds dimension " + std::to_string(d));
  if (k < 1) throw std::invalid_argument("pca_reduce: k must be positive");

  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = table.row(i)[j];

  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd cov = (x.transpose() * x) / denom;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("pca_reduce: eigendecomposition failed");

  // Eigen returns eigenvalues in ascending order; take the top k from the end.
  Eigen::MatrixXd components(d, k);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - c);
    for (int j = 0; j < d; ++j) {
      if (std::abs(v(j)) > 1e-12) {
        if (v(j) < 0) v = -v;
        break;
      }
    }
    components.col(c) = v;
  }

  const Eigen::MatrixXd projected = x * components;
  EmbeddingTable out(n, k);
  out.trainable = table.trainable;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) out.row(i)[j] = projected(i, j);
  return out;
}

}  // namespace chartlstm
