#include "nsolit/tensor.hpp"

#include <numeric>

#include "nsolit/parallel.hpp"

namespace nsolit {

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  const std::size_t n = std::accumulate(shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>());
  data_.assign(n, expr::Expr(0.0));
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != shape_.size()) throw DimensionMismatch("tensor index has wrong rank");
  std::size_t off = 0;
  std::size_t k = 0;
  for (std::size_t i : idx) {
    if (i >= shape_[k]) throw DimensionMismatch("tensor index out of range");
    off = off * shape_[k] + i;
    ++k;
  }
  return off;
}

std::vector<std::size_t> Tensor::index_of(std::size_t flat) const {
  std::vector<std::size_t> idx(shape_.size());
  for (std::size_t k = shape_.size(); k-- > 0;) {
    idx[k] = flat % shape_[k];
    flat /= shape_[k];
  }
  return idx;
}

Tensor Tensor::map(const std::function<expr::Expr(const expr::Expr&)>& f) const {
  Tensor out(shape_);
  parallel_for(data_.size(), [&](std::size_t i) { out.data_[i] = f(data_[i]); });
  return out;
}

Tensor Tensor::simplified() const { return map([](const expr::Expr& e) { return expr::simplify_basic(e); }); }

bool Tensor::all_zero() const {
  for (const auto& e : data_)
    if (!e.is_zero()) return false;
  return true;
}

Tensor tensor_from(const expr::Matrix& m) {
  Tensor t({m.size(), m.empty() ? 0 : m[0].size()});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t(i, j) = m[i][j];
  return t;
}

expr::Matrix matrix_from(const Tensor& t) {
  if (t.rank() != 2) throw DimensionMismatch("matrix_from needs a rank-2 tensor");
  expr::Matrix m(t.shape()[0], std::vector<expr::Expr>(t.shape()[1]));
  for (std::size_t i = 0; i < t.shape()[0]; ++i)
    for (std::size_t j = 0; j < t.shape()[1]; ++j) m[i][j] = t(i, j);
  return m;
}

}  // namespace nsolit
