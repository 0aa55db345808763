#pragma once

#include <array>
#include <functional>
#include <initializer_list>
#include <vector>

#include "nsolit/expr.hpp"

namespace nsolit {

/// Dense row-major table of expressions (rank 0..4).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);

  [[nodiscard]] const std::vector<std::size_t>& shape() const { return shape_; }
  [[nodiscard]] std::size_t rank() const { return shape_.size(); }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  template <class... I>
  expr::Expr& operator()(I... idx) {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <class... I>
  const expr::Expr& operator()(I... idx) const {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  [[nodiscard]] std::vector<expr::Expr>& data() { return data_; }
  [[nodiscard]] const std::vector<expr::Expr>& data() const { return data_; }

  /// Multi-index of a flat position.
  [[nodiscard]] std::vector<std::size_t> index_of(std::size_t flat) const;

  /// Applies simplify_basic to every entry.
  [[nodiscard]] Tensor simplified() const;
  [[nodiscard]] Tensor map(const std::function<expr::Expr(const expr::Expr&)>& f) const;
  /// True when every entry simplified to the constant 0.
  [[nodiscard]] bool all_zero() const;

 private:
  std::size_t offset(std::initializer_list<std::size_t> idx) const;

  std::vector<std::size_t> shape_;
  std::vector<expr::Expr> data_;
};

/// Matrix view helpers for rank-2 tensors.
[[nodiscard]] Tensor tensor_from(const expr::Matrix& m);
[[nodiscard]] expr::Matrix matrix_from(const Tensor& t);

}  // namespace nsolit
