#include "nsolit/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace nsolit::hier {

VField::VField(std::size_t points, std::size_t dim, double length)
    : n_(points), p_(dim), length_(length), data_(points * dim, 0.0) {
  if (points < 8 || (points & (points - 1)) != 0) throw InvalidArgument("grid size must be a power of two >= 8");
  if (dim < 1) throw InvalidArgument("field dimension must be at least 1");
  if (!(length > 0.0)) throw InvalidArgument("domain length must be positive");
}

VField VField::sample(std::size_t points, std::size_t dim, double length,
                      const std::function<std::vector<double>(double)>& f) {
  VField v(points, dim, length);
  for (std::size_t j = 0; j < points; ++j) {
    const auto x = f(v.l(j));
    if (x.size() != dim) throw DimensionMismatch("sampled function returned wrong dimension");
    for (std::size_t c = 0; c < dim; ++c) v(c, j) = x[c];
  }
  return v;
}

void VField::require_grid(const VField& o, bool same_dim) const {
  if (!same_grid(o)) throw DimensionMismatch("fields live on different grids");
  if (same_dim && p_ != o.p_) throw DimensionMismatch("fields have different dimensions");
}

double VField::max_norm() const {
  double m = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (std::size_t c = 0; c < p_; ++c) s += (*this)(c, j) * (*this)(c, j);
    m = std::isnan(s) ? s : std::max(m, std::sqrt(s));
  }
  return m;
}

bool VField::finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

VField& VField::operator+=(const VField& o) {
  require_grid(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

VField& VField::operator-=(const VField& o) {
  require_grid(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

VField& VField::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

VField operator+(VField a, const VField& b) { return a += b; }
VField operator-(VField a, const VField& b) { return a -= b; }
VField operator*(double s, VField a) { return a *= s; }

VField axpy(const VField& a, double s, const VField& b) {
  a.require_grid(b);
  VField r = a;
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] += s * b.data()[i];
  return r;
}

VField dot(const VField& a, const VField& b) {
  a.require_grid(b);
  VField r(a.points(), 1, a.length());
  for (std::size_t c = 0; c < a.dim(); ++c)
    for (std::size_t j = 0; j < a.points(); ++j) r(0, j) += a(c, j) * b(c, j);
  return r;
}

VField norm2(const VField& a) { return dot(a, a); }

VField scale(const VField& s, const VField& v) {
  s.require_grid(v, false);
  if (s.dim() != 1) throw DimensionMismatch("scale expects a scalar field");
  VField r = v;
  for (std::size_t c = 0; c < v.dim(); ++c)
    for (std::size_t j = 0; j < v.points(); ++j) r(c, j) *= s(0, j);
  return r;
}

VField mul(const VField& a, const VField& b) {
  a.require_grid(b);
  VField r = a;
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] *= b.data()[i];
  return r;
}

VField map(const VField& a, const std::function<double(double)>& f) {
  VField r = a;
  for (double& x : r.data()) x = f(x);
  return r;
}

double max_abs_diff(const VField& a, const VField& b) {
  a.require_grid(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = std::abs(a.data()[i] - b.data()[i]);
    m = std::isnan(d) ? d : std::max(m, d);
  }
  return m;
}

VField random_field(std::size_t points, std::size_t dim, double length, Rng& rng, int modes) {
  VField v(points, dim, length);
  const double k0 = 2.0 * std::numbers::pi / length;
  for (std::size_t c = 0; c < dim; ++c) {
    for (int m = 1; m <= modes; ++m) {
      const double a = rng.uniform(-1.0, 1.0) / m;
      const double b = rng.uniform(-1.0, 1.0) / m;
      for (std::size_t j = 0; j < points; ++j) v(c, j) += a * std::cos(m * k0 * v.l(j)) + b * std::sin(m * k0 * v.l(j));
    }
    const double edge = v(c, 0);
    for (double& x : v.comp(c)) x -= edge;
  }
  return v;
}

std::string to_csv(const VField& v) {
  std::string out = "l";
  for (std::size_t c = 0; c < v.dim(); ++c) out += ",v" + std::to_string(c + 1);
  out += "\n";
  char buf[40];
  for (std::size_t j = 0; j < v.points(); ++j) {
    std::snprintf(buf, sizeof buf, "%.12e", v.l(j));
    out += buf;
    for (std::size_t c = 0; c < v.dim(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.12e", v(c, j));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void write_csv(const VField& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << to_csv(v);
}

VField read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("l,", 0) != 0) throw InvalidArgument("CSV header must start with 'l,'");
  std::size_t p = 0;
  for (char ch : line) p += ch == ',';
  std::vector<double> ls;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != p + 1) throw InvalidArgument("CSV row has wrong number of columns");
    ls.push_back(row[0]);
    rows.emplace_back(row.begin() + 1, row.end());
  }
  if (ls.size() < 2) throw InvalidArgument("CSV has too few rows");
  const double h = ls[1] - ls[0];
  VField v(ls.size(), p, h * double(ls.size()));
  for (std::size_t j = 0; j < ls.size(); ++j) {
    if (std::abs(ls[j] - v.l(j)) > 1e-9 * (1.0 + std::abs(ls[j])))
      throw InvalidArgument("CSV grid must be l_j = -L/2 + j*L/N");
    for (std::size_t c = 0; c < p; ++c) v(c, j) = rows[j][c];
  }
  return v;
}

}  // namespace nsolit::hier
