#include <algorithm>

#include "nsolit/dconnection.hpp"
#include "nsolit/geometry.hpp"
#include "nsolit_cli/cli.hpp"

namespace nsolit::cli {

namespace {

using expr::Expr;
using geom::Coordinates;

Json nest(const std::vector<Json>& flat, const std::vector<std::size_t>& shape, std::size_t dim, std::size_t& pos) {
  if (dim == shape.size()) return flat[pos++];
  Json a = Json::array();
  for (std::size_t i = 0; i < shape[dim]; ++i) a.push(nest(flat, shape, dim + 1, pos));
  return a;
}

Json nest(const std::vector<Json>& flat, const std::vector<std::size_t>& shape) {
  std::size_t pos = 0;
  return nest(flat, shape, 0, pos);
}

Json shape_json(const std::vector<std::size_t>& shape) {
  Json a = Json::array();
  for (auto s : shape) a.push(s);
  return a;
}

Json table(const Tensor& t, const SamplePoints& pts) {
  std::vector<Json> sym;
  sym.reserve(t.size());
  for (const auto& e : t.data()) sym.emplace_back(expr::to_string(e));
  Json values = Json::array();
  for (const auto& row : evaluate_tensor(t, pts)) {
    std::vector<Json> flat(row.begin(), row.end());
    values.push(nest(flat, t.shape()));
  }
  Json j = Json::object();
  j.set("shape", shape_json(t.shape()));
  j.set("symbolic", nest(sym, t.shape()));
  j.set("samples", values);
  return j;
}

Tensor scalar_tensor(const Expr& e) {
  Tensor t({1});
  t(0) = e;
  return t;
}

}  // namespace

GeometryBundle geometry_bundle(const expr::MetricSpec& m, std::size_t samples, std::uint64_t seed) {
  const Coordinates coords = geom::tm_coordinates(m);
  GeometryBundle b{geom::sample(coords, samples, seed), {}};
  geom::check_nondegenerate(m, b.points);

  const auto chr = geom::christoffel(m);
  const auto vm = geom::vertical_metric(m, geom::VielbeinMode::Identity);
  const auto spray = geom::semispray(m, vm);
  const auto nc = geom::nconnection(spray);
  const auto anh = geom::anholonomy(nc);
  const auto omega = geom::ncurvature(nc);
  const auto dm = geom::sasaki_dmetric(m, vm, nc);
  const auto dc = geom::canonical_dconnection(dm, geom::Variant::TM);
  const auto tor = geom::dtorsion(dc, nc);
  const auto cur = geom::dcurvature(dc, nc);
  const auto ric = geom::ricci_and_scalars(cur, dm);

  b.tables = {{"gamma", chr.gamma},  {"Gtilde", spray.G},    {"N", nc.N},
              {"W", anh.W},          {"Omega", omega},       {"L", dc.Lh},
              {"C", dc.Cv},          {"T.hhh", tor.hhh},     {"T.hhv", tor.hhv},
              {"T.vhh", tor.vhh},    {"T.vvh", tor.vvh},     {"T.vvv", tor.vvv},
              {"R", cur.R},          {"P", cur.P},           {"S", cur.S},
              {"ricci.Rij", ric.Rij}, {"ricci.Ria", ric.Ria}, {"ricci.Rai", ric.Rai},
              {"ricci.Sab", ric.Sab}, {"scalars.Rarrow", scalar_tensor(ric.Rarrow)},
              {"scalars.Sarrow", scalar_tensor(ric.Sarrow)}};
  return b;
}

Json geometry_tables(const expr::MetricSpec& m, std::size_t samples, std::uint64_t seed) {
  const auto b = geometry_bundle(m, samples, seed);
  Json points = Json::array();
  for (const auto& p : b.points.points) points.push(Json::array(p));

  Json j = Json::object();
  j.set("dim", m.n);
  j.set("coords", Json::array(b.points.vars));
  j.set("signature", m.signature);
  j.set("samples", Json::object().set("seed", std::int64_t(seed)).set("points", points));
  // Dotted names become nested groups; the group order follows first appearance.
  std::vector<std::pair<std::string, Json>> groups;
  for (const auto& [name, t] : b.tables) {
    const auto dot = name.find('.');
    if (dot == std::string::npos) {
      j.set(name, table(t, b.points));
      continue;
    }
    const std::string g = name.substr(0, dot);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& p) { return p.first == g; });
    if (it == groups.end()) {
      groups.emplace_back(g, Json::object());
      it = groups.end() - 1;
      j.set(g, nullptr);
    }
    it->second.set(name.substr(dot + 1), table(t, b.points));
  }
  for (auto& [g, obj] : groups) j.set(g, std::move(obj));
  return j;
}

std::string geometry_csv(const expr::MetricSpec& m, std::size_t samples, std::uint64_t seed) {
  const auto b = geometry_bundle(m, samples, seed);
  std::string out = "table,entry,point,value\n";
  for (const auto& [name, t] : b.tables) {
    const auto values = evaluate_tensor(t, b.points);
    for (std::size_t e = 0; e < t.size(); ++e) {
      std::string idx;
      for (auto i : t.index_of(e)) idx += (idx.empty() ? "" : ".") + std::to_string(i + 1);
      for (std::size_t p = 0; p < values.size(); ++p)
        out += name + "," + idx + "," + std::to_string(p) + "," + format_double(values[p][e]) + "\n";
    }
  }
  return out;
}

}  // namespace nsolit::cli
