#pragma once

#include "nsolit/geometry.hpp"

namespace nsolit::geom {

/// Block metric g_ij e^i e^j + h_ab e^a e^b in the N-adapted co-frame.
struct DMetric {
  Tensor g;  // n x n, functions of (x, y)
  Tensor h;  // m x m
  NConnection N;
  std::size_t n = 0;
  std::size_t m = 0;
};

[[nodiscard]] DMetric make_dmetric(Tensor g, Tensor h, NConnection N);

/// Sasaki-type lift: g~ on both blocks, frames elongated by N.
[[nodiscard]] DMetric sasaki_dmetric(const MetricSpec& m, const VerticalMetric& v, const NConnection& N);

/// Coordinate-basis matrix on (dx, dy):
/// [[g_ij + h_ab N^a_i N^b_j, h_ab N^a_i], [h_ab N^b_j, h_ab]].
[[nodiscard]] Tensor coordinate_form(const DMetric& dm);
/// Splits a coordinate-basis matrix back into numeric blocks and N at one point.
struct BlockValues {
  std::vector<double> g, h, N;  // row-major n*n, m*m, m*n (N(a,i))
};
[[nodiscard]] BlockValues split_coordinate_form(const std::vector<double>& ghat, std::size_t n, std::size_t m);

enum class Variant { TM, VB };
/// Reading of the vb C^a_bc second term: e_b h_cd (symmetric) or e_c h_cd (as printed).
enum class CvReading { Symmetric, Printed };

struct DConnection {
  Tensor Lh;  // Lh(i, j, k) = L^i_jk
  Tensor Lv;  // Lv(a, b, k) = L^a_bk
  Tensor Ch;  // Ch(i, j, c) = C^i_jc
  Tensor Cv;  // Cv(a, b, c) = C^a_bc
  Variant variant = Variant::TM;
};

/// TM: Lh and Cv from the torsionless formulas, Lv = Lh and Ch = Cv by index identification.
[[nodiscard]] DConnection canonical_dconnection(const DMetric& dm, Variant variant,
                                                CvReading reading = CvReading::Symmetric);

struct Torsion {
  Tensor hhh;  // T^i_jk = L^i_jk − L^i_kj
  Tensor hhv;  // T^i_ja = C^i_ja
  Tensor vhh;  // T^a_ji = Ω^a_ji
  Tensor vvh;  // T^a_bi = ∂_b N^a_i − L^a_bi
  Tensor vvv;  // T^a_bc = C^a_bc − C^a_cb
};
[[nodiscard]] Torsion dtorsion(const DConnection& dc, const NConnection& N);

struct Curvature {
  Tensor R;   // R^i_hjk
  Tensor P;   // P^i_jka
  Tensor S;   // S^a_bcd
  Tensor Rv;  // R^a_bjk   (vb only)
  Tensor Pv;  // P^c_bka   (vb only)
  Tensor Sh;  // S^i_jbc   (vb only)
  Variant variant = Variant::TM;
};
[[nodiscard]] Curvature dcurvature(const DConnection& dc, const NConnection& N);

struct Ricci {
  Tensor Rij;  // R^k_ijk
  Tensor Ria;  // −P^k_ika
  Tensor Rai;  // P^b_aib
  Tensor Sab;  // S^c_abc
  Expr Rarrow;  // g^ij R_ij
  Expr Sarrow;  // h^ab S_ab
};
[[nodiscard]] Ricci ricci_and_scalars(const Curvature& ct, const DMetric& dm);

struct CompatResidual {
  Tensor Dk_g;  // (i, j, k): D_k g_ij
  Tensor Dc_g;  // (i, j, c): D_c g_ij
  Tensor Dk_h;  // (a, b, k): D_k h_ab
  Tensor Dc_h;  // (a, b, c): D_c h_ab
};
[[nodiscard]] CompatResidual compat_residual(const DConnection& dc, const DMetric& dm);
[[nodiscard]] double max_abs(const CompatResidual& r, const SamplePoints& s);

}  // namespace nsolit::geom
