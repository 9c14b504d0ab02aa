#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "szego2d/errors.hpp"

// Exact integer geometry of the lattice triangle, its half-spaces, the cones
// at its vertices, unimodular sub-cone bases, shift vectors and the minimal
// two-run split of the sides. Everything here is int64 arithmetic; floating
// point appears only in derived metric data (side lengths, unit normals, the
// S-coefficients).

namespace szego2d {

struct freq {
  std::int64_t u = 0;
  std::int64_t v = 0;

  friend bool operator==(const freq&, const freq&) = default;
  friend auto operator<=>(const freq&, const freq&) = default;  // lexicographic (u, v)
  friend freq operator+(freq a, freq b) { return {a.u + b.u, a.v + b.v}; }
  friend freq operator-(freq a, freq b) { return {a.u - b.u, a.v - b.v}; }
  friend freq operator-(freq a) { return {-a.u, -a.v}; }
  friend freq operator*(std::int64_t s, freq a) { return {s * a.u, s * a.v}; }
};

inline std::int64_t cross(freq a, freq b) { return a.u * b.v - a.v * b.u; }
inline std::int64_t dot(freq a, freq b) { return a.u * b.u + a.v * b.v; }

struct primitive_normal {
  std::int64_t alpha = 0;
  std::int64_t beta = 0;

  freq as_freq() const { return {alpha, beta}; }
  friend bool operator==(const primitive_normal&, const primitive_normal&) = default;
};

// gcd(|a|,|b|) == 1 and (a,b) != (0,0)
bool is_primitive(std::int64_t a, std::int64_t b);
freq make_primitive(freq d);  // divides by gcd; error on zero vector

// Integer half-cone C+ spanned by two non-collinear primitive generators,
// with exact membership tests (two cross-product signs).
struct cone_spec {
  primitive_normal e1;
  primitive_normal e2;
  int orientation = 0;  // sign of det(e1, e2)

  static cone_spec make(freq g1, freq g2);

  bool in_half_cone(freq p) const;    // p in C+
  bool in_cone(freq p) const { return in_half_cone(p) || in_half_cone(-p); }
  // p = s*e1 + t*e2 with s,t strictly positive (interior of C+)
  bool strictly_inside(freq p) const;
  bool unimodular() const;
  // coordinates of p in the basis (e1,e2); requires unimodular()
  freq to_basis(freq p) const;
  freq from_basis(freq c) const;
};

enum class region { interior, boundary, exterior };

struct half_space_family {
  // S_i+ = { x : <nu_i, x> <= c_i }, i = 0..2 for sides 1..3
  std::array<primitive_normal, 3> nu;
  std::array<std::int64_t, 3> c;

  region side(int i, freq p) const;
  bool in_triangle(freq p) const;       // all three half-spaces
  bool in_s_minus(int i, freq p) const { return side(i, p) == region::exterior; }
};

struct triangle_instance {
  primitive_normal nu1;
  std::int64_t a = 0;
  std::int64_t lambda = 0;

  freq O, A1, A2;
  primitive_normal nu2, nu3;
  std::array<double, 3> side_lengths{};          // l_i(lambda)
  std::array<std::array<double, 2>, 3> unit_normals{};  // (a_i, b_i)
  double S1 = 0.0, S2 = 0.0;                     // at lambda = 1
  std::int64_t n_points = 0;

  double S1_lambda() const { return S1 * static_cast<double>(lambda); }
  double S2_lambda() const { return S2 * static_cast<double>(lambda); }
  half_space_family half_spaces() const;
  // Half-cone at vertex O spanned by the two edge directions, the natural
  // home for the factorization cone.
  cone_spec vertex_cone_at_origin() const;
  std::int64_t max_extent() const;  // max |coordinate| over the vertices
};

triangle_instance build_triangle(primitive_normal nu1, std::int64_t a, std::int64_t lambda);

// Exactly the integer points of the triangle, lexicographic in (u, v).
std::vector<freq> enumerate_lattice_points(const triangle_instance& t);

region halfspace_sign(const half_space_family& h, int i, freq p);

// Unimodular basis of a sub-cone of the input half-cone (identity when the
// input pair is already unimodular).
cone_spec find_unimodular_subcone(const cone_spec& c);

// v in C with 0 not in S - n*v and S - n*v inside C for every n != 0,
// built as a sum of per-point vectors in the (unimodular) cone basis.
freq shift_vector(const cone_spec& c, const std::vector<freq>& points);

struct minimal_split_result {
  std::vector<int> run1;  // side indices (1-based) of the first run
  std::vector<int> run2;
  cone_spec cone;         // pencil-line-free cone at the chosen vertex
  std::vector<double> thetas;  // oriented pencil angles, for diagnostics
};

// Convex polygon given by its exterior primitive normals in clockwise side
// order; vertex index picks the vertex between side (vertex-1) and side
// vertex (1-based, cyclic). Splits the sides into the two runs of the
// minimal factorization by accumulating pencil angles until the sum
// reaches pi; all comparisons are exact integer sign tests.
minimal_split_result minimal_split(const std::vector<primitive_normal>& normals, int vertex);

}  // namespace szego2d

template <>
struct std::hash<szego2d::freq> {
  std::size_t operator()(const szego2d::freq& p) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(p.u);
    return h ^ (std::hash<std::int64_t>{}(p.v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};
