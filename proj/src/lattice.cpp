#include "szego2d/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace szego2d {

bool is_primitive(std::int64_t a, std::int64_t b) {
  if (a == 0 && b == 0) return false;
  return std::gcd(std::llabs(a), std::llabs(b)) == 1;
}

freq make_primitive(freq d) {
  if (d.u == 0 && d.v == 0) fail(errc::empty_interior, "zero direction has no primitive form");
  const std::int64_t g = std::gcd(std::llabs(d.u), std::llabs(d.v));
  return {d.u / g, d.v / g};
}

cone_spec cone_spec::make(freq g1, freq g2) {
  g1 = make_primitive(g1);
  g2 = make_primitive(g2);
  const std::int64_t det = cross(g1, g2);
  if (det == 0) fail(errc::empty_interior, "cone generators are collinear");
  cone_spec c;
  c.e1 = {g1.u, g1.v};
  c.e2 = {g2.u, g2.v};
  c.orientation = det > 0 ? 1 : -1;
  return c;
}

bool cone_spec::in_half_cone(freq p) const {
  const std::int64_t s = orientation * cross(p, e2.as_freq());
  const std::int64_t t = orientation * cross(e1.as_freq(), p);
  return s >= 0 && t >= 0;
}

bool cone_spec::strictly_inside(freq p) const {
  const std::int64_t s = orientation * cross(p, e2.as_freq());
  const std::int64_t t = orientation * cross(e1.as_freq(), p);
  return s > 0 && t > 0;
}

bool cone_spec::unimodular() const {
  return std::llabs(cross(e1.as_freq(), e2.as_freq())) == 1;
}

freq cone_spec::to_basis(freq p) const {
  const std::int64_t det = cross(e1.as_freq(), e2.as_freq());
  const std::int64_t s = cross(p, e2.as_freq());
  const std::int64_t t = cross(e1.as_freq(), p);
  if (std::llabs(det) != 1) fail(errc::not_unimodular, "cone basis is not a Z^2 basis");
  return {s / det, t / det};
}

freq cone_spec::from_basis(freq c) const {
  return {c.u * e1.alpha + c.v * e2.alpha, c.u * e1.beta + c.v * e2.beta};
}

region half_space_family::side(int i, freq p) const {
  const std::int64_t s = dot(nu[static_cast<std::size_t>(i)].as_freq(), p);
  const std::int64_t ci = c[static_cast<std::size_t>(i)];
  if (s < ci) return region::interior;
  if (s == ci) return region::boundary;
  return region::exterior;
}

bool half_space_family::in_triangle(freq p) const {
  for (int i = 0; i < 3; ++i)
    if (side(i, p) == region::exterior) return false;
  return true;
}

half_space_family triangle_instance::half_spaces() const {
  half_space_family h;
  h.nu = {nu1, nu2, nu3};
  h.c = {0, dot(nu2.as_freq(), A1), 0};
  return h;
}

cone_spec triangle_instance::vertex_cone_at_origin() const {
  // Edges out of O: along side 3 toward A2, along side 1 toward A1.
  return cone_spec::make(make_primitive(A2), make_primitive(A1));
}

std::int64_t triangle_instance::max_extent() const {
  return std::max({std::llabs(A1.u), std::llabs(A1.v), std::llabs(A2.u), std::llabs(A2.v)});
}

triangle_instance build_triangle(primitive_normal nu1, std::int64_t a, std::int64_t lambda) {
  if (!is_primitive(nu1.alpha, nu1.beta))
    fail(errc::degenerate_triangle, "nu1 must be a primitive integer vector");
  if (lambda < 1) fail(errc::degenerate_triangle, "lambda must be a positive integer");
  if (a < 1) fail(errc::degenerate_triangle, "a must be a positive integer");

  triangle_instance t;
  t.nu1 = nu1;
  t.a = a;
  t.lambda = lambda;
  t.O = {0, 0};
  t.A1 = {lambda * nu1.beta, -lambda * nu1.alpha};
  t.A2 = {a * lambda, 0};
  t.nu3 = {0, -1};

  if (cross(t.A1, t.A2) == 0)
    fail(errc::degenerate_triangle, "vertices O, A1, A2 are collinear");
  if (nu1.alpha > 0 || nu1.beta < 0)
    fail(errc::degenerate_triangle,
         "A1 lies outside the first quadrant; nu1/nu3 cannot both be exterior");

  // nu2: primitive exterior normal of segment A1A2, orientation fixed by the
  // centroid (3*centroid = O + A1 + A2).
  const freq d = t.A2 - t.A1;
  freq n2 = {-d.v, d.u};
  const freq to_centroid3 = (t.A1 + t.A2) - 3 * t.A1;  // 3*(centroid - A1)
  const std::int64_t s = dot(n2, to_centroid3);
  if (s == 0) fail(errc::degenerate_triangle, "centroid lies on side A1A2");
  if (s > 0) n2 = -n2;
  n2 = make_primitive(n2);
  t.nu2 = {n2.u, n2.v};

  const auto len = [](freq p) {
    return std::hypot(static_cast<double>(p.u), static_cast<double>(p.v));
  };
  t.side_lengths = {len(t.A1), len(t.A2 - t.A1), len(t.A2)};
  const std::array<primitive_normal, 3> nus = {t.nu1, t.nu2, t.nu3};
  for (int i = 0; i < 3; ++i) {
    const double nn = len(nus[static_cast<std::size_t>(i)].as_freq());
    t.unit_normals[static_cast<std::size_t>(i)] = {
        static_cast<double>(nus[static_cast<std::size_t>(i)].alpha) / nn,
        static_cast<double>(nus[static_cast<std::size_t>(i)].beta) / nn};
  }

  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^(i+1) for sides 1..3
    const double li1 = t.side_lengths[static_cast<std::size_t>(i)] / static_cast<double>(lambda);
    s1 += 0.5 * sign * t.unit_normals[static_cast<std::size_t>(i)][0] * li1;
    s2 += 0.5 * sign * t.unit_normals[static_cast<std::size_t>(i)][1] * li1;
  }
  t.S1 = s1;
  t.S2 = s2;

  const double perim1 = (t.side_lengths[0] + t.side_lengths[1] + t.side_lengths[2]) /
                        static_cast<double>(lambda);
  if (!(s1 > 1e-12 * perim1) || !(s2 > 1e-12 * perim1))
    fail(errc::hypothesis_t_violated,
         "S1 or S2 is not positive; displace the triangle (lattice-preserving) and retry");

  t.n_points = static_cast<std::int64_t>(enumerate_lattice_points(t).size());
  return t;
}

std::vector<freq> enumerate_lattice_points(const triangle_instance& t) {
  const half_space_family h = t.half_spaces();
  const std::int64_t ulo = std::min({t.O.u, t.A1.u, t.A2.u});
  const std::int64_t uhi = std::max({t.O.u, t.A1.u, t.A2.u});
  const std::int64_t vlo = std::min({t.O.v, t.A1.v, t.A2.v});
  const std::int64_t vhi = std::max({t.O.v, t.A1.v, t.A2.v});
  std::vector<freq> pts;
  for (std::int64_t u = ulo; u <= uhi; ++u)
    for (std::int64_t v = vlo; v <= vhi; ++v)
      if (h.in_triangle({u, v})) pts.push_back({u, v});
  return pts;
}

region halfspace_sign(const half_space_family& h, int i, freq p) {
  if (i < 1 || i > 3) fail(errc::invalid_config, "side index must be 1, 2 or 3");
  return h.side(i - 1, p);
}

cone_spec find_unimodular_subcone(const cone_spec& c) {
  if (c.orientation == 0) fail(errc::empty_interior, "cone has no interior");
  if (c.unimodular()) return c;

  const freq mid = make_primitive(c.e1.as_freq() + c.e2.as_freq());
  // Bezout partner of mid=(m,n): m*y - n*x = 1, then slide along mid until
  // the pair lands inside the half-cone.
  std::int64_t m = mid.u, n = mid.v;
  std::int64_t x0 = 0, y0 = 0;
  {
    // extended gcd for m*y + n*(-x) = 1
    std::int64_t r0 = m, r1 = n, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
      const std::int64_t q = r0 / r1;
      std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
      std::tie(s0, s1) = std::make_tuple(s1, s0 - q * s1);
      std::tie(t0, t1) = std::make_tuple(t1, t0 - q * t1);
    }
    // r0 = gcd = +-1 since mid is primitive; m*s0 + n*t0 = r0
    y0 = s0 * r0;
    x0 = -t0 * r0;
  }
  for (std::int64_t k = 0;; ++k) {
    const freq w{x0 + k * m, y0 + k * n};
    if (c.strictly_inside(w)) return cone_spec::make(mid, w);
    const freq wm{x0 - k * m, y0 - k * n};
    if (c.strictly_inside(wm)) return cone_spec::make(mid, wm);
  }
}

freq shift_vector(const cone_spec& c, const std::vector<freq>& points) {
  if (!c.unimodular()) fail(errc::not_unimodular, "shift_vector needs a unimodular cone basis");
  std::int64_t lam = 0, mu = 0;
  for (const freq& p : points) {
    const freq b = c.to_basis(p);
    if (b.u != 0) {
      lam += 2 * std::llabs(b.u);
      mu += 2 * std::llabs(b.v);
    } else if (b.v != 0) {
      lam += 1;
      mu += 2 * std::llabs(b.v);
    } else {
      lam += 1;
      mu += 1;
    }
  }
  if (lam == 0 && mu == 0) {
    lam = 1;
    mu = 1;
  }
  return c.from_basis({lam, mu});
}

namespace {

// clockwise rotation of the exterior normal gives the traversal direction
freq side_direction(primitive_normal nu) { return {nu.beta, -nu.alpha}; }

}  // namespace

minimal_split_result minimal_split(const std::vector<primitive_normal>& normals, int vertex) {
  const int m = static_cast<int>(normals.size());
  if (m < 3) fail(errc::not_convex, "a polygon needs at least 3 sides");
  if (vertex < 1 || vertex > m) fail(errc::invalid_config, "vertex index out of range");

  std::vector<freq> dir(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (!is_primitive(normals[static_cast<std::size_t>(i)].alpha,
                      normals[static_cast<std::size_t>(i)].beta))
      fail(errc::not_convex, "side normals must be primitive");
    dir[static_cast<std::size_t>(i)] = side_direction(normals[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < m; ++i) {
    const freq cur = dir[static_cast<std::size_t>(i)];
    const freq nxt = dir[static_cast<std::size_t>((i + 1) % m)];
    if (cross(cur, nxt) >= 0)
      fail(errc::not_convex, "sides must turn clockwise at every vertex");
  }

  // local side t in 1..m is original side ((vertex-1) + t - 1) mod m
  const auto orig = [&](int t) { return (vertex - 1 + t - 1) % m; };

  const freq u0 = -dir[static_cast<std::size_t>(orig(m))];  // into the vertex cone, on d_{m,0}
  minimal_split_result res;

  freq cur = u0;
  int crossing = -1;  // first step j with theta_0+...+theta_j >= pi
  for (int j = 0; j < m; ++j) {
    const freq line = dir[static_cast<std::size_t>(orig(j + 1))];
    // first half-line of that pencil line met turning clockwise from cur
    const freq w = (cross(cur, line) < 0) ? line : -line;
    res.thetas.push_back(std::atan2(static_cast<double>(-cross(cur, w)),
                                    static_cast<double>(dot(cur, w))));
    cur = w;
    if (crossing < 0) {
      const std::int64_t cz = cross(u0, cur);
      if (cz > 0 || (cz == 0 && dot(u0, cur) < 0)) crossing = j;
    }
  }
  if (crossing < 0 || crossing > m - 2)
    fail(errc::not_convex, "pencil walk did not cross pi before the last side");

  // runs: local sides {0(=m), 1, ..., crossing} versus the rest
  std::vector<bool> in_first(static_cast<std::size_t>(m) + 1, false);
  in_first[static_cast<std::size_t>(m)] = true;
  for (int t = 1; t <= crossing; ++t) in_first[static_cast<std::size_t>(t)] = true;
  for (int t = 1; t <= m; ++t) {
    const int o = orig(t) + 1;
    (in_first[static_cast<std::size_t>(t)] ? res.run1 : res.run2).push_back(o);
  }
  std::sort(res.run1.begin(), res.run1.end());
  std::sort(res.run2.begin(), res.run2.end());

  // Pencil-line-free cone: from u0 toward the other edge direction at the
  // vertex, stopping at the nearest pencil ray strictly inside.
  const freq w1 = dir[static_cast<std::size_t>(orig(1))];
  const cone_spec vertex_cone = cone_spec::make(u0, w1);
  bool have = false;
  freq delta = w1;
  for (int i = 0; i < m; ++i) {
    for (const freq cand : {dir[static_cast<std::size_t>(i)], -dir[static_cast<std::size_t>(i)]}) {
      if (!vertex_cone.strictly_inside(cand)) continue;
      if (!have || cross(cand, delta) * vertex_cone.orientation > 0) {
        delta = cand;
        have = true;
      }
    }
  }
  res.cone = cone_spec::make(u0, delta);
  return res;
}

}  // namespace szego2d
