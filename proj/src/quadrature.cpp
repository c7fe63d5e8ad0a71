#include "bbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace bbem {

namespace {

TriangleRule make_rule(int points) {
  TriangleRule r;
  auto add = [&](double a, double b, double c, double w) {
    r.barycentric.push_back({a, b, c});
    r.weights.push_back(w);
  };
  auto orbit3 = [&](double a, double b, double w) {  // (a, b, b) and permutations
    add(a, b, b, w);
    add(b, a, b, w);
    add(b, b, a, w);
  };
  auto orbit6 = [&](double a, double b, double c, double w) {
    add(a, b, c, w);
    add(a, c, b, w);
    add(b, a, c, w);
    add(b, c, a, w);
    add(c, a, b, w);
    add(c, b, a, w);
  };
  switch (points) {
    case 1:
      add(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0);
      r.degree = 1;
      break;
    case 3:
      orbit3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
      r.degree = 2;
      break;
    case 6:
      orbit3(0.108103018168070, 0.445948490915965, 0.223381589678011);
      orbit3(0.816847572980459, 0.091576213509771, 0.109951743655322);
      r.degree = 4;
      break;
    case 12:
      orbit3(0.501426509658179, 0.249286745170910, 0.116786275726379);
      orbit3(0.873821971016996, 0.063089014491502, 0.050844906370207);
      orbit6(0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374);
      r.degree = 6;
      break;
    default:
      throw QuadratureError("unsupported triangle rule size " + std::to_string(points) +
                            " (expected 1, 3, 6 or 12)");
  }
  // The tabulated weights carry 15 digits; renormalize so they sum to 1 exactly
  // up to rounding.
  double s = 0.0;
  for (double w : r.weights) s += w;
  for (double& w : r.weights) w /= s;
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int points) {
  static const TriangleRule r1 = make_rule(1), r3 = make_rule(3), r6 = make_rule(6),
                            r12 = make_rule(12);
  switch (points) {
    case 1: return r1;
    case 3: return r3;
    case 6: return r6;
    case 12: return r12;
    default:
      throw QuadratureError("unsupported triangle rule size " + std::to_string(points) +
                            " (expected 1, 3, 6 or 12)");
  }
}

void map_rule(const TriangleRule& rule, const Vec3& a, const Vec3& b, const Vec3& c,
              std::vector<QuadratureNode>& out) {
  const double area = 0.5 * (b - a).cross(c - a).norm();
  for (int q = 0; q < rule.size(); ++q) {
    const auto& l = rule.barycentric[q];
    out.push_back({l[0] * a + l[1] * b + l[2] * c, rule.weights[q] * area});
  }
}

QuadratureSet panel_quadrature(const SurfaceMesh& mesh, int order) {
  const TriangleRule& rule = triangle_rule(order);
  QuadratureSet set;
  set.order = order;
  set.panels.resize(mesh.num_panels());
  for (int p = 0; p < mesh.num_panels(); ++p) {
    set.panels[p].reserve(rule.size());
    map_rule(rule, mesh.vertex(p, 0), mesh.vertex(p, 1), mesh.vertex(p, 2), set.panels[p]);
  }
  return set;
}

namespace {

GaussRule make_gauss(int n) {
  if (n < 1) throw QuadratureError("Gauss-Legendre order must be >= 1");
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    g.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex m;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss(n)).first;
  return it->second;
}

namespace {

// One polar sector: apex P, edge line with foot F at distance d, in-edge
// direction v, and angular range [phi0, phi1] measured from u = (F - P)/d.
struct Sector {
  Vec3 u, v;
  double d, phi0, phi1;
};

// Split the triangle into sectors around P. P must lie on the triangle.
std::vector<Sector> sectors(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  const Vec3 n = (b - a).cross(c - a);
  const double twice_area = n.norm();
  const Vec3 nh = n / twice_area;
  const double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  if (std::abs(nh.dot(p - a)) > 1e-9 * scale)
    throw QuadratureError("singular point is off the panel plane");
  // Barycentric containment check.
  const double la = nh.dot((b - p).cross(c - p)) / twice_area;
  const double lb = nh.dot((c - p).cross(a - p)) / twice_area;
  const double lc = nh.dot((a - p).cross(b - p)) / twice_area;
  if (std::min({la, lb, lc}) < -1e-10) throw QuadratureError("singular point is off the panel");

  std::vector<Sector> out;
  const Vec3* corners[3] = {&a, &b, &c};
  for (int e = 0; e < 3; ++e) {
    const Vec3& A = *corners[e];
    const Vec3& B = *corners[(e + 1) % 3];
    const Vec3 edge = B - A;
    const double len = edge.norm();
    const Vec3 v = edge / len;
    const Vec3 foot = A + v * v.dot(p - A);
    const double d = (foot - p).norm();
    if (d < 1e-12 * scale) continue;  // P on this edge: empty sector
    const Vec3 u = (foot - p) / d;
    const double ta = (A - foot).dot(v), tb = (B - foot).dot(v);
    const double pa = std::atan2(ta, d), pb = std::atan2(tb, d);
    // Splitting at the foot keeps each angular interval away from +-pi/2.
    if (pa < 0.0 && pb > 0.0) {
      out.push_back({u, v, d, pa, 0.0});
      out.push_back({u, v, d, 0.0, pb});
    } else {
      out.push_back({u, v, d, pa, pb});
    }
  }
  return out;
}

double asinh_tan(double phi) { return std::asinh(std::tan(phi)); }

}  // namespace

std::vector<QuadratureNode> duffy_singular_rule(const Vec3& a, const Vec3& b, const Vec3& c,
                                                const Vec3& singular_point, int order) {
  if (order < 1) throw QuadratureError("singular rule order must be >= 1");
  const GaussRule& g = gauss_legendre(order);
  std::vector<QuadratureNode> out;
  for (const Sector& s : sectors(a, b, c, singular_point)) {
    // Angular variable w = asinh(tan phi): dphi = cos(phi) dw, rho = d cosh(w),
    // so the area element t rho^2 dt dphi becomes t d rho dt dw.
    const double w0 = asinh_tan(s.phi0), span = asinh_tan(s.phi1) - w0;
    for (int i = 0; i < order; ++i) {
      const double w = w0 + span * g.nodes[i];
      const double rho = s.d * std::cosh(w);
      const double phi = std::atan(std::sinh(w));
      const Vec3 dir = std::cos(phi) * s.u + std::sin(phi) * s.v;
      for (int j = 0; j < order; ++j) {
        const double t = g.nodes[j];
        out.push_back({singular_point + (t * rho) * dir,
                       span * g.weights[i] * g.weights[j] * t * rho * s.d});
      }
    }
  }
  return out;
}

namespace {

void adaptive_recurse(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& target,
                      const TriangleRule& rule, double separation, int depth,
                      std::vector<QuadratureNode>& out) {
  const Vec3 m = (a + b + c) / 3.0;
  const double diam = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  if (depth == 0 || (target - m).norm() >= separation * diam) {
    map_rule(rule, a, b, c, out);
    return;
  }
  const Vec3 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  adaptive_recurse(a, ab, ca, target, rule, separation, depth - 1, out);
  adaptive_recurse(ab, b, bc, target, rule, separation, depth - 1, out);
  adaptive_recurse(ca, bc, c, target, rule, separation, depth - 1, out);
  adaptive_recurse(ab, bc, ca, target, rule, separation, depth - 1, out);
}

}  // namespace

void adaptive_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& target,
                   const TriangleRule& rule, double separation, int max_depth,
                   std::vector<QuadratureNode>& out) {
  adaptive_recurse(a, b, c, target, rule, separation, max_depth, out);
}

double inverse_distance_integral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& x) {
  double s = 0.0;
  for (const Sector& sec : sectors(a, b, c, x))
    s += sec.d * (asinh_tan(sec.phi1) - asinh_tan(sec.phi0));
  return s;
}

Mat3 stokeslet_panel_integral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& x) {
  // In polar coordinates around x the radial integral is elementary:
  //   int rho(phi) (I + rhat rhat^T) dphi,  rho = d / cos(phi),
  //   rhat = cos(phi) u + sin(phi) v.
  Mat3 total = Mat3::Zero();
  for (const Sector& s : sectors(a, b, c, x)) {
    const double L = asinh_tan(s.phi1) - asinh_tan(s.phi0);
    const double dsin = std::sin(s.phi1) - std::sin(s.phi0);
    const double dcos = std::cos(s.phi1) - std::cos(s.phi0);
    const Mat3 uu = s.u * s.u.transpose(), vv = s.v * s.v.transpose();
    const Mat3 uv = s.u * s.v.transpose() + s.v * s.u.transpose();
    total += s.d * (L * Mat3::Identity() + dsin * uu - dcos * uv + (L - dsin) * vv);
  }
  return total / (8.0 * kPi);
}

}  // namespace bbem
