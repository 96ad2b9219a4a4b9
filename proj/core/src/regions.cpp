#include "cqcode/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>

namespace cqcode {

namespace {

constexpr double kDedupTol = 1e-9;

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& p, const auto& q) {
                          return std::abs(p[0] - q[0]) <= kDedupTol &&
                                 std::abs(p[1] - q[1]) <= kDedupTol;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<std::array<double, 2>> hull(2 * n);
  std::size_t k = 0;
  // pop on cross <= 0 only: an absolute tolerance would flatten regions that
  // are legitimately thin (all cross products scale with the region width)
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;  // CCW
}

double point_segment_dist(const std::array<double, 2>& p, const std::array<double, 2>& a,
                          const std::array<double, 2>& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2, 0.0, 1.0);
  const double px = a[0] + t * dx - p[0], py = a[1] + t * dy - p[1];
  return std::hypot(px, py);
}

}  // namespace

bool Region2D::contains(double x, double y, double slack) const {
  for (const auto& h : halfplanes) {
    if (h.nx * x + h.ny * y > h.c + slack) return false;
  }
  return true;
}

bool Region2D::contains(const Region2D& other, double slack) const {
  for (const auto& v : other.vertices) {
    if (!contains(v[0], v[1], slack)) return false;
  }
  return true;
}

double Region2D::max_sum() const {
  double best = 0.0;
  for (const auto& v : vertices) best = std::max(best, v[0] + v[1]);
  return best;
}

double Region2D::support(double dx, double dy) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) best = std::max(best, v[0] * dx + v[1] * dy);
  return best;
}

double Region2D::area() const {
  if (vertices.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[(i + 1) % vertices.size()];
    s += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(s);
}

Region2D region_from_points(const std::vector<std::array<double, 2>>& points, Unit unit) {
  // Pareto frontier first: dominated points (and the axis projections that
  // downward closure would add for them) cannot be vertices, and their
  // near-collinear slivers would confuse the hull's collinearity pruning.
  std::vector<std::array<double, 2>> cloud;
  cloud.reserve(points.size());
  for (const auto& p : points) cloud.push_back({std::max(p[0], 0.0), std::max(p[1], 0.0)});
  std::sort(cloud.begin(), cloud.end(), [](const auto& p, const auto& q) {
    if (p[0] != q[0]) return p[0] > q[0];
    return p[1] > q[1];
  });
  std::vector<std::array<double, 2>> frontier;
  double best_y = -1.0;
  for (const auto& p : cloud) {
    if (p[1] > best_y) {
      frontier.push_back(p);
      best_y = p[1];
    }
  }
  double xmax = 0.0, ymax = 0.0;
  for (const auto& p : frontier) {
    xmax = std::max(xmax, p[0]);
    ymax = std::max(ymax, p[1]);
  }
  frontier.push_back({0.0, 0.0});
  frontier.push_back({xmax, 0.0});
  frontier.push_back({0.0, ymax});

  Region2D r;
  r.unit = unit;
  r.vertices = convex_hull(std::move(frontier));
  // drop numerically collinear vertices (noise-scale triangles only, so thin
  // regions survive)
  bool pruned = r.vertices.size() > 2;
  while (pruned) {
    pruned = false;
    for (std::size_t i = 0; i < r.vertices.size() && r.vertices.size() > 2; ++i) {
      const auto& prev = r.vertices[(i + r.vertices.size() - 1) % r.vertices.size()];
      const auto& next = r.vertices[(i + 1) % r.vertices.size()];
      if (std::abs(cross(prev, r.vertices[i], next)) <= 1e-12) {
        r.vertices.erase(r.vertices.begin() + static_cast<long>(i));
        pruned = true;
        break;
      }
    }
  }
  // nonnegativity first, then the hull edges
  r.halfplanes.push_back({-1.0, 0.0, 0.0});
  r.halfplanes.push_back({0.0, -1.0, 0.0});
  if (r.vertices.size() == 1) {
    r.halfplanes.push_back({1.0, 0.0, r.vertices[0][0]});
    r.halfplanes.push_back({0.0, 1.0, r.vertices[0][1]});
  } else if (r.vertices.size() == 2) {
    r.halfplanes.push_back({1.0, 0.0, std::max(r.vertices[0][0], r.vertices[1][0])});
    r.halfplanes.push_back({0.0, 1.0, std::max(r.vertices[0][1], r.vertices[1][1])});
  } else {
    for (std::size_t i = 0; i < r.vertices.size(); ++i) {
      const auto& a = r.vertices[i];
      const auto& b = r.vertices[(i + 1) % r.vertices.size()];
      const double nx = b[1] - a[1], ny = -(b[0] - a[0]);
      const double norm = std::hypot(nx, ny);
      if (norm <= kDedupTol) continue;
      r.halfplanes.push_back({nx / norm, ny / norm, (nx * a[0] + ny * a[1]) / norm});
    }
  }
  return r;
}

double hausdorff(const Region2D& a, const Region2D& b) {
  auto dist_to = [](const std::array<double, 2>& p, const Region2D& reg) {
    if (reg.contains(p[0], p[1], 0.0)) return 0.0;
    if (reg.vertices.size() == 1) {
      return std::hypot(p[0] - reg.vertices[0][0], p[1] - reg.vertices[0][1]);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < reg.vertices.size(); ++i) {
      best = std::min(best, point_segment_dist(p, reg.vertices[i],
                                               reg.vertices[(i + 1) % reg.vertices.size()]));
    }
    return best;
  };
  double h = 0.0;
  for (const auto& v : a.vertices) h = std::max(h, dist_to(v, b));
  for (const auto& v : b.vertices) h = std::max(h, dist_to(v, a));
  return h;
}

// ---------------------------------------------------------------------------
// Distribution search
// ---------------------------------------------------------------------------

namespace {

void enum_simplex(int k, int levels, std::vector<double>& cur,
                  std::vector<std::vector<double>>& out, int remaining) {
  if (static_cast<int>(cur.size()) == k - 1) {
    std::vector<double> p = cur;
    p.push_back(static_cast<double>(remaining) / levels);
    out.push_back(std::move(p));
    return;
  }
  for (int i = 0; i <= remaining; ++i) {
    cur.push_back(static_cast<double>(i) / levels);
    enum_simplex(k, levels, cur, out, remaining - i);
    cur.pop_back();
  }
}

// All probability vectors on the k-simplex with entries i/levels.
std::vector<std::vector<double>> simplex_grid(int k, int levels) {
  std::vector<std::vector<double>> out;
  std::vector<double> cur;
  enum_simplex(k, levels, cur, out, levels);
  return out;
}

int levels_for(double step) {
  const int lv = static_cast<int>(std::lround(1.0 / step));
  return std::max(lv, 1);
}

std::vector<double> random_simplex(int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (double& v : p) {
    v = ex(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

MarkovTriple make_triple(const std::vector<double>& t, const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& b) {
  std::vector<Dist> ar, br;
  ar.reserve(a.size());
  br.reserve(b.size());
  for (const auto& r : a) ar.emplace_back(r);
  for (const auto& r : b) br.emplace_back(r);
  return MarkovTriple(Dist(t), std::move(ar), std::move(br));
}

// Markov triples to scan: product inputs on a fine grid, a coarse |T| = 2
// grid, flip-symmetrized binary seeds, and random seeds for larger |T|.
std::vector<MarkovTriple> triple_candidates(int a_size, int b_size, const OptGrid& grid) {
  std::vector<MarkovTriple> out;

  int fine = levels_for(grid.simplex_step);
  if (a_size == 2 && b_size == 2) fine = std::max(fine, 32);
  auto pa_fine = simplex_grid(a_size, fine);
  auto pb_fine = simplex_grid(b_size, fine);
  while (pa_fine.size() * pb_fine.size() > 40000) {
    fine /= 2;
    pa_fine = simplex_grid(a_size, fine);
    pb_fine = simplex_grid(b_size, fine);
  }
  for (const auto& pa : pa_fine)
    for (const auto& pb : pb_fine) out.push_back(make_triple({1.0}, {pa}, {pb}));

  if (grid.t_card >= 2) {
    // flip-symmetrized seeds (binary alphabets only)
    if (a_size == 2 && b_size == 2) {
      for (const auto& pa : pa_fine)
        for (const auto& pb : pb_fine) {
          out.push_back(make_triple({0.5, 0.5}, {pa, {pa[1], pa[0]}}, {pb, {pb[1], pb[0]}}));
        }
    }
    int coarse = levels_for(grid.simplex_step);
    auto w2 = simplex_grid(2, std::min(coarse, 8));
    auto pa_c = simplex_grid(a_size, coarse);
    auto pb_c = simplex_grid(b_size, coarse);
    // halving keeps successive grids nested, so refining a step only grows
    // the candidate set
    while (w2.size() * pa_c.size() * pa_c.size() * pb_c.size() * pb_c.size() > 60000 &&
           coarse > 1) {
      coarse /= 2;
      w2 = simplex_grid(2, std::min(coarse, 8));
      pa_c = simplex_grid(a_size, coarse);
      pb_c = simplex_grid(b_size, coarse);
    }
    for (const auto& w : w2) {
      if (w[0] <= 0.0 || w[1] <= 0.0) continue;
      for (const auto& pa0 : pa_c)
        for (const auto& pa1 : pa_c)
          for (const auto& pb0 : pb_c)
            for (const auto& pb1 : pb_c) out.push_back(make_triple(w, {pa0, pa1}, {pb0, pb1}));
    }
  }

  std::mt19937_64 rng(0);
  for (int tc = 3; tc <= grid.t_card; ++tc) {
    for (int i = 0; i < 400; ++i) {
      std::vector<std::vector<double>> a_rows, b_rows;
      for (int t = 0; t < tc; ++t) {
        a_rows.push_back(random_simplex(a_size, rng));
        b_rows.push_back(random_simplex(b_size, rng));
      }
      out.push_back(make_triple(random_simplex(tc, rng), a_rows, b_rows));
    }
  }
  return out;
}

// P_UX candidates for the one-sender broadcast setting, reusing MarkovTriple
// with |B| = 1.
std::vector<MarkovTriple> ux_candidates(int x_size, const OptGrid& grid) {
  std::vector<MarkovTriple> out;
  auto singleton_rows = [&](const std::vector<double>& px) {
    return make_triple({1.0}, {px}, {{1.0}});
  };
  int fine = levels_for(grid.simplex_step);
  if (x_size == 2) fine = std::max(fine, 32);
  auto px_fine = simplex_grid(x_size, fine);
  while (px_fine.size() > 20000) {
    fine /= 2;
    px_fine = simplex_grid(x_size, fine);
  }
  for (const auto& px : px_fine) out.push_back(singleton_rows(px));

  if (grid.t_card >= 2) {
    int mid = std::min(fine, x_size == 2 ? 16 : 8);
    auto w2 = simplex_grid(2, mid);
    auto px_mid = simplex_grid(x_size, mid);
    while (w2.size() * px_mid.size() * px_mid.size() > 60000 && mid > 1) {
      mid /= 2;
      w2 = simplex_grid(2, mid);
      px_mid = simplex_grid(x_size, mid);
    }
    for (const auto& w : w2) {
      if (w[0] <= 0.0 || w[1] <= 0.0) continue;
      for (const auto& r0 : px_mid)
        for (const auto& r1 : px_mid) {
          out.push_back(make_triple(w, {r0, r1},
                                    {std::vector<double>{1.0}, std::vector<double>{1.0}}));
        }
    }
  }
  std::mt19937_64 rng(1);
  for (int tc = 3; tc <= grid.t_card; ++tc) {
    for (int i = 0; i < 400; ++i) {
      std::vector<std::vector<double>> rows;
      std::vector<std::vector<double>> ones;
      for (int t = 0; t < tc; ++t) {
        rows.push_back(random_simplex(x_size, rng));
        ones.push_back({1.0});
      }
      out.push_back(make_triple(random_simplex(tc, rng), rows, ones));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nelder-Mead over triple parameters (values normalized group-wise onto
// simplices). Deterministic.
// ---------------------------------------------------------------------------

struct TripleShape {
  int t = 1, a = 2, b = 1;
  int dims() const { return t + t * a + t * b; }

  std::vector<double> flatten(const MarkovTriple& m) const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(dims()));
    for (int i = 0; i < t; ++i) v.push_back(m.p_t[i]);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < a; ++j) v.push_back(m.p_a_given_t[static_cast<std::size_t>(i)][j]);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < b; ++j) v.push_back(m.p_b_given_t[static_cast<std::size_t>(i)][j]);
    return v;
  }

  MarkovTriple unflatten(const std::vector<double>& v) const {
    auto norm = [](std::vector<double> g) {
      double s = 0.0;
      for (double& x : g) {
        x = std::max(x, 0.0);
        s += x;
      }
      if (s <= 0.0) {
        std::fill(g.begin(), g.end(), 1.0 / static_cast<double>(g.size()));
      } else {
        for (double& x : g) x /= s;
      }
      return g;
    };
    std::size_t pos = 0;
    std::vector<double> pt(v.begin(), v.begin() + t);
    pos += static_cast<std::size_t>(t);
    std::vector<std::vector<double>> ar, br;
    for (int i = 0; i < t; ++i, pos += static_cast<std::size_t>(a))
      ar.push_back(norm({v.begin() + static_cast<long>(pos),
                         v.begin() + static_cast<long>(pos) + a}));
    for (int i = 0; i < t; ++i, pos += static_cast<std::size_t>(b))
      br.push_back(norm({v.begin() + static_cast<long>(pos),
                         v.begin() + static_cast<long>(pos) + b}));
    return make_triple(norm(pt), ar, br);
  }
};

MarkovTriple nelder_mead(const TripleShape& shape, const MarkovTriple& start,
                         const std::function<double(const MarkovTriple&)>& objective,
                         int iterations) {
  const int n = shape.dims();
  std::vector<std::vector<double>> simplex;
  simplex.push_back(shape.flatten(start));
  for (int i = 0; i < n; ++i) {
    auto v = simplex[0];
    v[static_cast<std::size_t>(i)] += 0.08;
    simplex.push_back(std::move(v));
  }
  std::vector<double> score(simplex.size());
  auto eval = [&](const std::vector<double>& v) { return objective(shape.unflatten(v)); };
  for (std::size_t i = 0; i < simplex.size(); ++i) score[i] = eval(simplex[i]);

  for (int it = 0; it < iterations; ++it) {
    std::vector<std::size_t> order(simplex.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
      return score[p] > score[q];  // maximize
    });
    const std::size_t worst = order.back(), best = order.front();
    const std::size_t second_worst = order[order.size() - 2];

    std::vector<double> centroid(static_cast<std::size_t>(n), 0.0);
    for (std::size_t i : order) {
      if (i == worst) continue;
      for (int j = 0; j < n; ++j) centroid[static_cast<std::size_t>(j)] += simplex[i][static_cast<std::size_t>(j)];
    }
    for (double& c : centroid) c /= static_cast<double>(simplex.size() - 1);

    auto blend = [&](double coef) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        v[static_cast<std::size_t>(j)] = centroid[static_cast<std::size_t>(j)] +
                                         coef * (centroid[static_cast<std::size_t>(j)] -
                                                 simplex[worst][static_cast<std::size_t>(j)]);
      }
      return v;
    };

    auto reflected = blend(1.0);
    const double fr = eval(reflected);
    if (fr > score[best]) {
      auto expanded = blend(2.0);
      const double fe = eval(expanded);
      if (fe > fr) {
        simplex[worst] = std::move(expanded);
        score[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        score[worst] = fr;
      }
    } else if (fr > score[second_worst]) {
      simplex[worst] = std::move(reflected);
      score[worst] = fr;
    } else {
      auto contracted = blend(-0.5);
      const double fc = eval(contracted);
      if (fc > score[worst]) {
        simplex[worst] = std::move(contracted);
        score[worst] = fc;
      } else {
        for (std::size_t i : order) {
          if (i == best) continue;
          for (int j = 0; j < n; ++j) {
            simplex[i][static_cast<std::size_t>(j)] =
                0.5 * (simplex[i][static_cast<std::size_t>(j)] +
                       simplex[best][static_cast<std::size_t>(j)]);
          }
          score[i] = eval(simplex[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < simplex.size(); ++i)
    if (score[i] > score[best]) best = i;
  return shape.unflatten(simplex[best]);
}

// Per-candidate information bounds of a compound MAC family, in bits.
struct MacBounds {
  double a_bt = 0.0;  // min_theta I(A;Y|BT)
  double b_at = 0.0;  // min_theta I(B;Y|AT)
  double ab_t = 0.0;  // min_theta I(AB;Y|T)
  double a_t = 0.0;   // min_theta I(A;Y|T)
  double b_t = 0.0;   // min_theta I(B;Y|T)
};

MacBounds mac_bounds(const CompoundFamily& fam, const MarkovTriple& m) {
  MacBounds b;
  bool first = true;
  for (const auto& ch : fam.mac_members) {
    const double abt = mac_mi(ch, m, MacInfo::a_given_bt).in(Unit::bits);
    const double bat = mac_mi(ch, m, MacInfo::b_given_at).in(Unit::bits);
    const double ab = mac_mi(ch, m, MacInfo::ab_given_t).in(Unit::bits);
    const double at = mac_mi(ch, m, MacInfo::a_given_t).in(Unit::bits);
    const double bt = mac_mi(ch, m, MacInfo::b_given_t).in(Unit::bits);
    if (first) {
      b = {abt, bat, ab, at, bt};
      first = false;
    } else {
      b.a_bt = std::min(b.a_bt, abt);
      b.b_at = std::min(b.b_at, bat);
      b.ab_t = std::min(b.ab_t, ab);
      b.a_t = std::min(b.a_t, at);
      b.b_t = std::min(b.b_t, bt);
    }
  }
  return b;
}

void pentagon_points(double ra, double rb, double rsum,
                     std::vector<std::array<double, 2>>& out) {
  ra = std::max(ra, 0.0);
  rb = std::max(rb, 0.0);
  rsum = std::max(rsum, 0.0);
  const double xa = std::min(ra, rsum);
  const double yb = std::min(rb, rsum);
  out.push_back({xa, std::clamp(rsum - xa, 0.0, yb)});
  out.push_back({std::clamp(rsum - yb, 0.0, xa), yb});
  out.push_back({xa, 0.0});
  out.push_back({0.0, yb});
}

template <typename Candidate, typename Eval>
std::vector<Eval> evaluate_all(const std::vector<Candidate>& cands,
                               const std::function<Eval(const Candidate&)>& f, int threads) {
  std::vector<Eval> out(cands.size());
  if (threads <= 1 || cands.size() < 64) {
    for (std::size_t i = 0; i < cands.size(); ++i) out[i] = f(cands[i]);
    return out;
  }
  const std::size_t chunk = (cands.size() + static_cast<std::size_t>(threads) - 1) /
                            static_cast<std::size_t>(threads);
  std::vector<std::future<void>> jobs;
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(cands.size(), lo + chunk);
    if (lo >= hi) break;
    jobs.push_back(std::async(std::launch::async, [&, lo, hi]() {
      for (std::size_t i = lo; i < hi; ++i) out[i] = f(cands[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;  // merged in candidate order: deterministic
}

// Shared search driver: evaluates all candidates, then polishes the leaders
// along a fan of support directions.
std::vector<std::pair<MarkovTriple, MacBounds>> scan_mac(const CompoundFamily& fam,
                                                         const OptGrid& grid) {
  const auto& first = fam.mac_members.front();
  auto cands = triple_candidates(first.a_size, first.b_size, grid);
  std::function<MacBounds(const MarkovTriple&)> eval = [&](const MarkovTriple& m) {
    return mac_bounds(fam, m);
  };
  auto bounds = evaluate_all(cands, eval, grid.threads);

  std::vector<std::pair<MarkovTriple, MacBounds>> result;
  result.reserve(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) result.emplace_back(cands[i], bounds[i]);

  // direction fan over the pentagon support function
  const int kDirs = 9;
  for (int k = 0; k < kDirs; ++k) {
    const double ang = M_PI_2 * static_cast<double>(k) / (kDirs - 1);
    const double dx = std::cos(ang), dy = std::sin(ang);
    auto pentagon_support = [&](const MacBounds& b) {
      std::vector<std::array<double, 2>> pts;
      pentagon_points(b.a_bt, b.b_at, b.ab_t, pts);
      double s = 0.0;
      for (const auto& p : pts) s = std::max(s, dx * p[0] + dy * p[1]);
      return s;
    };
    std::vector<std::size_t> order(result.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(8, order.size()),
                      order.end(), [&](std::size_t p, std::size_t q) {
                        return pentagon_support(result[p].second) >
                               pentagon_support(result[q].second);
                      });
    for (std::size_t s = 0; s < std::min<std::size_t>(8, order.size()); ++s) {
      const MarkovTriple& seed = result[order[s]].first;
      TripleShape shape{seed.t_size(), seed.a_size(), seed.b_size()};
      MarkovTriple polished = nelder_mead(
          shape, seed,
          [&](const MarkovTriple& m) { return pentagon_support(mac_bounds(fam, m)); },
          grid.refine_rounds);
      result.emplace_back(polished, mac_bounds(fam, polished));
    }
  }
  return result;
}

}  // namespace

Region2D region_mac(const MACChannel& mac, const OptGrid& grid) {
  CompoundFamily singleton = CompoundFamily::of_mac({mac});
  // Winter's region uses product inputs only: keep |T| = 1.
  OptGrid g = grid;
  g.t_card = 1;
  auto scanned = scan_mac(singleton, g);
  std::vector<std::array<double, 2>> pts;
  for (const auto& [m, b] : scanned) pentagon_points(b.a_bt, b.b_at, b.ab_t, pts);
  return region_from_points(pts, Unit::bits);
}

Region2D region_compound_mac(const CompoundFamily& fam, const OptGrid& grid) {
  if (fam.kind != FamilyKind::mac) throw DomainError("region_compound_mac: family is not MAC");
  auto scanned = scan_mac(fam, grid);
  std::vector<std::array<double, 2>> pts;
  for (const auto& [m, b] : scanned) pentagon_points(b.a_bt, b.b_at, b.ab_t, pts);
  return region_from_points(pts, Unit::bits);
}

Region2D region_corner_union(const CompoundFamily& fam, const OptGrid& grid) {
  if (fam.kind != FamilyKind::mac) throw DomainError("region_corner_union: family is not MAC");
  auto scanned = scan_mac(fam, grid);
  std::vector<std::array<double, 2>> pts;
  for (const auto& [m, b] : scanned) {
    pts.push_back({b.a_t, b.b_at});  // decode A first
    pts.push_back({b.a_bt, b.b_t});  // decode B first
  }
  // polish the two corner sums
  for (int variant = 0; variant < 2; ++variant) {
    auto corner_sum = [&](const MacBounds& b) {
      return variant == 0 ? b.a_t + b.b_at : b.a_bt + b.b_t;
    };
    std::vector<std::size_t> order(scanned.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(8, order.size()),
                      order.end(), [&](std::size_t p, std::size_t q) {
                        return corner_sum(scanned[p].second) > corner_sum(scanned[q].second);
                      });
    for (std::size_t s = 0; s < std::min<std::size_t>(8, order.size()); ++s) {
      const MarkovTriple& seed = scanned[order[s]].first;
      TripleShape shape{seed.t_size(), seed.a_size(), seed.b_size()};
      MarkovTriple polished = nelder_mead(
          shape, seed, [&](const MarkovTriple& m) { return corner_sum(mac_bounds(fam, m)); },
          grid.refine_rounds);
      const MacBounds b = mac_bounds(fam, polished);
      pts.push_back({b.a_t, b.b_at});
      pts.push_back({b.a_bt, b.b_t});
    }
  }
  return region_from_points(pts, Unit::bits);
}

RQuantities r_quantities(const CompoundFamily& fam, const OptGrid& grid) {
  if (fam.kind != FamilyKind::mac) throw DomainError("r_quantities: family is not MAC");
  const Region2D corners = region_corner_union(fam, grid);
  const Region2D full = region_compound_mac(fam, grid);

  // R3: unconstrained sum-information max
  auto scanned = scan_mac(fam, grid);
  double r3 = 0.0;
  std::vector<std::size_t> order(scanned.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(8, order.size()),
                    order.end(), [&](std::size_t p, std::size_t q) {
                      return scanned[p].second.ab_t > scanned[q].second.ab_t;
                    });
  for (std::size_t s = 0; s < std::min<std::size_t>(8, order.size()); ++s) {
    r3 = std::max(r3, scanned[order[s]].second.ab_t);
    const MarkovTriple& seed = scanned[order[s]].first;
    TripleShape shape{seed.t_size(), seed.a_size(), seed.b_size()};
    MarkovTriple polished = nelder_mead(
        shape, seed, [&](const MarkovTriple& m) { return mac_bounds(fam, m).ab_t; },
        grid.refine_rounds);
    r3 = std::max(r3, mac_bounds(fam, polished).ab_t);
  }

  return {{corners.max_sum(), Unit::bits}, {full.max_sum(), Unit::bits}, {r3, Unit::bits}};
}

namespace {

struct BcdBounds {
  double common = 0.0;   // min over theta and receivers of I(U;.)
  double private_y = 0.0;  // min_theta I(X;Y|U)
};

BcdBounds bcd_bounds(const std::vector<BCDPair>& members, const MarkovTriple& ux) {
  BcdBounds b;
  bool first = true;
  for (const auto& pair : members) {
    const double uy = holevo_value(ensemble_common(ux, pair.w_y)).in(Unit::bits);
    const double uz = holevo_value(ensemble_common(ux, pair.w_z)).in(Unit::bits);
    const double xyu = holevo_value(ensemble_private(ux, pair.w_y)).in(Unit::bits);
    const double common = std::min(uy, uz);
    if (first) {
      b = {common, xyu};
      first = false;
    } else {
      b.common = std::min(b.common, common);
      b.private_y = std::min(b.private_y, xyu);
    }
  }
  return b;
}

Region2D region_bcd_impl(const std::vector<BCDPair>& members, const OptGrid& grid) {
  auto cands = ux_candidates(members.front().input_size(), grid);
  std::function<BcdBounds(const MarkovTriple&)> eval = [&](const MarkovTriple& m) {
    return bcd_bounds(members, m);
  };
  auto bounds = evaluate_all(cands, eval, grid.threads);

  std::vector<std::array<double, 2>> pts;
  for (const auto& b : bounds) pts.push_back({b.common, b.private_y});

  const int kDirs = 9;
  for (int k = 0; k < kDirs; ++k) {
    const double ang = M_PI_2 * static_cast<double>(k) / (kDirs - 1);
    const double dx = std::cos(ang), dy = std::sin(ang);
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto rect_support = [&](const BcdBounds& b) { return dx * b.common + dy * b.private_y; };
    std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(8, order.size()),
                      order.end(), [&](std::size_t p, std::size_t q) {
                        return rect_support(bounds[p]) > rect_support(bounds[q]);
                      });
    for (std::size_t s = 0; s < std::min<std::size_t>(8, order.size()); ++s) {
      const MarkovTriple& seed = cands[order[s]];
      TripleShape shape{seed.t_size(), seed.a_size(), 1};
      MarkovTriple polished = nelder_mead(
          shape, seed,
          [&](const MarkovTriple& m) { return rect_support(bcd_bounds(members, m)); },
          grid.refine_rounds);
      const BcdBounds b = bcd_bounds(members, polished);
      pts.push_back({b.common, b.private_y});
    }
  }
  return region_from_points(pts, Unit::bits);
}

}  // namespace

Region2D region_bcd(const BCDPair& pair, const OptGrid& grid) {
  return region_bcd_impl({pair}, grid);
}

Region2D region_compound_bcd(const CompoundFamily& fam, const OptGrid& grid) {
  if (fam.kind != FamilyKind::bcd) throw DomainError("region_compound_bcd: family is not BCD");
  return region_bcd_impl(fam.bcd_members, grid);
}

// ---------------------------------------------------------------------------
// Worked examples
// ---------------------------------------------------------------------------

std::vector<Example1CurvePoint> example1_curves(int resolution) {
  if (resolution < 2) throw DomainError("example1_curves: resolution must be >= 2");
  const double p0 = example1_p0();
  auto channel_rate = [&](double p) {
    return binary_entropy_bits(p * p0 + (1.0 - p) * (1.0 - p0)) - 0.5;
  };
  std::vector<Example1CurvePoint> out;
  out.reserve(static_cast<std::size_t>(resolution) + 1);
  for (int i = 0; i <= resolution; ++i) {
    const double rate = 0.5 * static_cast<double>(i) / resolution;
    // p with channel_rate(p) = rate, bisection on [0, 1/2]
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (channel_rate(mid) < rate) lo = mid; else hi = mid;
    }
    const double p_r = 0.5 * (lo + hi);
    const double hi1 = std::min(1.0 - binary_entropy_bits(p_r), 0.5);
    double hi2 = 0.0;
    if (rate < 0.25) hi2 = 0.5;
    else if (rate < 0.5) hi2 = 1.0 - 2.0 * rate;
    out.push_back({rate, hi1, hi2});
  }
  return out;
}

Example2Curves example2_curves(int resolution) {
  if (resolution < 2) throw DomainError("example2_curves: resolution must be >= 2");
  Example2Curves out;
  const double flat = binary_entropy_bits(0.25) - 0.5;

  for (int i = 0; i <= resolution; ++i) {
    const double rate = 0.6 * static_cast<double>(i) / resolution;
    const double lgh = (rate <= 0.5) ? flat : 0.0;
    double ll2p = 0.0;
    if (rate <= 0.5) {
      const double pbar = binary_entropy_inverse_bits(std::min(2.0 * rate, 1.0));
      auto val = [&](double q) {
        return 0.5 * (binary_entropy_bits(pbar * q) +
                      binary_entropy_bits((1.0 - pbar) * (1.0 - q))) -
               rate;
      };
      double best = 0.0;
      const int n = 400;
      for (int j = 0; j <= n; ++j) best = std::max(best, val(static_cast<double>(j) / n));
      ll2p = best;
    }
    out.curve.push_back({rate, lgh, ll2p});
  }

  const int cells = 200;  // p, q grids with step 1/200
  out.lm3_peak_value = -1.0;
  for (int i = 0; i <= cells; ++i) {
    const double p = static_cast<double>(i) / cells;
    const double hp = binary_entropy_bits(p);
    double best = -1.0, best_q = 0.0;
    for (int j = 0; j <= cells; ++j) {
      const double q = static_cast<double>(j) / cells;
      const double first = binary_entropy_bits(p * q) - q * hp;
      const double second = binary_entropy_bits((1.0 - p) * (1.0 - q)) - (1.0 - q) * hp;
      const double v = std::min(first, second);
      if (v > best) {
        best = v;
        best_q = q;
      }
    }
    out.lm3_scan.push_back({p, best, best_q});
    if (best > out.lm3_peak_value) {
      out.lm3_peak_value = best;
      out.lm3_peak_p = p;
      out.lm3_peak_q = best_q;
    }
  }
  return out;
}

}  // namespace cqcode
