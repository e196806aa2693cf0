#include "spiral/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace spiral {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Vec2 theta_gradient(Vec2 x) {
  const double r2 = x.x * x.x + x.y * x.y;
  if (!(r2 > 0.0)) throw std::domain_error("theta_gradient undefined at the origin");
  return {-x.y / r2, x.x / r2};
}

Grid::Grid(int s, double rho) : s_(s), rho_(rho) {
  if (s < 1) throw std::invalid_argument("refinement s must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("center radius rho must be positive");
  n_ = 75 * s;
  side_ = 2 * n_ + 3;
  dx_ = 0.02 / s;
  if (!(rho < 1.5)) throw std::invalid_argument("center radius must fit inside the box");

  status_.assign(size(), Node::dead);
  const double rho2 = rho * rho;
  const double dx2 = dx_ * dx_;
  for (int i = -n_; i <= n_; ++i) {
    for (int j = -n_; j <= n_; ++j) {
      const double r2 = (static_cast<double>(i) * i + static_cast<double>(j) * j) * dx2;
      if (r2 > rho2) status_[idx(i, j)] = Node::active;
    }
  }

  // Ghost nodes: inactive nodes bordering the active set, preferring axis
  // neighbors; box-corner ghosts fall back to the diagonal neighbor.
  auto in_bounds = [&](int i, int j) { return i >= -n_ - 1 && i <= n_ + 1 && j >= -n_ - 1 && j <= n_ + 1; };
  auto is_active = [&](int i, int j) { return in_bounds(i, j) && status_[idx(i, j)] == Node::active; };

  const int axis_off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const int diag_off[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

  ghosts_.offset.push_back(0);
  for (int i = -n_ - 1; i <= n_ + 1; ++i) {
    for (int j = -n_ - 1; j <= n_ + 1; ++j) {
      if (status_[idx(i, j)] == Node::active) continue;
      int nbi[4], nbj[4];
      int count = 0;
      for (const auto& o : axis_off)
        if (is_active(i + o[0], j + o[1])) {
          nbi[count] = i + o[0];
          nbj[count] = j + o[1];
          ++count;
        }
      if (count == 0) {
        for (const auto& o : diag_off)
          if (is_active(i + o[0], j + o[1])) {
            nbi[count] = i + o[0];
            nbj[count] = j + o[1];
            ++count;
          }
      }
      if (count == 0) continue;  // stays dead
      status_[idx(i, j)] = Node::ghost;
      ghosts_.target.push_back(idx(i, j));
      for (int q = 0; q < count; ++q) {
        const Vec2 xg{coord(i), coord(j)};
        const Vec2 xa{coord(nbi[q]), coord(nbj[q])};
        const Vec2 mid = 0.5 * (xg + xa);
        ghosts_.nb.push_back(idx(nbi[q], nbj[q]));
        ghosts_.inc.push_back(dot(theta_gradient(mid), xg - xa));
      }
      ghosts_.offset.push_back(ghosts_.nb.size());
    }
  }

  active_indices_.reserve(size());
  for (std::size_t c = 0; c < size(); ++c)
    if (status_[c] == Node::active) active_indices_.push_back(c);
}

LevelSetConfig LevelSetConfig::make(int s, double rho, const EvolutionParams& params, XiForm form,
                                    const EnergyDensity& density, double u0, double dt_override,
                                    double eps_override) {
  LevelSetConfig cfg;
  cfg.grid = std::make_shared<Grid>(s, rho);
  cfg.dt = dt_override > 0.0 ? dt_override : 0.1 * cfg.grid->dx() * cfg.grid->dx();
  cfg.eps = eps_override > 0.0 ? eps_override : cfg.grid->dx();
  cfg.u0 = u0;
  cfg.params = params;
  cfg.form = form;
  cfg.density = density;
  return cfg;
}

ScalarField initial_field(const LevelSetConfig& cfg) {
  ScalarField f;
  f.t = 0.0;
  f.grid = cfg.grid;
  f.u.assign(cfg.grid->size(), kNaN);
  const auto& st = cfg.grid->status();
  for (std::size_t c = 0; c < st.size(); ++c)
    if (st[c] != Grid::Node::dead) f.u[c] = cfg.u0;
  return f;
}

namespace {

void fill_ghosts(const Grid& g, std::vector<double>& u) {
  const Grid::GhostPlan& plan = g.ghost_plan();
  for (std::size_t t = 0; t < plan.target.size(); ++t) {
    double acc = 0.0;
    const std::size_t lo = plan.offset[t], hi = plan.offset[t + 1];
    for (std::size_t q = lo; q < hi; ++q) acc += u[plan.nb[q]] + plan.inc[q];
    u[plan.target[t]] = acc / static_cast<double>(hi - lo);
  }
}

// --- xi kernels ------------------------------------------------------------

inline double sigma_fast(double z, double a, double b, double eps) {
  if (z == 0.0) return 0.0;
  const double w = eps * (std::abs(a) + std::abs(b));
  return z / std::sqrt(z * z + w * w);
}

struct L1Kernel {
  double eps;
  double xi_x(double px, double py) const { return sigma_fast(px, px, py, eps); }
  double xi_y(double px, double py) const { return sigma_fast(py, px, py, eps); }
  double gamma(double px, double py) const {
    return px * sigma_fast(px, px, py, eps) + py * sigma_fast(py, px, py, eps);
  }
};

struct RotatedL1Kernel {
  double eps;
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  double xi_x(double px, double py) const {
    const double q1 = (px + py) * kInvSqrt2, q2 = (px - py) * kInvSqrt2;
    return (sigma_fast(q1, q1, q2, eps) + sigma_fast(q2, q1, q2, eps)) * kInvSqrt2;
  }
  double xi_y(double px, double py) const {
    const double q1 = (px + py) * kInvSqrt2, q2 = (px - py) * kInvSqrt2;
    return (sigma_fast(q1, q1, q2, eps) - sigma_fast(q2, q1, q2, eps)) * kInvSqrt2;
  }
  double gamma(double px, double py) const {
    const double q1 = (px + py) * kInvSqrt2, q2 = (px - py) * kInvSqrt2;
    return q1 * sigma_fast(q1, q1, q2, eps) + q2 * sigma_fast(q2, q1, q2, eps);
  }
};

struct SectorKernel {
  const Vec2* v;  // reflected density vectors ~n_j
  int n;
  double eps;

  void accumulate(double px, double py, double* xix, double* xiy, double* g) const {
    double ox = 0.0, oy = 0.0, og = 0.0;
    for (int j = 0; j < n; ++j) {
      const double gj = v[j].x * px + v[j].y * py;
      double f = std::numeric_limits<double>::infinity();
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        f = std::min(f, gj - (v[k].x * px + v[k].y * py));
      }
      const double w = 0.5 * (sigma_fast(f, 1.0, 0.0, eps) + 1.0);
      ox += w * v[j].x;
      oy += w * v[j].y;
      og += w * gj;
    }
    *xix = ox;
    *xiy = oy;
    *g = og;
  }
  double xi_x(double px, double py) const {
    double a, b, c;
    accumulate(px, py, &a, &b, &c);
    return a;
  }
  double xi_y(double px, double py) const {
    double a, b, c;
    accumulate(px, py, &a, &b, &c);
    return b;
  }
  double gamma(double px, double py) const {
    double a, b, c;
    accumulate(px, py, &a, &b, &c);
    return c;
  }
};

// --- stencil passes ---------------------------------------------------------

// Face fluxes of ~xi(grad(u - theta)): one-sided difference across the face,
// four-point average along it, analytic grad(theta) at the face midpoint.
template <class K>
void face_pass(const Grid& g, const double* u, const K& kern, double* fx, double* fy) {
  const int n = g.n();
  const std::ptrdiff_t side = g.side();
  const double dx = g.dx();
  const double inv_dx = 1.0 / dx;
  const double inv_4dx = 0.25 * inv_dx;

#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (int i = -n - 1; i <= n; ++i) {
      const double xm = (i + 0.5) * dx;
      const std::size_t row = g.idx(i, -n);
      for (int j = -n; j <= n; ++j) {
        const std::size_t c = row + static_cast<std::size_t>(j + n);
        const double ym = j * dx;
        const double inv_r2 = 1.0 / (xm * xm + ym * ym);
        const double px = (u[c + side] - u[c]) * inv_dx + ym * inv_r2;
        const double py = (u[c + 1] + u[c + side + 1] - u[c - 1] - u[c + side - 1]) * inv_4dx -
                          xm * inv_r2;
        fx[c] = kern.xi_x(px, py);
      }
    }
#pragma omp for schedule(static)
    for (int i = -n; i <= n; ++i) {
      const double xm = i * dx;
      const std::size_t row = g.idx(i, -n - 1);
      for (int j = -n - 1; j <= n; ++j) {
        const std::size_t c = row + static_cast<std::size_t>(j + n + 1);
        const double ym = (j + 0.5) * dx;
        const double inv_r2 = 1.0 / (xm * xm + ym * ym);
        const double py = (u[c + 1] - u[c]) * inv_dx - xm * inv_r2;
        const double px = (u[c + side] + u[c + side + 1] - u[c - side] - u[c - side + 1]) * inv_4dx +
                          ym * inv_r2;
        fy[c] = kern.xi_y(px, py);
      }
    }
  }
}

struct BadNode {
  bool hit = false;
  int i = 0, j = 0;
};

template <class K>
void node_pass(const Grid& g, const double* u, const double* fx, const double* fy,
               const EvolutionParams& prm, double dt, const K& kern, double* out, BadNode* bad) {
  const int n = g.n();
  const std::ptrdiff_t side = g.side();
  const double dx = g.dx();
  const double inv_dx = 1.0 / dx;
  const double inv_2dx = 0.5 * inv_dx;
  const auto* status = g.status().data();

#pragma omp parallel for schedule(static)
  for (int i = -n; i <= n; ++i) {
    const double x = i * dx;
    const std::size_t row = g.idx(i, -n);
    for (int j = -n; j <= n; ++j) {
      const std::size_t c = row + static_cast<std::size_t>(j + n);
      if (status[c] != Grid::Node::active) continue;
      const double y = j * dx;
      const double inv_r2 = 1.0 / (x * x + y * y);
      const double div = (fx[c] - fx[c - side] + fy[c] - fy[c - 1]) * inv_dx;
      const double px = (u[c + side] - u[c - side]) * inv_2dx + y * inv_r2;
      const double py = (u[c + 1] - u[c - 1]) * inv_2dx - x * inv_r2;
      const double next = u[c] + dt * kern.gamma(px, py) * (prm.rho_c * div + prm.U);
      out[c] = next;
      if (!std::isfinite(next)) {
#pragma omp critical
        {
          if (!bad->hit) {
            bad->hit = true;
            bad->i = i;
            bad->j = j;
          }
        }
      }
    }
  }
}

template <class K>
void divergence_pass(const Grid& g, const double* u, const double* fx, const double* fy,
                     const K&, double* out) {
  const int n = g.n();
  const std::ptrdiff_t side = g.side();
  const double inv_dx = 1.0 / g.dx();
  const auto* status = g.status().data();
  for (int i = -n; i <= n; ++i) {
    const std::size_t row = g.idx(i, -n);
    for (int j = -n; j <= n; ++j) {
      const std::size_t c = row + static_cast<std::size_t>(j + n);
      if (status[c] != Grid::Node::active) continue;
      out[c] = (fx[c] - fx[c - side] + fy[c] - fy[c - 1]) * inv_dx;
    }
  }
}

template <class F>
auto with_kernel(const LevelSetConfig& cfg, F&& f) {
  switch (cfg.form) {
    case XiForm::smoothed_l1:
      return f(L1Kernel{cfg.eps});
    case XiForm::smoothed_l1_rotated:
      return f(RotatedL1Kernel{cfg.eps});
    case XiForm::sector_sum:
    default: {
      std::vector<Vec2> tilde;
      tilde.reserve(cfg.density.vectors.size());
      for (const Vec2& nvec : cfg.density.vectors) tilde.push_back(-nvec);
      return f(SectorKernel{tilde.data(), static_cast<int>(tilde.size()), cfg.eps});
    }
  }
}

void check_field(const ScalarField& field, const LevelSetConfig& cfg) {
  if (!field.grid || !cfg.grid) throw std::invalid_argument("field or config has no grid");
  if (!field.grid->same_layout(*cfg.grid))
    throw std::invalid_argument("field grid does not match the configuration grid");
  if (field.u.size() != cfg.grid->size())
    throw std::invalid_argument("field size does not match the grid");
}

}  // namespace

void apply_bc(ScalarField& field, const LevelSetConfig& cfg) {
  check_field(field, cfg);
  fill_ghosts(*cfg.grid, field.u);
}

ScalarField divergence_term(const ScalarField& field, const LevelSetConfig& cfg) {
  check_field(field, cfg);
  const Grid& g = *cfg.grid;
  std::vector<double> fx(g.size(), kNaN), fy(g.size(), kNaN);
  ScalarField out;
  out.t = field.t;
  out.grid = field.grid;
  out.u.assign(g.size(), kNaN);
  with_kernel(cfg, [&](auto kern) {
    face_pass(g, field.u.data(), kern, fx.data(), fy.data());
    divergence_pass(g, field.u.data(), fx.data(), fy.data(), kern, out.u.data());
  });
  return out;
}

ScalarField step(const ScalarField& field, const LevelSetConfig& cfg) {
  check_field(field, cfg);
  const Grid& g = *cfg.grid;
  std::vector<double> fx(g.size(), kNaN), fy(g.size(), kNaN);
  ScalarField out = field;
  out.t = field.t + cfg.dt;
  BadNode bad;
  with_kernel(cfg, [&](auto kern) {
    face_pass(g, field.u.data(), kern, fx.data(), fy.data());
    node_pass(g, field.u.data(), fx.data(), fy.data(), cfg.params, cfg.dt, kern, out.u.data(),
              &bad);
  });
  if (bad.hit)
    throw std::runtime_error("nonfinite level-set update at node (" + std::to_string(bad.i) +
                             ", " + std::to_string(bad.j) + "), t=" + std::to_string(field.t));
  return out;
}

std::vector<ScalarField> solve(const LevelSetConfig& cfg, const ScalarField& u0, double t_end,
                               const std::vector<double>& sample_times) {
  check_field(u0, cfg);
  if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  std::vector<double> samples = sample_times;
  std::sort(samples.begin(), samples.end());
  for (double s : samples)
    if (s < 0.0 || s > t_end + 1e-12)
      throw std::invalid_argument("sample times must lie in [0, t_end]");

  const Grid& g = *cfg.grid;
  std::vector<double> fx(g.size(), kNaN), fy(g.size(), kNaN);
  ScalarField cur = u0;
  ScalarField next = u0;

  std::vector<ScalarField> snapshots;
  snapshots.reserve(samples.size());

  auto march_to = [&](double target) {
    while (target - cur.t > 1e-13 * std::max(1.0, target)) {
      const double dt = std::min(cfg.dt, target - cur.t);
      fill_ghosts(g, cur.u);
      BadNode bad;
      with_kernel(cfg, [&](auto kern) {
        face_pass(g, cur.u.data(), kern, fx.data(), fy.data());
        node_pass(g, cur.u.data(), fx.data(), fy.data(), cfg.params, dt, kern, next.u.data(),
                  &bad);
      });
      if (bad.hit)
        throw std::runtime_error("nonfinite level-set update at node (" + std::to_string(bad.i) +
                                 ", " + std::to_string(bad.j) + "), t=" + std::to_string(cur.t));
      std::swap(cur.u, next.u);
      cur.t += dt;
    }
    cur.t = target;
  };

  for (double s : samples) {
    march_to(s);
    ScalarField snap = cur;
    snap.t = s;
    snapshots.push_back(std::move(snap));
  }
  if (samples.empty() || samples.back() < t_end) march_to(t_end);
  return snapshots;
}

std::vector<std::vector<Vec2>> extract_contour(const ScalarField& field,
                                               const LevelSetConfig& cfg) {
  check_field(field, cfg);
  const Grid& g = *cfg.grid;
  const int n = g.n();

  // Branch offset per node: w = (u - arg x) mod 2pi on active nodes.
  std::vector<double> w(g.size(), kNaN);
  for (std::size_t c : g.active_indices()) {
    const int i = static_cast<int>(c / static_cast<std::size_t>(g.side())) - n - 1;
    const int j = static_cast<int>(c % static_cast<std::size_t>(g.side())) - n - 1;
    w[c] = wrap_2pi(field.u[c] - std::atan2(g.coord(j), g.coord(i)));
  }

  // Crossing of the wrap level on the edge a -> b, if any.
  auto edge_crossing = [&](int ia, int ja, int ib, int jb, Vec2* out) -> bool {
    if (!g.active(ia, ja) || !g.active(ib, jb)) return false;
    const double wa = w[g.idx(ia, ja)];
    double d = w[g.idx(ib, jb)] - wa;
    if (d > kPi) d -= kTwoPi;
    if (d <= -kPi) d += kTwoPi;
    const double vb = wa + d;
    double frac;
    if (wa > 0.0 && vb <= 0.0)
      frac = wa / (wa - vb);
    else if (vb >= kTwoPi)
      frac = (kTwoPi - wa) / (vb - wa);
    else
      return false;
    const Vec2 xa{g.coord(ia), g.coord(ja)};
    const Vec2 xb{g.coord(ib), g.coord(jb)};
    *out = xa + frac * (xb - xa);
    return true;
  };

  // Edge keys: horizontal (i,j)-(i+1,j) and vertical (i,j)-(i,j+1).
  auto hkey = [&](int i, int j) {
    return (static_cast<long long>(i + n + 1) << 22) | (j + n + 1);
  };
  auto vkey = [&](int i, int j) {
    return (1LL << 44) | (static_cast<long long>(i + n + 1) << 22) | (j + n + 1);
  };

  std::unordered_map<long long, Vec2> points;
  std::unordered_map<long long, std::vector<long long>> links;
  auto get_point = [&](long long key, int ia, int ja, int ib, int jb, Vec2* out) -> bool {
    auto it = points.find(key);
    if (it != points.end()) {
      *out = it->second;
      return true;
    }
    Vec2 p;
    if (!edge_crossing(ia, ja, ib, jb, &p)) return false;
    points.emplace(key, p);
    *out = p;
    return true;
  };

  for (int i = -n; i < n; ++i) {
    for (int j = -n; j < n; ++j) {
      struct Hit {
        long long key;
        Vec2 p;
      };
      Hit hits[4];
      int count = 0;
      Vec2 p;
      if (get_point(hkey(i, j), i, j, i + 1, j, &p) && count < 4) hits[count++] = {hkey(i, j), p};
      if (get_point(vkey(i + 1, j), i + 1, j, i + 1, j + 1, &p) && count < 4)
        hits[count++] = {vkey(i + 1, j), p};
      if (get_point(hkey(i, j + 1), i, j + 1, i + 1, j + 1, &p) && count < 4)
        hits[count++] = {hkey(i, j + 1), p};
      if (get_point(vkey(i, j), i, j, i, j + 1, &p) && count < 4) hits[count++] = {vkey(i, j), p};

      auto connect = [&](const Hit& a, const Hit& b) {
        links[a.key].push_back(b.key);
        links[b.key].push_back(a.key);
      };
      if (count == 2) connect(hits[0], hits[1]);
      if (count == 4) {  // saddle cell: pair in stencil order
        connect(hits[0], hits[1]);
        connect(hits[2], hits[3]);
      }
    }
  }

  // Walk open chains first, then any remaining cycles.
  std::vector<std::vector<Vec2>> polylines;
  std::unordered_map<long long, bool> used;
  auto walk = [&](long long start) {
    std::vector<Vec2> line;
    long long prev = -1, cur = start;
    while (true) {
      used[cur] = true;
      line.push_back(points[cur]);
      long long nxt = -1;
      for (long long cand : links[cur])
        if (cand != prev && !used[cand]) {
          nxt = cand;
          break;
        }
      if (nxt < 0) break;
      prev = cur;
      cur = nxt;
    }
    if (line.size() >= 2) polylines.push_back(std::move(line));
  };
  for (const auto& [key, nbs] : links)
    if (nbs.size() == 1 && !used[key]) walk(key);
  for (const auto& [key, nbs] : links)
    if (!used[key]) walk(key);

  return polylines;
}

}  // namespace spiral
