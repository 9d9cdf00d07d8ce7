#include "fleetmdp/assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace fleetmdp {

AssignmentProblem build_problem(
    const SystemState& s,
    const std::map<VehicleAttribute, std::vector<Decision>>& decisions,
    const ObjectiveFn& coeff, const DemandValueFn* demand_value) {
  AssignmentProblem p;
  std::map<VehicleAttribute, int> res_index;
  for (const auto& [a, c] : s.vehicles) {
    if (c <= 0) continue;
    res_index[a] = int(p.resources.size());
    p.resources.push_back({a, c});
  }
  std::map<RequestAttribute, int> dem_index;
  for (const auto& [b, c] : s.requests) {
    if (c <= 0) continue;
    dem_index[b] = int(p.demands.size());
    p.demands.push_back({b, c});
  }

  std::vector<double> retain(p.demands.size(), 0.0);
  if (demand_value) {
    for (size_t i = 0; i < p.demands.size(); ++i) {
      retain[i] = (*demand_value)(p.demands[i].req);
      p.objective_constant += retain[i] * double(p.demands[i].available);
    }
  }

  for (const auto& [a, ri] : res_index) {
    auto it = decisions.find(a);
    if (it == decisions.end() || it->second.empty())
      throw InternalError("attribute with an empty decision list");
    for (const Decision& d : it->second) {
      AssignmentProblem::Column col;
      col.resource = ri;
      col.decision = d;
      col.objective = coeff(a, d);
      if (!std::isfinite(col.objective))
        throw InternalError("non-finite objective coefficient");
      std::map<int, int> cover;
      for (const auto& b : d.requests) {
        auto bit = dem_index.find(b);
        if (bit == dem_index.end())
          throw InternalError("decision serves a request absent from the state");
        cover[bit->second] += 1;
      }
      for (auto& [di, mult] : cover) {
        col.covers.emplace_back(di, mult);
        col.objective -= retain[di] * double(mult);
      }
      if (d.kind == DecisionKind::Multi) p.has_multi = true;
      p.columns.push_back(std::move(col));
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Primal network simplex on the bipartite min-cost flow equivalent of the
// Multi-free problem. Nodes: resources, demands, then the root (slack sink).
// Column arcs run resource -> demand (serving) or resource -> root; demand
// arcs run demand -> root with capacity D_b.
// ---------------------------------------------------------------------------

namespace {

struct NsArc {
  int from = 0, to = 0;
  Count cap = 0, flow = 0;
  double cost = 0.0;
};

constexpr double kEps = 1e-9;

struct NetworkSimplex {
  int n_nodes = 0;
  int root = 0;
  std::vector<NsArc> arcs;
  std::vector<bool> basic;
  std::vector<int> parent, pred;  // pred[v]: arc linking v to parent[v]
  std::vector<int> depth;
  std::vector<double> pot;

  void rebuild_tree() {
    std::vector<std::vector<std::pair<int, int>>> adj(n_nodes);
    for (int i = 0; i < int(arcs.size()); ++i)
      if (basic[i]) {
        adj[arcs[i].from].push_back({arcs[i].to, i});
        adj[arcs[i].to].push_back({arcs[i].from, i});
      }
    parent.assign(n_nodes, -1);
    pred.assign(n_nodes, -1);
    depth.assign(n_nodes, 0);
    pot.assign(n_nodes, 0.0);
    std::vector<int> stack{root};
    std::vector<bool> seen(n_nodes, false);
    seen[root] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [v, ai] : adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        parent[v] = u;
        pred[v] = ai;
        depth[v] = depth[u] + 1;
        // Basic arcs have zero reduced cost: cost - pot[from] + pot[to] = 0.
        if (arcs[ai].from == v)
          pot[v] = arcs[ai].cost + pot[u];
        else
          pot[v] = pot[u] - arcs[ai].cost;
        stack.push_back(v);
      }
    }
    for (int v = 0; v < n_nodes; ++v)
      if (!seen[v]) throw InternalError("network simplex: basis is not a spanning tree");
  }

  double reduced(const NsArc& a) const { return a.cost - pot[a.from] + pot[a.to]; }

  void solve() {
    rebuild_tree();
    const size_t max_iters = 2000 + 200 * arcs.size();
    size_t degenerate_streak = 0;
    for (size_t iter = 0; iter < max_iters; ++iter) {
      bool bland = degenerate_streak > 4 * arcs.size() + 100;
      int enter = -1;
      double best = kEps;
      for (int i = 0; i < int(arcs.size()); ++i) {
        if (basic[i]) continue;
        double r = reduced(arcs[i]);
        double viol = 0.0;
        if (arcs[i].flow == 0 && r < -kEps) viol = -r;
        else if (arcs[i].flow == arcs[i].cap && r > kEps) viol = r;
        if (viol > best) {
          best = viol;
          enter = i;
          if (bland) break;
        }
      }
      if (enter < 0) return;

      // Orientation of the flow change along the entering arc.
      const bool increase = arcs[enter].flow == 0;
      int u = arcs[enter].from, v = arcs[enter].to;
      if (!increase) std::swap(u, v);  // at cap: push flow against the arc

      // Cycle = entering arc + tree path v..u. Walk both ends to the LCA.
      std::vector<std::pair<int, bool>> cyc;  // (arc, aligned with change)
      int x = v, y = u;
      std::vector<std::pair<int, bool>> side_v, side_u;
      while (x != y) {
        if (depth[x] >= depth[y]) {
          int ai = pred[x];
          // Moving from x toward its parent; flow change direction is v->..->u.
          side_v.push_back({ai, arcs[ai].from == x});
          x = parent[x];
        } else {
          int ai = pred[y];
          side_u.push_back({ai, arcs[ai].to == y});
          y = parent[y];
        }
      }
      cyc = side_v;
      for (auto it = side_u.rbegin(); it != side_u.rend(); ++it) cyc.push_back(*it);

      Count delta = increase ? arcs[enter].cap - arcs[enter].flow : arcs[enter].flow;
      int leave = -1;  // -1: entering arc itself blocks (bound flip)
      for (auto [ai, aligned] : cyc) {
        Count room = aligned ? arcs[ai].cap - arcs[ai].flow : arcs[ai].flow;
        if (room < delta || (room == delta && (leave < 0 || ai < leave))) {
          delta = room;
          leave = ai;
        }
      }

      if (delta == 0) ++degenerate_streak; else degenerate_streak = 0;

      arcs[enter].flow += increase ? delta : -delta;
      for (auto [ai, aligned] : cyc) arcs[ai].flow += aligned ? delta : -delta;

      if (leave >= 0) {
        basic[leave] = false;
        basic[enter] = true;
        rebuild_tree();
      }
      // else: bound flip, basis unchanged.
    }
    throw InternalError("network simplex: iteration limit exceeded");
  }
};

// Initial basic column for a resource row: a column that serves no demand,
// so loading it with the full count is always feasible. Idle/Continue when
// present, otherwise any non-serving column (e.g. a forced Recharge).
int find_slack_column(const AssignmentProblem& p, int resource) {
  int fallback = -1;
  for (int j = 0; j < int(p.columns.size()); ++j) {
    const auto& c = p.columns[j];
    if (c.resource != resource || !c.covers.empty()) continue;
    if (c.decision.kind == DecisionKind::Idle ||
        c.decision.kind == DecisionKind::Continue)
      return j;
    if (fallback < 0) fallback = j;
  }
  if (fallback >= 0) return fallback;
  throw InternalError("resource row without a non-serving column");
}

}  // namespace

AssignmentSolution solve_lp(const AssignmentProblem& p) {
  if (p.has_multi)
    throw InternalError("solve_lp requires a Multi-free problem");
  for (const auto& c : p.columns)
    if (c.covers.size() > 1 || (c.covers.size() == 1 && c.covers[0].second != 1))
      throw InternalError("solve_lp: column covers more than one demand unit");

  const int nr = int(p.resources.size());
  const int nd = int(p.demands.size());
  NetworkSimplex ns;
  ns.n_nodes = nr + nd + 1;
  ns.root = nr + nd;

  Count total = 0;
  for (const auto& r : p.resources) total += r.available;

  // Column arcs first (index-aligned with columns), then demand arcs. Column
  // arcs are uncapacitated (flow balance already bounds them); a binding cap
  // here would divert dual weight away from the node potentials.
  for (const auto& c : p.columns) {
    NsArc a;
    a.from = c.resource;
    a.to = c.covers.empty() ? ns.root : nr + c.covers[0].first;
    a.cap = total + 1;
    a.cost = -c.objective;
    ns.arcs.push_back(a);
  }
  for (int i = 0; i < nd; ++i)
    ns.arcs.push_back({nr + i, ns.root, p.demands[i].available, 0, 0.0});

  ns.basic.assign(ns.arcs.size(), false);
  for (int r = 0; r < nr; ++r) {
    int j = find_slack_column(p, r);
    ns.basic[j] = true;
    ns.arcs[j].flow = p.resources[r].available;
  }
  for (int i = 0; i < nd; ++i) ns.basic[int(p.columns.size()) + i] = true;

  (void)total;
  ns.solve();

  // Degenerate bases admit many optimal duals. The +1 difference of the
  // optimal value equals the smallest optimal resource dual, so refine the
  // potentials to the pointwise-maximal solution of the complementary-
  // slackness difference constraints (a shortest-path computation from the
  // root): that minimizes every -pot[r] at once.
  {
    struct Edge {
      int from, to;
      double w;
    };
    std::vector<Edge> edges;
    for (const NsArc& a : ns.arcs) {
      if (a.flow < a.cap) edges.push_back({a.to, a.from, a.cost});   // y_u <= y_v + c
      if (a.flow > 0) edges.push_back({a.from, a.to, -a.cost});      // y_v <= y_u - c
    }
    constexpr double kBig = 1e18;
    std::vector<double> y(ns.n_nodes, kBig);
    y[ns.root] = 0.0;
    for (int pass = 0; pass < ns.n_nodes; ++pass) {
      bool changed = false;
      for (const Edge& e : edges)
        if (y[e.from] < kBig / 2 && y[e.from] + e.w < y[e.to] - 1e-12) {
          y[e.to] = y[e.from] + e.w;
          changed = true;
        }
      if (!changed) break;
    }
    bool all_reached = true;
    for (int v = 0; v < ns.n_nodes; ++v)
      if (y[v] >= kBig / 2) all_reached = false;
    if (all_reached) ns.pot = y;
  }

  AssignmentSolution sol;
  sol.x.resize(p.columns.size());
  sol.objective = p.objective_constant;
  for (size_t j = 0; j < p.columns.size(); ++j) {
    sol.x[j] = ns.arcs[j].flow;
    sol.objective += p.columns[j].objective * double(ns.arcs[j].flow);
  }
  sol.resource_duals.resize(nr);
  for (int r = 0; r < nr; ++r) sol.resource_duals[r] = -ns.pot[r];
  sol.demand_duals.resize(nd);
  for (int i = 0; i < nd; ++i) sol.demand_duals[i] = std::max(ns.pot[nr + i], 0.0);
  sol.has_duals = true;
  for (size_t i = 0; i < ns.arcs.size(); ++i)
    if (ns.basic[i] && (ns.arcs[i].flow == 0 || ns.arcs[i].flow == ns.arcs[i].cap))
      sol.degenerate = true;
  return sol;
}

// ---------------------------------------------------------------------------
// Bounded-variable dense primal simplex for the Multi-inclusive relaxations,
// plus depth-first branch and bound.
// ---------------------------------------------------------------------------

namespace {

struct DenseLp {
  // maximize c.x, rows: A x (+slack) = rhs, lo <= x <= up.
  int m = 0;                    // rows
  int n = 0;                    // structural variables (columns)
  int nv = 0;                   // n + slacks (+ artificials appended)
  std::vector<std::vector<double>> cols;  // per variable, dense m
  std::vector<double> c, lo, up, rhs;

  std::vector<int> basis;       // per row: basic variable
  std::vector<int> where;       // -1 at lo, +1 at up, 0 basic
  std::vector<double> x;
  std::vector<std::vector<double>> binv;

  bool feasible = true;
  double objective = 0.0;

  void add_var(std::vector<double> col, double cost, double l, double u) {
    cols.push_back(std::move(col));
    c.push_back(cost);
    lo.push_back(l);
    up.push_back(u);
    ++nv;
  }

  void set_binv_identity() {
    binv.assign(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) binv[i][i] = 1.0;
  }

  std::vector<double> basic_values() const {
    std::vector<double> resid = rhs;
    for (int j = 0; j < nv; ++j) {
      if (where[j] == 0) continue;
      double v = where[j] < 0 ? lo[j] : up[j];
      if (v == 0.0) continue;
      for (int i = 0; i < m; ++i) resid[i] -= cols[j][i] * v;
    }
    std::vector<double> vals(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += binv[i][k] * resid[k];
      vals[i] = s;
    }
    return vals;
  }

  void solve() {
    const double eps = 1e-9;
    const size_t max_iters = 5000 + 500 * size_t(nv);
    std::vector<double> xb = basic_values();
    size_t degen_streak = 0;
    for (size_t iter = 0; iter < max_iters; ++iter) {
      // y = c_B B^-1
      std::vector<double> y(m, 0.0);
      for (int i = 0; i < m; ++i) {
        double cb = c[basis[i]];
        if (cb == 0.0) continue;
        for (int k = 0; k < m; ++k) y[k] += cb * binv[i][k];
      }
      bool bland = degen_streak > 4 * size_t(nv) + 100;
      int enter = -1;
      int dir = 0;  // +1 increase from lo, -1 decrease from up
      double best = eps;
      for (int j = 0; j < nv; ++j) {
        if (where[j] == 0) continue;
        double d = c[j];
        for (int k = 0; k < m; ++k) d -= y[k] * cols[j][k];
        double viol = 0.0;
        int dj = 0;
        if (where[j] < 0 && d > eps) { viol = d; dj = +1; }
        else if (where[j] > 0 && d < -eps) { viol = -d; dj = -1; }
        if (viol > best) {
          best = viol;
          enter = j;
          dir = dj;
          if (bland) break;
        }
      }
      if (enter < 0) break;  // optimal

      // w = B^-1 A_enter
      std::vector<double> w(m, 0.0);
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += binv[i][k] * cols[enter][k];
        w[i] = s;
      }
      // Basic values change at rate -dir*w per unit of entering movement.
      double limit = up[enter] - lo[enter];
      int leave_row = -1;
      int leave_to = 0;  // -1: leaving var lands at lo, +1: at up
      for (int i = 0; i < m; ++i) {
        double rate = -double(dir) * w[i];
        int bj = basis[i];
        double room;
        int to;
        if (rate < -1e-11) {
          room = (xb[i] - lo[bj]) / (-rate);
          to = -1;
        } else if (rate > 1e-11 && std::isfinite(up[bj])) {
          room = (up[bj] - xb[i]) / rate;
          to = +1;
        } else {
          continue;
        }
        room = std::max(0.0, room);
        bool take = room < limit - 1e-12 ||
                    (room <= limit + 1e-12 &&
                     (leave_row >= 0 && bj < basis[leave_row]));
        if (take) {
          limit = std::min(limit, room);
          leave_row = i;
          leave_to = to;
        }
      }
      if (!std::isfinite(limit)) throw InternalError("simplex: unbounded relaxation");

      if (limit <= 1e-12) ++degen_streak; else degen_streak = 0;

      if (leave_row < 0) {
        // Bound flip of the entering variable.
        where[enter] = -where[enter];
        xb = basic_values();
        continue;
      }

      // Pivot: entering becomes basic at value (bound + dir*limit).
      int leaving = basis[leave_row];
      where[leaving] = leave_to;
      basis[leave_row] = enter;
      where[enter] = 0;
      double piv = w[leave_row];
      if (std::abs(piv) < 1e-11) throw InternalError("simplex: zero pivot");
      for (int k = 0; k < m; ++k) binv[leave_row][k] /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave_row) continue;
        double f = w[i];
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) binv[i][k] -= f * binv[leave_row][k];
      }
      xb = basic_values();
      if (iter + 1 == max_iters) throw InternalError("simplex: iteration limit");
    }

    x.assign(nv, 0.0);
    for (int j = 0; j < nv; ++j)
      if (where[j] != 0) x[j] = where[j] < 0 ? lo[j] : up[j];
    std::vector<double> fin = basic_values();
    for (int i = 0; i < m; ++i) x[basis[i]] = fin[i];
    objective = 0.0;
    for (int j = 0; j < nv; ++j) objective += c[j] * x[j];
  }
};

struct BnB {
  const AssignmentProblem& p;
  int n = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<Count> best_x;
  bool have_incumbent = false;

  explicit BnB(const AssignmentProblem& prob) : p(prob), n(int(prob.columns.size())) {}

  // Exact integer objective in canonical column order.
  double exact_objective(const std::vector<Count>& x) const {
    double s = p.objective_constant;
    for (int j = 0; j < n; ++j) s += p.columns[j].objective * double(x[j]);
    return s;
  }

  bool integral_feasible(const std::vector<Count>& x) const {
    std::vector<Count> used(p.resources.size(), 0), cov(p.demands.size(), 0);
    for (int j = 0; j < n; ++j) {
      if (x[j] < 0) return false;
      used[p.columns[j].resource] += x[j];
      for (auto [di, mult] : p.columns[j].covers) cov[di] += Count(mult) * x[j];
    }
    for (size_t r = 0; r < p.resources.size(); ++r)
      if (used[r] != p.resources[r].available) return false;
    for (size_t d = 0; d < p.demands.size(); ++d)
      if (cov[d] > p.demands[d].available) return false;
    return true;
  }

  // Solves the LP relaxation with the given column bounds. Returns false when
  // the node is infeasible.
  bool solve_relaxation(const std::vector<Count>& blo, const std::vector<Count>& bup,
                        double& value, std::vector<double>& xcols) {
    const int nr = int(p.resources.size());
    const int nd = int(p.demands.size());

    // Quick infeasibility checks on fixed lower bounds.
    std::vector<Count> lo_used(nr, 0), lo_cov(nd, 0);
    for (int j = 0; j < n; ++j) {
      if (blo[j] > bup[j]) return false;
      lo_used[p.columns[j].resource] += blo[j];
      for (auto [di, mult] : p.columns[j].covers) lo_cov[di] += Count(mult) * blo[j];
    }
    for (int r = 0; r < nr; ++r)
      if (lo_used[r] > p.resources[r].available) return false;
    for (int d = 0; d < nd; ++d)
      if (lo_cov[d] > p.demands[d].available) return false;

    DenseLp lp;
    lp.m = nr + nd;
    lp.n = n;
    const double inf = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      std::vector<double> col(lp.m, 0.0);
      col[p.columns[j].resource] = 1.0;
      for (auto [di, mult] : p.columns[j].covers) col[nr + di] = double(mult);
      lp.add_var(std::move(col), p.columns[j].objective, double(blo[j]),
                 bup[j] >= std::numeric_limits<Count>::max() / 2 ? inf : double(bup[j]));
    }
    for (int d = 0; d < nd; ++d) {
      std::vector<double> col(lp.m, 0.0);
      col[nr + d] = 1.0;
      lp.add_var(std::move(col), 0.0, 0.0, inf);
    }
    lp.rhs.resize(lp.m);
    for (int r = 0; r < nr; ++r) lp.rhs[r] = double(p.resources[r].available);
    for (int d = 0; d < nd; ++d) lp.rhs[nr + d] = double(p.demands[d].available);

    // Natural start: Idle/Continue column basic per resource row, slack per
    // demand row, everything else at its lower bound.
    lp.where.assign(lp.nv, -1);
    lp.basis.resize(lp.m);
    for (int r = 0; r < nr; ++r) {
      int j = find_slack_column(p, r);
      lp.basis[r] = j;
      lp.where[j] = 0;
    }
    for (int d = 0; d < nd; ++d) {
      lp.basis[nr + d] = n + d;
      lp.where[n + d] = 0;
    }
    lp.set_binv_identity();
    std::vector<double> start = lp.basic_values();
    bool natural_ok = true;
    for (int i = 0; i < lp.m; ++i) {
      int bj = lp.basis[i];
      if (start[i] < lp.lo[bj] - 1e-9 || start[i] > lp.up[bj] + 1e-9)
        natural_ok = false;
    }
    if (!natural_ok) {
      // Signed big-M artificials form the starting basis instead.
      double maxc = 1.0;
      for (int j = 0; j < n; ++j) maxc = std::max(maxc, std::abs(p.columns[j].objective));
      const double big = 1e7 * maxc;
      for (int i = 0; i < lp.m; ++i) lp.where[lp.basis[i]] = -1;
      std::vector<double> resid = lp.rhs;
      for (int j = 0; j < lp.nv; ++j) {
        double v = lp.where[j] < 0 ? lp.lo[j] : lp.up[j];
        if (v == 0.0) continue;
        for (int i = 0; i < lp.m; ++i) resid[i] -= lp.cols[j][i] * v;
      }
      for (int i = 0; i < lp.m; ++i) {
        std::vector<double> col(lp.m, 0.0);
        col[i] = resid[i] >= 0 ? 1.0 : -1.0;
        lp.add_var(std::move(col), -big, 0.0, inf);
        lp.where.push_back(0);
        lp.basis[i] = lp.nv - 1;
      }
      lp.set_binv_identity();
      for (int i = 0; i < lp.m; ++i)
        if (lp.cols[lp.basis[i]][i] < 0) lp.binv[i][i] = -1.0;
    }

    lp.solve();
    // Any artificial stuck above zero means the node is infeasible.
    for (int j = lp.n + nd; j < lp.nv; ++j)
      if (lp.x[j] > 1e-6) return false;
    value = lp.objective + p.objective_constant;
    xcols.assign(lp.x.begin(), lp.x.begin() + n);
    return true;
  }

  void explore(std::vector<Count>& blo, std::vector<Count>& bup) {
    double value = 0.0;
    std::vector<double> xc;
    if (!solve_relaxation(blo, bup, value, xc)) return;
    if (have_incumbent && value <= best_val + 1e-9) return;

    int frac = -1;
    double frac_amt = 1e-6;
    for (int j = 0; j < n; ++j) {
      double f = std::abs(xc[j] - std::round(xc[j]));
      if (f > frac_amt) {
        frac_amt = f;
        frac = j;
      }
    }
    if (frac < 0) {
      std::vector<Count> xi(n);
      for (int j = 0; j < n; ++j) xi[j] = Count(std::llround(xc[j]));
      if (!integral_feasible(xi))
        throw InternalError("branch and bound: rounded LP point infeasible");
      double obj = exact_objective(xi);
      if (!have_incumbent || obj > best_val + 1e-12) {
        best_val = obj;
        best_x = xi;
        have_incumbent = true;
      }
      return;
    }

    Count down = Count(std::floor(xc[frac]));
    Count saved_up = bup[frac], saved_lo = blo[frac];
    bup[frac] = down;
    explore(blo, bup);
    bup[frac] = saved_up;
    blo[frac] = down + 1;
    explore(blo, bup);
    blo[frac] = saved_lo;
  }
};

}  // namespace

AssignmentSolution solve_ip(const AssignmentProblem& p) {
  BnB bnb(p);
  std::vector<Count> blo(p.columns.size(), 0);
  std::vector<Count> bup(p.columns.size(), std::numeric_limits<Count>::max() / 2);
  bnb.explore(blo, bup);
  if (!bnb.have_incumbent) throw InternalError("solve_ip: no feasible solution");
  AssignmentSolution sol;
  sol.x = bnb.best_x;
  sol.objective = bnb.exact_objective(bnb.best_x);
  return sol;
}

void write_lp_format(const AssignmentProblem& p, std::ostream& os) {
  os << "Maximize\n obj:";
  for (size_t j = 0; j < p.columns.size(); ++j) {
    double q = p.columns[j].objective;
    os << (q >= 0 ? " +" : " -") << std::abs(q) << " x" << j;
  }
  os << "\nSubject To\n";
  for (size_t r = 0; r < p.resources.size(); ++r) {
    os << " res" << r << ":";
    for (size_t j = 0; j < p.columns.size(); ++j)
      if (p.columns[j].resource == int(r)) os << " + x" << j;
    os << " = " << p.resources[r].available << "\n";
  }
  for (size_t d = 0; d < p.demands.size(); ++d) {
    os << " dem" << d << ":";
    for (size_t j = 0; j < p.columns.size(); ++j)
      for (auto [di, mult] : p.columns[j].covers)
        if (di == int(d)) os << " + " << mult << " x" << j;
    os << " <= " << p.demands[d].available << "\n";
  }
  os << "General\n";
  for (size_t j = 0; j < p.columns.size(); ++j) os << " x" << j;
  os << "\nEnd\n";
}

}  // namespace fleetmdp
