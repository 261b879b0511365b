#include "capvc/lp.hpp"

#include "capvc/errors.hpp"
#include "capvc/exact_linalg.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace capvc {

int LpModel::var_index(const VarRef& ref) const {
  for (size_t j = 0; j < vars.size(); ++j)
    if (vars[j].ref == ref) return static_cast<int>(j);
  return -1;
}

LpModel build_lp(const ParamTuple& psi) {
  validate_tuple(psi);
  const Instance& inst = *psi.inst;
  LpModel model;
  model.psi = &psi;

  for (const Vertex& v : inst.vertices())
    model.vars.push_back({VarRef::x(v.id), psi.lower_bound(v.id), Rat(v.multiplicity), Rat(1)});
  std::map<std::pair<EdgeId, VertexId>, int> h_index;
  for (EdgeId e : psi.active_edges)
    for (VertexId v : inst.edge(e).vertices) {
      h_index[{e, v}] = static_cast<int>(model.vars.size());
      model.vars.push_back({VarRef::h(e, v), Rat(0), std::nullopt, Rat(0)});
    }

  for (EdgeId e : psi.active_edges) {
    LpModel::Row row;
    row.id = {ConstraintRef::EdgeRow, e, 0};
    row.equality = true;
    row.rhs = 1;
    for (VertexId v : inst.edge(e).vertices) row.coeffs.emplace_back(h_index.at({e, v}), Rat(1));
    model.rows.push_back(std::move(row));
  }
  for (const Vertex& v : inst.vertices()) {
    LpModel::Row row;
    row.id = {ConstraintRef::CapacityRow, 0, v.id};
    row.equality = false;
    row.rhs = 0;
    for (EdgeId e : inst.incident_edges(v.id)) {
      if (!psi.edge_active(e)) continue;
      const Rat& d = inst.edge(e).demand;
      if (d != 0) row.coeffs.emplace_back(h_index.at({e, v.id}), d);
    }
    if (psi.residual_cap(v.id) != 0)
      row.coeffs.emplace_back(v.id - 1, -psi.residual_cap(v.id));
    model.rows.push_back(std::move(row));
  }
  for (EdgeId e : psi.active_edges)
    for (VertexId v : inst.edge(e).vertices) {
      LpModel::Row row;
      row.id = {ConstraintRef::SupportRow, e, v};
      row.equality = false;
      row.rhs = 0;
      row.coeffs.emplace_back(h_index.at({e, v}), Rat(1));
      row.coeffs.emplace_back(v - 1, Rat(-1));
      model.rows.push_back(std::move(row));
    }
  return model;
}

namespace {

// Bounded-variable primal simplex with a dense B^-1 A tableau. Columns are
// the model variables, then one slack per inequality row, then one
// artificial per row that needed one to seed a feasible basis.
class Simplex {
public:
  explicit Simplex(const LpModel& model) : model_(model) { build(); }

  void solve() {
    run_phase();                      // phase 1: drive artificials to zero
    if (infeasibility() != 0) throw LpInfeasibleError("empty feasible region");
    sweep_basic_artificials();
    for (size_t j = 0; j < cost_.size(); ++j) {
      if (is_artificial(j)) hi_[j] = Rat(0); // pin
      cost_[j] = j < model_.vars.size() ? model_.vars[j].cost : Rat(0);
    }
    run_phase();                      // phase 2
  }

  Rat value_of(size_t j) const { return where_[j] >= 0 ? beta_[where_[j]] : value_[j]; }

  // y_i = c_B^T B^-1 e_i, read off the slack or artificial column of row i.
  std::vector<Rat> row_duals() const {
    std::vector<Rat> y(nrows_);
    for (int i = 0; i < nrows_; ++i) {
      size_t col;
      Rat sign(1);
      if (slack_col_[i] >= 0) {
        col = static_cast<size_t>(slack_col_[i]);
      } else {
        col = static_cast<size_t>(artif_col_[i]);
        sign = artif_sign_[i];
      }
      Rat acc(0);
      for (int r = 0; r < nrows_; ++r) acc += cost_[basic_[r]] * tab_[r][col];
      y[i] = sign * acc;
    }
    return y;
  }

private:
  static constexpr int kAtLower = -1;
  static constexpr int kAtUpper = -2;

  const LpModel& model_;
  int nrows_ = 0;
  std::vector<std::vector<Rat>> tab_; // nrows x ncols, equals B^-1 A
  std::vector<Rat> beta_;             // value of the basic variable per row
  std::vector<int> basic_;            // row -> column
  std::vector<int> where_;            // column -> row when basic, else kAtLower/kAtUpper
  std::vector<Rat> lo_, value_, cost_;
  std::vector<std::optional<Rat>> hi_;
  std::vector<int> slack_col_, artif_col_;
  std::vector<Rat> artif_sign_;
  size_t first_artif_ = 0;

  bool is_artificial(size_t j) const { return j >= first_artif_; }

  Rat infeasibility() const {
    Rat acc(0);
    for (size_t j = first_artif_; j < cost_.size(); ++j) acc += value_of(j);
    return acc;
  }

  void add_col(Rat lo, std::optional<Rat> hi, Rat cost) {
    lo_.push_back(lo);
    value_.push_back(lo_.back());
    hi_.push_back(std::move(hi));
    cost_.push_back(std::move(cost));
    where_.push_back(kAtLower);
  }

  void build() {
    nrows_ = static_cast<int>(model_.rows.size());
    for (const auto& v : model_.vars) add_col(v.lower, v.upper, Rat(0));

    // Structurals start at their lower bounds; residuals decide the basis.
    std::vector<Rat> residual(nrows_);
    for (int i = 0; i < nrows_; ++i) {
      residual[i] = model_.rows[i].rhs;
      for (const auto& [j, a] : model_.rows[i].coeffs) residual[i] -= a * value_[j];
    }

    slack_col_.assign(nrows_, -1);
    for (int i = 0; i < nrows_; ++i)
      if (!model_.rows[i].equality) {
        slack_col_[i] = static_cast<int>(lo_.size());
        add_col(Rat(0), std::nullopt, Rat(0));
      }
    first_artif_ = lo_.size();
    artif_col_.assign(nrows_, -1);
    artif_sign_.assign(nrows_, Rat(1));
    for (int i = 0; i < nrows_; ++i)
      if (model_.rows[i].equality || residual[i] < 0) {
        artif_col_[i] = static_cast<int>(lo_.size());
        artif_sign_[i] = residual[i] < 0 ? Rat(-1) : Rat(1);
        add_col(Rat(0), std::nullopt, Rat(1)); // phase-1 cost
      }

    size_t ncols = lo_.size();
    tab_.assign(nrows_, std::vector<Rat>(ncols, Rat(0)));
    beta_.assign(nrows_, Rat(0));
    basic_.assign(nrows_, -1);
    for (int i = 0; i < nrows_; ++i) {
      // Basis column is the slack (residual >= 0) or the artificial; either
      // way B is diagonal, so B^-1 A just rescales rows by the basis sign.
      Rat sign(1);
      int bcol;
      if (!model_.rows[i].equality && residual[i] >= 0) {
        bcol = slack_col_[i];
        beta_[i] = residual[i];
      } else {
        bcol = artif_col_[i];
        sign = artif_sign_[i];
        beta_[i] = abs(residual[i]);
      }
      basic_[i] = bcol;
      where_[bcol] = i;
      for (const auto& [j, a] : model_.rows[i].coeffs) tab_[i][j] = sign * a;
      if (slack_col_[i] >= 0) tab_[i][slack_col_[i]] = sign;
      if (artif_col_[i] >= 0) tab_[i][artif_col_[i]] = sign * artif_sign_[i];
    }
  }

  Rat reduced_cost(size_t j) const {
    Rat d = cost_[j];
    for (int i = 0; i < nrows_; ++i)
      if (cost_[basic_[i]] != 0) d -= cost_[basic_[i]] * tab_[i][j];
    return d;
  }

  void run_phase() {
    for (;;) {
      // Bland: first eligible column in index order.
      int enter = -1;
      int dir = 0;
      for (size_t j = 0; j < cost_.size(); ++j) {
        if (where_[j] >= 0) continue;
        if (hi_[j] && lo_[j] == *hi_[j]) continue;
        Rat d = reduced_cost(j);
        if (where_[j] == kAtLower && d < 0) {
          enter = static_cast<int>(j);
          dir = 1;
          break;
        }
        if (where_[j] == kAtUpper && d > 0) {
          enter = static_cast<int>(j);
          dir = -1;
          break;
        }
      }
      if (enter < 0) return;

      // Largest step before the entering variable or some basic variable
      // hits a bound.
      std::optional<Rat> tmax;
      if (hi_[enter]) tmax = *hi_[enter] - lo_[enter];
      int leave = -1;
      for (int i = 0; i < nrows_; ++i) {
        const Rat& coef = tab_[i][enter];
        if (coef == 0) continue;
        Rat delta = -dir * coef; // beta_[i] moves by delta per unit step
        int b = basic_[i];
        std::optional<Rat> bound;
        if (delta > 0) {
          if (hi_[b]) bound = (*hi_[b] - beta_[i]) / delta;
        } else {
          bound = (beta_[i] - lo_[b]) / -delta;
        }
        if (!bound) continue;
        // Ties go to the smallest basic index (Bland); a tie with the
        // entering variable's own range stays a bound flip.
        if (!tmax || *bound < *tmax || (*bound == *tmax && leave >= 0 && b < basic_[leave])) {
          leave = i;
          tmax = *bound;
        }
      }
      if (!tmax) throw InternalInvariantError("unbounded improving direction");

      const Rat t = *tmax;
      for (int i = 0; i < nrows_; ++i)
        if (tab_[i][enter] != 0) beta_[i] -= dir * t * tab_[i][enter];
      Rat enter_val = value_[enter] + dir * t;

      if (leave < 0) { // bound flip
        where_[enter] = where_[enter] == kAtLower ? kAtUpper : kAtLower;
        value_[enter] = enter_val;
        continue;
      }

      int old = basic_[leave];
      Rat delta_leave = -dir * tab_[leave][enter];
      where_[old] = delta_leave > 0 ? kAtUpper : kAtLower;
      value_[old] = delta_leave > 0 ? *hi_[old] : lo_[old];
      pivot(leave, enter);
      beta_[leave] = enter_val;
    }
  }

  void pivot(int row, int col) {
    basic_[row] = col;
    where_[col] = row;
    const Rat piv = tab_[row][col];
    for (Rat& a : tab_[row]) a /= piv;
    for (int i = 0; i < nrows_; ++i) {
      if (i == row || tab_[i][col] == 0) continue;
      const Rat f = tab_[i][col];
      for (size_t j = 0; j < tab_[i].size(); ++j)
        if (tab_[row][j] != 0) tab_[i][j] -= f * tab_[row][j];
    }
  }

  // Degenerate pivots replacing zero-valued basic artificials with real
  // columns where the row allows it.
  void sweep_basic_artificials() {
    for (int i = 0; i < nrows_; ++i) {
      if (!is_artificial(basic_[i])) continue;
      for (size_t j = 0; j < first_artif_; ++j) {
        if (where_[j] >= 0 || tab_[i][j] == 0) continue;
        if (hi_[j] && lo_[j] == *hi_[j]) continue;
        int old = basic_[i];
        where_[old] = kAtLower;
        value_[old] = 0;
        Rat keep = value_[j];
        pivot(i, static_cast<int>(j));
        beta_[i] = keep;
        break;
      }
    }
  }
};

std::vector<Rat> point_values(const FractionalPoint& p, const LpModel& model) {
  std::vector<Rat> z;
  z.reserve(model.vars.size());
  for (const auto& var : model.vars) {
    if (var.ref.is_x) {
      auto it = p.x.find(var.ref.vertex);
      if (it == p.x.end()) throw PreconditionError("point is missing x for vertex " +
                                                   std::to_string(var.ref.vertex));
      z.push_back(it->second);
    } else {
      auto it = p.h.find({var.ref.edge, var.ref.vertex});
      if (it == p.h.end())
        throw PreconditionError("point is missing h for edge " + std::to_string(var.ref.edge) +
                                ", vertex " + std::to_string(var.ref.vertex));
      z.push_back(it->second);
    }
  }
  return z;
}

} // namespace

FractionalPoint solve_basic_optimal(const LpModel& model) {
  Simplex simplex(model);
  simplex.solve();

  FractionalPoint p;
  p.objective = 0;
  for (size_t j = 0; j < model.vars.size(); ++j) {
    Rat v = simplex.value_of(j);
    const VarRef& ref = model.vars[j].ref;
    if (ref.is_x) p.x[ref.vertex] = v;
    else p.h[{ref.edge, ref.vertex}] = v;
    p.objective += model.vars[j].cost * v;
  }

  p.dual.row_duals = simplex.row_duals();
  p.dual.reduced_costs.resize(model.vars.size());
  p.dual.dual_objective = 0;
  for (size_t i = 0; i < model.rows.size(); ++i)
    p.dual.dual_objective += p.dual.row_duals[i] * model.rows[i].rhs;
  std::vector<Rat> yta(model.vars.size(), Rat(0));
  for (size_t i = 0; i < model.rows.size(); ++i)
    for (const auto& [j, a] : model.rows[i].coeffs) yta[j] += p.dual.row_duals[i] * a;
  for (size_t j = 0; j < model.vars.size(); ++j) {
    Rat d = model.vars[j].cost - yta[j];
    p.dual.reduced_costs[j] = d;
    if (d > 0) p.dual.dual_objective += d * model.vars[j].lower;
    else if (d < 0) {
      if (!model.vars[j].upper)
        throw InternalInvariantError("negative reduced cost on an unbounded column at optimum");
      p.dual.dual_objective += d * *model.vars[j].upper;
    }
  }

  p.tight = tight_constraints(p, model);
  if (!point_satisfies(p, model) || !check_dual_certificate(p, model))
    throw InternalInvariantError("solver output failed its own certificate");
  return p;
}

bool point_satisfies(const FractionalPoint& p, const LpModel& model) {
  std::vector<Rat> z;
  try {
    z = point_values(p, model);
  } catch (const PreconditionError&) {
    return false;
  }
  for (size_t j = 0; j < model.vars.size(); ++j) {
    if (z[j] < model.vars[j].lower) return false;
    if (model.vars[j].upper && z[j] > *model.vars[j].upper) return false;
  }
  for (const auto& row : model.rows) {
    Rat lhs(0);
    for (const auto& [j, a] : row.coeffs) lhs += a * z[j];
    if (row.equality ? lhs != row.rhs : lhs > row.rhs) return false;
  }
  return true;
}

std::vector<ConstraintRef> tight_constraints(const FractionalPoint& p, const LpModel& model) {
  std::vector<Rat> z = point_values(p, model);
  std::vector<ConstraintRef> tight;
  for (const auto& row : model.rows) {
    Rat lhs(0);
    for (const auto& [j, a] : row.coeffs) lhs += a * z[j];
    if (lhs == row.rhs) tight.push_back(row.id);
  }
  for (size_t j = 0; j < model.vars.size(); ++j) {
    const auto& var = model.vars[j];
    if (var.ref.is_x) {
      if (z[j] == var.lower) tight.push_back({ConstraintRef::XAtLower, 0, var.ref.vertex});
      if (var.upper && z[j] == *var.upper)
        tight.push_back({ConstraintRef::XAtUpper, 0, var.ref.vertex});
    } else if (z[j] == 0) {
      tight.push_back({ConstraintRef::HAtZero, var.ref.edge, var.ref.vertex});
    }
  }
  std::sort(tight.begin(), tight.end());
  return tight;
}

bool check_dual_certificate(const FractionalPoint& p, const LpModel& model) {
  const DualCertificate& dc = p.dual;
  if (dc.row_duals.size() != model.rows.size()) return false;
  if (dc.reduced_costs.size() != model.vars.size()) return false;
  std::vector<Rat> z = point_values(p, model);

  Rat primal(0);
  for (size_t j = 0; j < model.vars.size(); ++j) primal += model.vars[j].cost * z[j];
  if (primal != p.objective) return false;

  Rat dual_obj(0);
  for (size_t i = 0; i < model.rows.size(); ++i) {
    const auto& row = model.rows[i];
    const Rat& y = dc.row_duals[i];
    if (!row.equality && y > 0) return false;
    Rat lhs(0);
    for (const auto& [j, a] : row.coeffs) lhs += a * z[j];
    if (y != 0 && lhs != row.rhs) return false; // complementary slackness
    dual_obj += y * row.rhs;
  }

  std::vector<Rat> yta(model.vars.size(), Rat(0));
  for (size_t i = 0; i < model.rows.size(); ++i)
    for (const auto& [j, a] : model.rows[i].coeffs) yta[j] += dc.row_duals[i] * a;
  for (size_t j = 0; j < model.vars.size(); ++j) {
    const auto& var = model.vars[j];
    Rat d = var.cost - yta[j];
    if (d != dc.reduced_costs[j]) return false;
    if (d > 0) {
      if (z[j] != var.lower) return false;
      dual_obj += d * var.lower;
    } else if (d < 0) {
      if (!var.upper || z[j] != *var.upper) return false;
      dual_obj += d * *var.upper;
    }
  }
  return dual_obj == dc.dual_objective && dual_obj == p.objective;
}

RankReport verify_extremality(const FractionalPoint& p, const LpModel& model) {
  if (!point_satisfies(p, model))
    throw PreconditionError("point is not feasible for the model");
  std::vector<Rat> z = point_values(p, model);
  size_t nvars = model.vars.size();

  RatMatrix grad;
  for (const auto& row : model.rows) {
    Rat lhs(0);
    for (const auto& [j, a] : row.coeffs) lhs += a * z[j];
    if (lhs != row.rhs) continue;
    std::vector<Rat> g(nvars, Rat(0));
    for (const auto& [j, a] : row.coeffs) g[j] = a;
    grad.push_back(std::move(g));
  }
  for (size_t j = 0; j < nvars; ++j) {
    const auto& var = model.vars[j];
    bool at_lo = z[j] == var.lower;
    bool at_hi = var.upper && z[j] == *var.upper;
    if (at_lo || at_hi) {
      std::vector<Rat> g(nvars, Rat(0));
      g[j] = 1;
      grad.push_back(std::move(g));
    }
  }

  RankReport report;
  report.variable_count = static_cast<long>(nvars);
  report.rank = matrix_rank(grad);
  report.pass = report.rank == report.variable_count;
  return report;
}

std::string render_lp(const LpModel& model) {
  auto var_name = [&](int j) {
    const VarRef& r = model.vars[j].ref;
    std::ostringstream s;
    if (r.is_x) s << "x[" << r.vertex << "]";
    else s << "h[" << r.edge << "," << r.vertex << "]";
    return s.str();
  };
  std::ostringstream out;
  out << "minimize\n ";
  bool first = true;
  for (size_t j = 0; j < model.vars.size(); ++j) {
    if (model.vars[j].cost == 0) continue;
    out << (first ? " " : " + ");
    if (model.vars[j].cost != 1) out << rat_string(model.vars[j].cost) << ' ';
    out << var_name(static_cast<int>(j));
    first = false;
  }
  out << "\nsubject to\n";
  for (const auto& row : model.rows) {
    switch (row.id.kind) {
      case ConstraintRef::EdgeRow: out << " edge[" << row.id.edge << "]:"; break;
      case ConstraintRef::CapacityRow: out << " cap[" << row.id.vertex << "]:"; break;
      default: out << " sup[" << row.id.edge << "," << row.id.vertex << "]:"; break;
    }
    for (const auto& [j, a] : row.coeffs) {
      if (a < 0) out << " - ";
      else out << " + ";
      Rat mag = abs(a);
      if (mag != 1) out << rat_string(mag) << ' ';
      out << var_name(j);
    }
    if (row.coeffs.empty()) out << " 0";
    out << (row.equality ? " = " : " <= ") << rat_string(row.rhs) << '\n';
  }
  out << "bounds\n";
  for (size_t j = 0; j < model.vars.size(); ++j) {
    out << ' ' << rat_string(model.vars[j].lower) << " <= " << var_name(static_cast<int>(j));
    if (model.vars[j].upper) out << " <= " << rat_string(*model.vars[j].upper);
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

} // namespace capvc
