#include "hegsim/stability/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hegsim/core/csv.hpp"

namespace hegsim::stability {

namespace {

void check_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must be in [0,1]");
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

void validate(const StabilityParams& p) {
  check_positive(p.u_c, "u_c");
  check_positive(p.u_w, "u_w");
  check_probability(p.p_doom, "p_doom");
  check_probability(p.p_w_given_d, "p_w_given_d");
}

double defector_payoff(const StabilityParams& p) {
  validate(p);
  return p.u_w * (1.0 - p.p_doom) * p.p_w_given_d;
}

double second_mover_payoff(const StabilityParams& p) {
  validate(p);
  return p.u_w * (1.0 - p.p_doom) * (1.0 - p.p_w_given_d);
}

bool is_stable(const StabilityParams& p) {
  return defector_payoff(p) < p.u_c;
}

ThresholdResult pwd_threshold(double u_w, double p_doom) {
  check_positive(u_w, "u_w");
  check_probability(p_doom, "p_doom");
  const double denom = u_w * (1.0 - p_doom);
  if (denom <= 0.0) return ThresholdResult{true, 1.0};  // certain doom
  const double bound = 1.0 / denom;
  if (bound >= 1.0) return ThresholdResult{true, 1.0};
  return ThresholdResult{false, bound};
}

double min_stable_pdoom(double u_w, double p_w_given_d) {
  check_positive(u_w, "u_w");
  check_positive(p_w_given_d, "p_w_given_d");
  check_probability(p_w_given_d, "p_w_given_d");
  return std::max(0.0, 1.0 - 1.0 / (u_w * p_w_given_d));
}

std::vector<std::pair<double, double>> boundary_curve(
    double p_w_given_d, const std::vector<double>& u_w_grid) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(u_w_grid.size());
  for (double u_w : u_w_grid) {
    curve.emplace_back(u_w, min_stable_pdoom(u_w, p_w_given_d));
  }
  return curve;
}

PayoffMatrix payoff_matrix(const StabilityParams& p,
                           double simultaneous_win_prob) {
  validate(p);
  check_probability(simultaneous_win_prob, "simultaneous_win_prob");
  const double survive = p.u_w * (1.0 - p.p_doom);
  PayoffMatrix m;
  m.cc = {p.u_c, p.u_c};
  m.dc = {survive * p.p_w_given_d, survive * (1.0 - p.p_w_given_d)};
  m.cd = {m.dc.col, m.dc.row};
  m.dd = {survive * simultaneous_win_prob,
          survive * (1.0 - simultaneous_win_prob)};
  return m;
}

GameClass classify_game(const PayoffMatrix& m) {
  const bool defect_branch_degenerate =
      m.dc.row == 0.0 && m.dc.col == 0.0 && m.cd.row == 0.0 &&
      m.cd.col == 0.0 && m.dd.row == 0.0 && m.dd.col == 0.0;
  const bool defect_dominates_row = m.dc.row > m.cc.row && m.dd.row > m.cd.row;
  const bool defect_dominates_col = m.cd.col > m.cc.col && m.dd.col > m.dc.col;
  if (defect_dominates_row && defect_dominates_col) {
    return GameClass::DefectionDominant;
  }
  if (defect_branch_degenerate) return GameClass::Other;
  const bool cc_nash = m.cc.row >= m.dc.row && m.cc.col >= m.cd.col;
  const bool dd_nash = m.dd.row >= m.cd.row && m.dd.col >= m.dc.col;
  if (cc_nash && dd_nash) return GameClass::StagHunt;
  return GameClass::Other;
}

std::string to_string(GameClass c) {
  switch (c) {
    case GameClass::StagHunt: return "stag_hunt";
    case GameClass::DefectionDominant: return "defection_dominant";
    case GameClass::Other: return "other";
  }
  return "unknown";
}

bool entry_gate(double leader_pwd, const StabilityParams& p, double u_c_offer) {
  return minimal_concession(leader_pwd, p) < u_c_offer;
}

double minimal_concession(double leader_pwd, const StabilityParams& p) {
  check_probability(leader_pwd, "leader_pwd");
  check_positive(p.u_w, "u_w");
  check_probability(p.p_doom, "p_doom");
  return p.u_w * (1.0 - p.p_doom) * leader_pwd;
}

double pwd_from_lead(double lead_ticks, double race_ticks, double sharpness) {
  if (!(sharpness > 0.0)) {
    throw std::invalid_argument("sharpness must be positive");
  }
  if (!(race_ticks > 0.0) || lead_ticks < 0.0 || lead_ticks > race_ticks) {
    throw std::invalid_argument("need 0 <= lead_ticks <= race_ticks");
  }
  const double fraction = lead_ticks / race_ticks;
  return 1.0 / (1.0 + std::exp(-sharpness * fraction));
}

std::vector<SweepRow> sweep(const std::vector<double>& u_w_grid,
                            const std::vector<double>& p_doom_grid,
                            const std::vector<double>& p_w_given_d_grid) {
  std::vector<SweepRow> rows;
  rows.reserve(u_w_grid.size() * p_doom_grid.size() * p_w_given_d_grid.size());
  for (double u_w : u_w_grid) {
    for (double p_doom : p_doom_grid) {
      for (double pwd : p_w_given_d_grid) {
        StabilityParams p{1.0, u_w, p_doom, pwd};
        SweepRow row;
        row.u_w = u_w;
        row.p_doom = p_doom;
        row.p_w_given_d = pwd;
        row.defector = defector_payoff(p);
        row.stable = is_stable(p);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "u_w,p_doom,p_w_given_d,defector_payoff,stable\n";
  for (const auto& r : rows) {
    out += csv_double(r.u_w);
    out += ',';
    out += csv_double(r.p_doom);
    out += ',';
    out += csv_double(r.p_w_given_d);
    out += ',';
    out += csv_double(r.defector);
    out += ',';
    out += r.stable ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string boundary_csv(const std::vector<std::pair<double, double>>& curve) {
  std::string out = "u_w,p_doom\n";
  for (const auto& [u_w, p_doom] : curve) {
    out += csv_double(u_w);
    out += ',';
    out += csv_double(p_doom);
    out += '\n';
  }
  return out;
}

}  // namespace hegsim::stability
