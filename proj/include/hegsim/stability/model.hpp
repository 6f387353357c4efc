#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hegsim::stability {

/// Two-player race model. u_c is the utility of mutual cooperation (the
/// usual normalization is 1, but any positive value works, which is what
/// concession analysis adjusts); u_w the utility of winning after a
/// defection, relative to u_c's scale; losing is worth 0. p_doom is the
/// chance an open race destroys both players; p_w_given_d the chance the
/// first defector wins the race it starts.
struct StabilityParams {
  double u_c = 1.0;
  double u_w = 1.0;
  double p_doom = 0.0;
  double p_w_given_d = 0.5;
};

/// Throws std::invalid_argument when u_c or u_w is not positive or a
/// probability leaves [0,1]. All operations below validate on entry.
void validate(const StabilityParams& p);

/// Expected utility of defecting first: u_w * (1 - p_doom) * p_w_given_d.
double defector_payoff(const StabilityParams& p);

/// Expected utility of being defected on: u_w * (1 - p_doom) *
/// (1 - p_w_given_d). Sums with defector_payoff to u_w * (1 - p_doom).
double second_mover_payoff(const StabilityParams& p);

/// Mutual cooperation holds exactly when defecting pays strictly less than
/// cooperating; boundary equality counts as unstable.
bool is_stable(const StabilityParams& p);

/// Largest win chance a defector may have before the agreement breaks:
/// 1 / (u_w * (1 - p_doom)). When that bound reaches 1 no win chance can
/// destabilize, reported as unconditional.
struct ThresholdResult {
  bool unconditional = false;
  double value = 1.0;  // meaningful only when !unconditional
};

ThresholdResult pwd_threshold(double u_w, double p_doom);

/// Least p_doom at which cooperation becomes stable for the given win
/// utility and win chance: max(0, 1 - 1/(u_w * p_w_given_d)). The value is
/// the infimum; stability is strict above it.
double min_stable_pdoom(double u_w, double p_w_given_d);

/// Stability frontier at fixed p_w_given_d: for each u_w the least viable
/// p_doom. Points strictly above the curve are stable, strictly below
/// unstable.
std::vector<std::pair<double, double>> boundary_curve(
    double p_w_given_d, const std::vector<double>& u_w_grid);

struct PayoffPair {
  double row = 0.0;
  double col = 0.0;
};

/// Entries indexed by (row action, column action); c = cooperate,
/// d = defect. dc means the row player defected first.
struct PayoffMatrix {
  PayoffPair cc;
  PayoffPair cd;
  PayoffPair dc;
  PayoffPair dd;
};

/// Builds the 2x2 game. Simultaneous defection is a coin flip weighted by
/// simultaneous_win_prob for the row player (0.5 unless modeling an
/// asymmetry), with no second-mover advantage for either.
PayoffMatrix payoff_matrix(const StabilityParams& p,
                           double simultaneous_win_prob = 0.5);

enum class GameClass { StagHunt, DefectionDominant, Other };

/// Classifies with weak-inequality Nash membership: StagHunt when both
/// mutual profiles are equilibria, DefectionDominant when defection
/// strictly dominates for both players. A degenerate game whose entire
/// defect branch pays zero (certain doom or worthless wins) is Other:
/// cooperation weakly dominates and the defect equilibrium is vacuous.
GameClass classify_game(const PayoffMatrix& m);

std::string to_string(GameClass c);

/// Whether a race leader whose win chance is leader_pwd still prefers a
/// cooperation payout of u_c_offer over defecting.
bool entry_gate(double leader_pwd, const StabilityParams& p, double u_c_offer);

/// Infimum cooperation payout that makes entry incentive-compatible for
/// that leader; offers strictly above it pass entry_gate.
double minimal_concession(double leader_pwd, const StabilityParams& p);

/// Maps a detection-to-response lead (as a fraction of the race length)
/// to a first-mover win chance: logistic 1/(1 + exp(-sharpness * lead /
/// race)). No lead means a fair race (0.5); a full-length lead saturates
/// toward 1 (>= 0.99 once sharpness >= 5).
double pwd_from_lead(double lead_ticks, double race_ticks, double sharpness);

struct SweepRow {
  double u_w = 0.0;
  double p_doom = 0.0;
  double p_w_given_d = 0.0;
  double defector = 0.0;
  bool stable = false;
};

/// Cartesian sweep over the three parameter grids at u_c = 1.
std::vector<SweepRow> sweep(const std::vector<double>& u_w_grid,
                            const std::vector<double>& p_doom_grid,
                            const std::vector<double>& p_w_given_d_grid);

/// CSV forms: sweep rows as
/// u_w,p_doom,p_w_given_d,defector_payoff,stable and boundary curves as
/// u_w,p_doom.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string boundary_csv(const std::vector<std::pair<double, double>>& curve);

}  // namespace hegsim::stability
