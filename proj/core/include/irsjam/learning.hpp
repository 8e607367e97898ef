#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irsjam/common.hpp"

namespace irsjam {

/// Minimal episodic environment surface the tabular learners train against.
/// States are discrete indices; state_features() exposes the normalized
/// continuous features the fuzzy aggregation layer works on.
class LearningEnv {
 public:
  virtual ~LearningEnv() = default;
  virtual int state_count() const = 0;
  virtual int action_count() const = 0;
  virtual int feature_dim() const = 0;
  virtual int state_index() const = 0;
  virtual std::vector<double> state_features() const = 0;
  /// Executes the action and returns the immediate reward.
  virtual double step(int action) = 0;
  virtual void begin_episode() {}
};

enum class Variant { QOnly, PhcFixed, WolfPhc, FuzzyWolfPhc };

std::string variant_name(Variant v);

struct LearnerConfig {
  double alpha = 0.5;
  double gamma = 0.9;
  double epsilon = 0.1;
  double xi_win = 0.01;
  double xi_loss = 0.04;
  double xi_fixed = 0.01;  // PhcFixed step size
  Variant variant = Variant::FuzzyWolfPhc;
  int fuzzy_states = 8;            // L
  double fuzzy_width_scale = 2.0;  // triangular half-width, in units of center spacing
  bool select_by_fsa_score = false;

  void validate() const;
};

/// Fuzzy aggregation tables: L fuzzy states with centers in normalized
/// feature space, and per-(fuzzy state, action) value and policy-weight
/// tables.
struct FuzzyTables {
  std::size_t n_fuzzy = 0;
  std::size_t n_actions = 0;
  std::vector<std::vector<double>> centers;  // L x D
  std::vector<double> widths;                // D triangular half-widths
  std::vector<double> q;                     // L * A, row-major
  std::vector<double> pi;                    // L * A, row-major

  /// Centers spread uniformly along the diagonal of [0,1]^dim, widths
  /// width_scale / L per dimension; q zero, pi uniform 1/A.
  static FuzzyTables uniform_grid(std::size_t l, std::size_t dim, std::size_t actions,
                                  double width_scale);

  std::span<double> q_row(std::size_t l) { return {q.data() + l * n_actions, n_actions}; }
  std::span<const double> q_row(std::size_t l) const {
    return {q.data() + l * n_actions, n_actions};
  }
  std::span<double> pi_row(std::size_t l) { return {pi.data() + l * n_actions, n_actions}; }
  std::span<const double> pi_row(std::size_t l) const {
    return {pi.data() + l * n_actions, n_actions};
  }
};

// ---- Tabular primitives -------------------------------------------------

/// Greedy with probability 1-epsilon (ties broken uniformly), otherwise
/// uniform over the remaining actions.
int egreedy_select(std::span<const double> values, double epsilon, Rng& rng);

/// Lowest-index argmax (the deterministic greedy used inside updates).
int argmax_first(std::span<const double> values);

/// One-step TD update: (1-alpha)*q + alpha*(r + gamma*max_q_next).
double q_update(double q_sa, double r, double max_q_next, double alpha, double gamma);

/// Moves xi of probability mass toward the greedy action and takes
/// xi/(|A|-1) from each other action; negatives clamp to zero and the
/// greedy entry absorbs the residual so the row stays on the simplex.
void phc_update(std::span<double> pi_row, std::span<const double> q_row, double xi);

/// Win-or-learn-fast rate: xi_win iff the current mixed policy outscores the
/// average policy on the value row (strict; equality loses).
double wolf_rate(std::span<const double> pi_row, std::span<const double> pi_avg_row,
                 std::span<const double> q_row, double xi_win, double xi_loss);

/// Running mean toward the current policy: pi_avg += (pi - pi_avg) / count.
void avg_policy_update(std::span<double> pi_avg_row, std::span<const double> pi_row,
                       std::int64_t count);

// ---- Fuzzy aggregation --------------------------------------------------

/// Per-dimension triangular memberships around each center, combined by
/// product and normalized to sum 1. If the features fall outside every
/// support, the nearest center gets membership 1.
std::vector<double> fuzzy_membership(std::span<const double> features, const FuzzyTables& t);

/// Aggregate value of one action: sum_l psi[l] * q[l][a].
double fuzzy_q(std::span<const double> psi, const FuzzyTables& t, int action);

/// Aggregate values of every action.
std::vector<double> fuzzy_q_row(std::span<const double> psi, const FuzzyTables& t);

/// Preference score sum_l pi[l][a] * q[l][a] * psi[l]; logged/analyzed, not
/// the default action sampler.
double fsa_policy_score(std::span<const double> psi, const FuzzyTables& t, int action);

/// Shifts each fuzzy policy row toward the greedy action with step
/// xi * psi_l / sum(psi^2), so the membership-weighted aggregate over fuzzy
/// states moves by exactly +xi on the greedy action (up to clamping).
void fsa_policy_update(FuzzyTables& t, std::span<const double> psi, int greedy_action, double xi);

/// Distributes the TD correction across fuzzy states proportionally to
/// membership so the recomputed aggregate value hits the TD target exactly.
void fuzzy_q_update(FuzzyTables& t, std::span<const double> psi, int action, double r,
                    double max_fq_next, double alpha, double gamma);

// ---- Training driver ----------------------------------------------------

/// Everything one training run learns. Per-state tables are only allocated
/// for the variants that use them.
struct LearnerBundle {
  LearnerConfig cfg;
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  std::vector<double> q;              // |S| * |A| (non-fuzzy value table)
  std::vector<double> pi;             // |S| * |A| mixed policy
  std::vector<double> pi_avg;         // |S| * |A| average policy
  std::vector<std::int64_t> counts;   // per-state visit counts
  FuzzyTables fuzzy;
  double xi = 0.0;  // current WoLF step size

  LearnerBundle() = default;
  LearnerBundle(const LearnerConfig& cfg, std::size_t n_states, std::size_t n_actions,
                std::size_t feature_dim);

  bool uses_policy() const { return cfg.variant != Variant::QOnly; }
  bool uses_fuzzy() const { return cfg.variant == Variant::FuzzyWolfPhc; }
  std::span<double> q_row(std::size_t s) { return {q.data() + s * n_actions, n_actions}; }
  std::span<const double> q_row(std::size_t s) const {
    return {q.data() + s * n_actions, n_actions};
  }
  std::span<double> pi_row(std::size_t s) { return {pi.data() + s * n_actions, n_actions}; }
  std::span<double> pi_avg_row(std::size_t s) {
    return {pi_avg.data() + s * n_actions, n_actions};
  }
};

struct TrainCounters {
  std::int64_t wolf_win = 0;
  std::int64_t wolf_loss = 0;
  std::int64_t policy_equal = 0;            // steps where pi == pi_avg at rate selection
  std::int64_t policy_equal_loss = 0;       // of those, steps that chose xi_loss
};

struct TrainResult {
  LearnerBundle bundle;
  std::vector<double> episode_mean_reward;
  TrainCounters counters;
};

/// Runs the episodic training loop: observe, epsilon-greedy select on the
/// (fuzzy or plain) value table, step, then the policy / rate / average /
/// fuzzy updates in order. Variants disable the layers they do not use.
TrainResult train(LearningEnv& env, const LearnerConfig& cfg, int episodes, int horizon,
                  Rng& rng);

}  // namespace irsjam
