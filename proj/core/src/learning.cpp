#include "irsjam/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsjam {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::QOnly: return "q_only";
    case Variant::PhcFixed: return "phc_fixed";
    case Variant::WolfPhc: return "wolf_phc";
    case Variant::FuzzyWolfPhc: return "fuzzy_wolf_phc";
  }
  throw std::logic_error("unknown variant");
}

void LearnerConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0,1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must be in [0,1]");
  if (!(xi_loss > xi_win)) throw std::invalid_argument("xi_loss must exceed xi_win");
  if (!(xi_win > 0.0) || !(xi_fixed > 0.0))
    throw std::invalid_argument("policy step sizes must be positive");
  if (fuzzy_states < 1) throw std::invalid_argument("need at least one fuzzy state");
  if (!(fuzzy_width_scale > 0.0)) throw std::invalid_argument("fuzzy width must be positive");
}

FuzzyTables FuzzyTables::uniform_grid(std::size_t l, std::size_t dim, std::size_t actions,
                                      double width_scale) {
  if (l == 0 || dim == 0 || actions == 0)
    throw std::invalid_argument("fuzzy table dimensions must be positive");
  FuzzyTables t;
  t.n_fuzzy = l;
  t.n_actions = actions;
  t.centers.assign(l, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < l; ++i) {
    const double c = (static_cast<double>(i) + 0.5) / static_cast<double>(l);
    std::fill(t.centers[i].begin(), t.centers[i].end(), c);
  }
  t.widths.assign(dim, width_scale / static_cast<double>(l));
  t.q.assign(l * actions, 0.0);
  t.pi.assign(l * actions, 1.0 / static_cast<double>(actions));
  return t;
}

int argmax_first(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty value row");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

int egreedy_select(std::span<const double> values, double epsilon, Rng& rng) {
  const int n = static_cast<int>(values.size());
  if (n == 0) throw std::invalid_argument("empty value row");
  if (n == 1) return 0;

  // Greedy action, ties broken uniformly at random among the maxima.
  const double vmax = *std::max_element(values.begin(), values.end());
  int n_max = 0;
  for (double v : values) n_max += (v == vmax);
  int greedy;
  if (n_max == 1) {
    greedy = argmax_first(values);
  } else {
    std::uniform_int_distribution<int> pick(0, n_max - 1);
    int target = pick(rng);
    greedy = -1;
    for (int i = 0; i < n; ++i) {
      if (values[i] == vmax && target-- == 0) {
        greedy = i;
        break;
      }
    }
  }

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (u01(rng) >= epsilon) return greedy;
  std::uniform_int_distribution<int> pick(0, n - 2);
  int idx = pick(rng);
  if (idx >= greedy) ++idx;  // uniform over the non-greedy actions
  return idx;
}

double q_update(double q_sa, double r, double max_q_next, double alpha, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  return (1.0 - alpha) * q_sa + alpha * (r + gamma * max_q_next);
}

namespace {

/// Shared PHC row move: +step on the greedy entry, -step/(n-1) on the rest,
/// clamp at zero, greedy entry absorbs the residual mass.
void phc_row_move(std::span<double> pi_row, int greedy, double step) {
  const int n = static_cast<int>(pi_row.size());
  if (n == 1) {
    pi_row[0] = 1.0;
    return;
  }
  const double dec = step / static_cast<double>(n - 1);
  double others = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == greedy) continue;
    pi_row[i] = std::max(0.0, pi_row[i] - dec);
    others += pi_row[i];
  }
  pi_row[greedy] = 1.0 - others;
}

}  // namespace

void phc_update(std::span<double> pi_row, std::span<const double> q_row, double xi) {
  if (pi_row.size() != q_row.size())
    throw std::invalid_argument("policy and value rows differ in size");
  phc_row_move(pi_row, argmax_first(q_row), xi);
}

double wolf_rate(std::span<const double> pi_row, std::span<const double> pi_avg_row,
                 std::span<const double> q_row, double xi_win, double xi_loss) {
  if (pi_row.size() != q_row.size() || pi_avg_row.size() != q_row.size())
    throw std::invalid_argument("rows differ in size");
  double v_cur = 0.0, v_avg = 0.0;
  for (std::size_t i = 0; i < q_row.size(); ++i) {
    v_cur += pi_row[i] * q_row[i];
    v_avg += pi_avg_row[i] * q_row[i];
  }
  return v_cur > v_avg ? xi_win : xi_loss;
}

void avg_policy_update(std::span<double> pi_avg_row, std::span<const double> pi_row,
                       std::int64_t count) {
  if (count < 1) throw std::invalid_argument("visit count must be at least 1");
  if (pi_avg_row.size() != pi_row.size())
    throw std::invalid_argument("rows differ in size");
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < pi_row.size(); ++i)
    pi_avg_row[i] += (pi_row[i] - pi_avg_row[i]) * inv;
}

std::vector<double> fuzzy_membership(std::span<const double> features, const FuzzyTables& t) {
  if (t.n_fuzzy == 0) throw std::invalid_argument("fuzzy tables not initialized");
  if (features.size() != t.widths.size())
    throw std::invalid_argument("feature dimension mismatch");
  for (double f : features)
    if (!std::isfinite(f)) throw std::invalid_argument("non-finite state feature");

  std::vector<double> psi(t.n_fuzzy, 0.0);
  double total = 0.0;
  for (std::size_t l = 0; l < t.n_fuzzy; ++l) {
    double m = 1.0;
    for (std::size_t d = 0; d < t.widths.size(); ++d) {
      const double dist = std::abs(features[d] - t.centers[l][d]);
      m *= std::max(0.0, 1.0 - dist / t.widths[d]);
      if (m == 0.0) break;
    }
    psi[l] = m;
    total += m;
  }
  if (total == 0.0) {
    // Outside every support: hard-assign the nearest center.
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < t.n_fuzzy; ++l) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < t.widths.size(); ++d) {
        const double dd = features[d] - t.centers[l][d];
        d2 += dd * dd;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = l;
      }
    }
    psi[best] = 1.0;
    return psi;
  }
  for (double& v : psi) v /= total;
  return psi;
}

double fuzzy_q(std::span<const double> psi, const FuzzyTables& t, int action) {
  if (psi.size() != t.n_fuzzy) throw std::invalid_argument("membership size mismatch");
  double v = 0.0;
  for (std::size_t l = 0; l < t.n_fuzzy; ++l) v += psi[l] * t.q[l * t.n_actions + action];
  return v;
}

std::vector<double> fuzzy_q_row(std::span<const double> psi, const FuzzyTables& t) {
  std::vector<double> row(t.n_actions, 0.0);
  for (std::size_t l = 0; l < t.n_fuzzy; ++l) {
    const double p = psi[l];
    if (p == 0.0) continue;
    const double* qr = t.q.data() + l * t.n_actions;
    for (std::size_t a = 0; a < t.n_actions; ++a) row[a] += p * qr[a];
  }
  return row;
}

double fsa_policy_score(std::span<const double> psi, const FuzzyTables& t, int action) {
  if (psi.size() != t.n_fuzzy) throw std::invalid_argument("membership size mismatch");
  double v = 0.0;
  for (std::size_t l = 0; l < t.n_fuzzy; ++l)
    v += psi[l] * t.pi[l * t.n_actions + action] * t.q[l * t.n_actions + action];
  return v;
}

void fsa_policy_update(FuzzyTables& t, std::span<const double> psi, int greedy_action,
                       double xi) {
  if (psi.size() != t.n_fuzzy) throw std::invalid_argument("membership size mismatch");
  double denom = 0.0;
  for (double p : psi) denom += p * p;
  if (denom == 0.0) throw std::invalid_argument("membership vector is all zero");
  for (std::size_t l = 0; l < t.n_fuzzy; ++l) {
    if (psi[l] == 0.0) continue;  // untouched fuzzy states keep their rows
    const double scale = psi[l] / denom;
    phc_row_move(t.pi_row(l), greedy_action, xi * scale);
  }
}

void fuzzy_q_update(FuzzyTables& t, std::span<const double> psi, int action, double r,
                    double max_fq_next, double alpha, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  if (psi.size() != t.n_fuzzy) throw std::invalid_argument("membership size mismatch");
  const double fq = fuzzy_q(psi, t, action);
  const double target = (1.0 - alpha) * fq + alpha * (r + gamma * max_fq_next);
  // One-hot membership assigns the target directly (exactly the plain update).
  for (std::size_t l = 0; l < t.n_fuzzy; ++l) {
    if (psi[l] == 1.0) {
      t.q[l * t.n_actions + action] = target;
      return;
    }
  }
  double denom = 0.0;
  for (double p : psi) denom += p * p;
  if (denom == 0.0) throw std::invalid_argument("membership vector is all zero");
  const double c = (target - fq) / denom;
  for (std::size_t l = 0; l < t.n_fuzzy; ++l)
    t.q[l * t.n_actions + action] += c * psi[l];
}

LearnerBundle::LearnerBundle(const LearnerConfig& config, std::size_t states,
                             std::size_t actions, std::size_t feature_dim)
    : cfg(config), n_states(states), n_actions(actions) {
  cfg.validate();
  if (states == 0 || actions == 0)
    throw std::invalid_argument("state and action spaces must be non-empty");
  if (!uses_fuzzy()) q.assign(states * actions, 0.0);
  if (uses_policy()) {
    pi.assign(states * actions, 1.0 / static_cast<double>(actions));
    pi_avg = pi;
    counts.assign(states, 0);
  }
  if (uses_fuzzy())
    fuzzy = FuzzyTables::uniform_grid(static_cast<std::size_t>(cfg.fuzzy_states),
                                      feature_dim, actions, cfg.fuzzy_width_scale);
  xi = cfg.xi_loss;
}

namespace {

int select_by_score(std::span<const double> psi, const FuzzyTables& t, Rng& rng) {
  // Softmax over the aggregation preference scores.
  std::vector<double> score(t.n_actions);
  for (std::size_t a = 0; a < t.n_actions; ++a)
    score[a] = fsa_policy_score(psi, t, static_cast<int>(a));
  const double m = *std::max_element(score.begin(), score.end());
  double total = 0.0;
  for (double& s : score) {
    s = std::exp(s - m);
    total += s;
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double u = u01(rng) * total;
  for (std::size_t a = 0; a < t.n_actions; ++a) {
    u -= score[a];
    if (u <= 0.0) return static_cast<int>(a);
  }
  return static_cast<int>(t.n_actions) - 1;
}

}  // namespace

TrainResult train(LearningEnv& env, const LearnerConfig& cfg, int episodes, int horizon,
                  Rng& rng) {
  cfg.validate();
  if (episodes < 1 || horizon < 1)
    throw std::invalid_argument("episodes and horizon must be positive");

  const std::size_t n_states = static_cast<std::size_t>(env.state_count());
  const std::size_t n_actions = static_cast<std::size_t>(env.action_count());
  TrainResult out;
  out.bundle = LearnerBundle(cfg, n_states, n_actions,
                             static_cast<std::size_t>(env.feature_dim()));
  LearnerBundle& b = out.bundle;
  const bool fuzzy = b.uses_fuzzy();
  const bool policy = b.uses_policy();

  std::vector<double> fq_row;
  for (int ep = 0; ep < episodes; ++ep) {
    env.begin_episode();
    double reward_sum = 0.0;
    for (int t = 0; t < horizon; ++t) {
      const int s = env.state_index();
      std::vector<double> psi;
      std::span<const double> row;
      if (fuzzy) {
        psi = fuzzy_membership(env.state_features(), b.fuzzy);
        fq_row = fuzzy_q_row(psi, b.fuzzy);
        row = fq_row;
      } else {
        row = b.q_row(s);
      }

      const int a = (fuzzy && cfg.select_by_fsa_score)
                        ? select_by_score(psi, b.fuzzy, rng)
                        : egreedy_select(row, cfg.epsilon, rng);
      const double r = env.step(a);
      reward_sum += r;
      const int s_next = env.state_index();
      const int greedy = argmax_first(row);

      if (policy) {
        auto pi_row = b.pi_row(s);
        auto avg_row = b.pi_avg_row(s);
        // Mixed-policy move uses the rate selected on the previous step.
        const double step_xi = cfg.variant == Variant::PhcFixed ? cfg.xi_fixed : b.xi;
        phc_row_move(pi_row, greedy, step_xi);
        if (cfg.variant != Variant::PhcFixed) {
          const bool equal = std::equal(pi_row.begin(), pi_row.end(), b.pi_avg_row(s).begin());
          b.xi = wolf_rate(pi_row, avg_row, row, cfg.xi_win, cfg.xi_loss);
          if (b.xi == cfg.xi_win)
            ++out.counters.wolf_win;
          else
            ++out.counters.wolf_loss;
          if (equal) {
            ++out.counters.policy_equal;
            if (b.xi == cfg.xi_loss) ++out.counters.policy_equal_loss;
          }
        }
        avg_policy_update(avg_row, pi_row, b.counts[s] + 1);
        b.counts[s] += 1;
      }

      if (fuzzy) {
        fsa_policy_update(b.fuzzy, psi, greedy, b.xi);
        const auto psi_next = fuzzy_membership(env.state_features(), b.fuzzy);
        const auto next_row = fuzzy_q_row(psi_next, b.fuzzy);
        const double max_next = next_row[argmax_first(next_row)];
        fuzzy_q_update(b.fuzzy, psi, a, r, max_next, cfg.alpha, cfg.gamma);
      } else {
        const auto next_row = b.q_row(s_next);
        const double max_next = next_row[argmax_first(next_row)];
        double& q_sa = b.q[static_cast<std::size_t>(s) * n_actions + a];
        q_sa = q_update(q_sa, r, max_next, cfg.alpha, cfg.gamma);
      }
    }
    out.episode_mean_reward.push_back(reward_sum / horizon);
  }
  return out;
}

}  // namespace irsjam
