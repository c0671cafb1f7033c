#include "relayline/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace relayline {

double MdpConfig::resolved_a_max() const {
  return a_max > 0.0 ? a_max : std::max(25.0, 5.0 / Lambda);
}

int MdpConfig::state_count() const {
  return static_cast<int>(std::lround(1.0 / state_step));
}

double MdpConfig::grid_state(int index) const {
  const int k = state_count();
  if (index < 0 || index >= k) {
    throw std::out_of_range("MdpConfig::grid_state: index out of range");
  }
  return index == k - 1 ? 1.0 : (index + 1) * state_step;
}

void MdpConfig::validate() const {
  if (!(Lambda > 0.0)) {
    throw std::invalid_argument("MdpConfig: Lambda must be > 0");
  }
  if (!(xi > 0.0)) {
    throw std::invalid_argument("MdpConfig: xi must be > 0");
  }
  if (!(state_step > 0.0 && state_step <= 0.1)) {
    throw std::invalid_argument("MdpConfig: state_step must be in (0, 0.1]");
  }
  const double k = 1.0 / state_step;
  if (std::abs(k - std::lround(k)) > 1e-9) {
    throw std::invalid_argument("MdpConfig: 1/state_step must be integral");
  }
  if (!(action_step > 0.0)) {
    throw std::invalid_argument("MdpConfig: action_step must be > 0");
  }
  if (a_max < 0.0) {
    throw std::invalid_argument("MdpConfig: a_max must be >= 0");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("MdpConfig: tol must be > 0");
  }
  if (iter_cap <= 0) {
    throw std::invalid_argument("MdpConfig: iter_cap must be > 0");
  }
}

MdpConfig MdpConfig::normalized(double rho, double beta) {
  if (!(rho > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("MdpConfig::normalized: need rho, beta > 0");
  }
  MdpConfig cfg;
  cfg.Lambda = rho / beta;
  return cfg;
}

namespace {

inline double grid_value(const MdpConfig& cfg, int k, int i) {
  return i == k - 1 ? 1.0 : (i + 1) * cfg.state_step;
}

// Smallest 0-based grid index whose state is >= sp (the ceiling convention;
// the bump loops absorb the rounding of sp/state_step).
inline int ceil_index(const MdpConfig& cfg, int k, double sp) {
  const double q = sp / cfg.state_step;
  int c = static_cast<int>(q);
  if (static_cast<double>(c) < q) ++c;
  int idx = c - 1;
  idx = std::clamp(idx, 0, k - 1);
  while (idx > 0 && grid_value(cfg, k, idx - 1) >= sp) --idx;
  while (idx < k - 1 && grid_value(cfg, k, idx) < sp) ++idx;
  return idx;
}

struct ActionTables {
  std::vector<double> action;    // j * action_step
  std::vector<double> survival;  // e^{-a}: probability the line outlives a
  std::vector<double> decay;     // e^{-Lambda a}
  std::vector<double> growth;    // e^{+Lambda a}
  std::vector<double> base;      // per-unit-s expected attenuation cost
};

ActionTables build_action_tables(const MdpConfig& cfg) {
  const double lam = cfg.Lambda;
  const int na =
      static_cast<int>(cfg.resolved_a_max() / cfg.action_step + 1e-9) + 1;
  ActionTables t;
  t.action.resize(na);
  t.survival.resize(na);
  t.decay.resize(na);
  t.growth.resize(na);
  t.base.resize(na);
  for (int j = 0; j < na; ++j) {
    const double a = j * cfg.action_step;
    const double w = std::exp(-a);
    // Walking integral per unit s plus the survival-weighted accrual
    // s(e^{La}-1); collapses to Lambda/(1-Lambda)*(1-e^{-(1-Lambda)a}).
    const double q =
        lam == 1.0 ? a : -std::expm1(-(1.0 - lam) * a) / (1.0 - lam);
    t.action[j] = a;
    t.survival[j] = w;
    t.decay[j] = std::exp(-lam * a);
    t.growth[j] = std::exp(lam * a);
    t.base[j] = q + std::expm1(-a) + w * std::expm1(lam * a);
  }
  return t;
}

void backup_sweep(const MdpConfig& cfg, const ActionTables& t,
                  const std::vector<int>* index_table, BackupForm form,
                  const std::vector<double>& J, std::vector<double>& out,
                  std::vector<double>* policy, BellmanDiagnostics* diag) {
  const int k = static_cast<int>(J.size());
  const int na = static_cast<int>(t.action.size());
  const bool subcritical = cfg.Lambda < 1.0;
  if (form == BackupForm::Theta && !subcritical) {
    throw std::invalid_argument(
        "bellman_backup: theta form requires Lambda < 1");
  }
  const double theta =
      subcritical ? cfg.Lambda / (1.0 - cfg.Lambda) : 0.0;
  bool boundary = false;
  bool norelay = false;
  for (int i = 0; i < k; ++i) {
    const double s = grid_value(cfg, k, i);
    double best = std::numeric_limits<double>::infinity();
    int best_j = 0;
    const int* row =
        index_table ? index_table->data() + static_cast<std::size_t>(i) * na
                    : nullptr;
    for (int j = 0; j < na; ++j) {
      const int idx =
          row ? row[j] : ceil_index(cfg, k, s / (s + t.decay[j]));
      const double tail = cfg.xi + J[idx];
      const double c =
          form == BackupForm::Integral
              ? s * t.base[j] + t.survival[j] * tail
              : theta * s + t.survival[j] * (tail - theta * s * t.growth[j]);
      if (c < best) {  // ties keep the earlier (smaller) action
        best = c;
        best_j = j;
      }
    }
    if (best_j == na - 1) boundary = true;
    double value = best;
    double act = t.action[best_j];
    if (subcritical) {
      // Endpoint candidate a = infinity (walk out without placing); a
      // strict win beyond rounding noise means the action cap is binding.
      const double stop = theta * s;
      if (stop < value) {
        if (stop < value - 1e-12 * std::max(1.0, value)) norelay = true;
        value = stop;
        act = t.action[na - 1];
      }
    }
    out[i] = value;
    if (policy) (*policy)[i] = act;
  }
  if (diag) {
    diag->boundary_minimizer = boundary;
    diag->no_relay_preferred = norelay;
  }
}

}  // namespace

int transition_index(double s, double a, const MdpConfig& cfg) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::invalid_argument("transition_index: s must be in (0,1]");
  }
  if (!(a >= 0.0)) {
    throw std::invalid_argument("transition_index: a must be >= 0");
  }
  const int k = cfg.state_count();
  // s' = s e^{La} / (1 + s e^{La}) without overflowing the exponential.
  const double sp = s / (s + std::exp(-cfg.Lambda * a));
  return ceil_index(cfg, k, sp);
}

double stage_cost_expectation(double s, double a, const MdpConfig& cfg,
                              const std::vector<double>& J) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::invalid_argument("stage_cost_expectation: s must be in (0,1]");
  }
  if (!(a >= 0.0)) {
    throw std::invalid_argument("stage_cost_expectation: a must be >= 0");
  }
  if (static_cast<int>(J.size()) != cfg.state_count()) {
    throw std::invalid_argument(
        "stage_cost_expectation: J size does not match the state grid");
  }
  const double lam = cfg.Lambda;
  const double walk =
      lam == 1.0
          ? s * (a + std::expm1(-a))
          : s * (-std::expm1(-(1.0 - lam) * a) / (1.0 - lam) + std::expm1(-a));
  const double survive =
      std::exp(-a) *
      (s * std::expm1(lam * a) + cfg.xi + J[transition_index(s, a, cfg)]);
  return walk + survive;
}

std::vector<double> bellman_backup(const std::vector<double>& J,
                                   const MdpConfig& cfg,
                                   std::vector<double>* policy,
                                   BellmanDiagnostics* diagnostics,
                                   BackupForm form) {
  cfg.validate();
  const int k = cfg.state_count();
  if (static_cast<int>(J.size()) != k) {
    throw std::invalid_argument("bellman_backup: J size mismatch");
  }
  const ActionTables t = build_action_tables(cfg);
  std::vector<double> out(k, 0.0);
  if (policy) policy->assign(k, 0.0);
  backup_sweep(cfg, t, nullptr, form, J, out, policy, diagnostics);
  return out;
}

MdpSolution solve_mdp(const MdpConfig& cfg) {
  cfg.validate();
  const int k = cfg.state_count();
  const ActionTables t = build_action_tables(cfg);
  const int na = static_cast<int>(t.action.size());

  // Transitions never change across sweeps; tabulate when affordable.
  std::vector<int> index_table;
  const bool use_table =
      static_cast<long long>(k) * na <= 8'000'000LL;
  if (use_table) {
    index_table.resize(static_cast<std::size_t>(k) * na);
    for (int i = 0; i < k; ++i) {
      const double s = grid_value(cfg, k, i);
      int* row = index_table.data() + static_cast<std::size_t>(i) * na;
      for (int j = 0; j < na; ++j) {
        row[j] = ceil_index(cfg, k, s / (s + t.decay[j]));
      }
    }
  }

  MdpSolution sol;
  sol.config = cfg;
  sol.states.resize(k);
  for (int i = 0; i < k; ++i) sol.states[i] = grid_value(cfg, k, i);

  std::vector<double> J(k, 0.0), next(k, 0.0), policy(k, 0.0);
  bool monotone = true;
  bool converged = false;
  double sup = std::numeric_limits<double>::infinity();
  int iterations = 0;
  BellmanDiagnostics diag;
  while (iterations < cfg.iter_cap) {
    backup_sweep(cfg, t, use_table ? &index_table : nullptr,
                 BackupForm::Integral, J, next, &policy, &diag);
    ++iterations;
    sup = 0.0;
    for (int i = 0; i < k; ++i) {
      const double d = next[i] - J[i];
      if (d < -1e-12) monotone = false;
      sup = std::max(sup, std::abs(d));
    }
    J.swap(next);
    if (sup < cfg.tol) {
      converged = true;
      break;
    }
  }
  sol.J = std::move(J);
  sol.policy = std::move(policy);
  sol.iterations = iterations;
  sol.final_sup_diff = sup;
  sol.converged = converged;
  sol.monotone_iterates = monotone;
  sol.diagnostics = diag;
  if (cfg.Lambda < 1.0) sol.theta = cfg.Lambda / (1.0 - cfg.Lambda);
  return sol;
}

}  // namespace relayline
