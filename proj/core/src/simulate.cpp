#include "conecert/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "conecert/errors.hpp"
#include "conecert/linalg.hpp"
#include "conecert/tolerances.hpp"

namespace conecert {

namespace {

void require_ready(const SystemDescription& s) {
  ValidationReport report = validate_system(s);
  if (!report.ok()) {
    throw InputError("system fails validation: " + report.errors.front());
  }
}

std::vector<int> node_sequence(const Walk& walk) {
  std::vector<int> nodes;
  nodes.reserve(walk.steps.size() + 1);
  nodes.push_back(walk.start);
  for (const WalkStep& step : walk.steps) nodes.push_back(step.to);
  return nodes;
}

// Deterministic parallel max-reduction over [0, count): every worker scans a
// contiguous chunk, the chunk results merge in index order.
template <typename Value, typename Eval, typename Better>
Value parallel_best(int count, int threads, Value init, const Eval& eval, const Better& better) {
  threads = std::max(1, std::min(threads, count));
  if (threads <= 1) {
    Value best = init;
    for (int i = 0; i < count; ++i) {
      Value v = eval(i);
      if (better(v, best)) best = std::move(v);
    }
    return best;
  }
  std::vector<Value> partial(threads, init);
  std::vector<std::thread> pool;
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const int begin = t * chunk;
      const int end = std::min(count, begin + chunk);
      Value best = init;
      for (int i = begin; i < end; ++i) {
        Value v = eval(i);
        if (better(v, best)) best = std::move(v);
      }
      partial[t] = std::move(best);
    });
  }
  for (auto& th : pool) th.join();
  Value best = init;
  for (Value& v : partial) {
    if (better(v, best)) best = std::move(v);
  }
  return best;
}

std::vector<Walk> collect_walks_all_starts(const SystemDescription& s, int horizon) {
  std::vector<Walk> walks;
  std::size_t budget = tol::kWalkEnumerationCap;
  for (int start = 0; start < s.node_count(); ++start) {
    for_each_walk(s.graph, start, horizon, [&](const Walk& w) { walks.push_back(w); }, budget);
    budget = tol::kWalkEnumerationCap - walks.size();
  }
  return walks;
}

}  // namespace

Trajectory simulate(const SystemDescription& s, const Walk& walk,
                    const std::vector<Vector>& inputs, const Vector& x0) {
  require_ready(s);
  if (!is_admissible(s.graph, walk)) throw InputError("walk is not admissible in the graph");
  if (static_cast<int>(inputs.size()) != walk.length()) {
    throw InputError("need one input vector per walk step");
  }
  if (static_cast<int>(x0.size()) != s.dims.n) throw InputError("x0 length must equal n");
  for (const Vector& wt : inputs) {
    if (static_cast<int>(wt.size()) != s.dims.q) throw InputError("input vector length must equal q");
  }

  Trajectory traj;
  traj.walk = walk;
  traj.w = inputs;
  traj.x.reserve(walk.length() + 1);
  traj.z.reserve(walk.length());
  traj.x.push_back(x0);

  Vector state = x0;
  for (int t = 0; t < walk.length(); ++t) {
    const ModeMatrices& mode = s.modes[walk.steps[t].label];
    Vector z = mode.c * state;
    const Vector dw = mode.d * inputs[t];
    for (int k = 0; k < s.dims.r; ++k) z[k] += dw[k];
    Vector next = mode.a * state;
    const Vector bw = mode.b * inputs[t];
    for (int k = 0; k < s.dims.n; ++k) next[k] += bw[k];
    traj.z.push_back(std::move(z));
    traj.x.push_back(next);
    state = std::move(next);
  }

#ifndef NDEBUG
  // Cone preservation: fully nonnegative pss data keeps trajectories in the
  // orthant (up to roundoff).
  if (s.kind == SystemKind::Pss && all_modes_nonnegative(s)) {
    bool data_nonneg = std::all_of(x0.begin(), x0.end(), [](double v) { return v >= 0.0; });
    for (const Vector& wt : inputs) {
      data_nonneg = data_nonneg &&
                    std::all_of(wt.begin(), wt.end(), [](double v) { return v >= 0.0; });
    }
    if (data_nonneg) {
      for (const Vector& xt : traj.x)
        for (double v : xt) assert(v >= -1e-12);
      for (const Vector& zt : traj.z)
        for (double v : zt) assert(v >= -1e-12);
    }
  }
#endif
  return traj;
}

double empirical_gain(const Trajectory& traj, GainKind kind) {
  double in = 0.0;
  double out = 0.0;
  if (kind == GainKind::L1) {
    for (const Vector& wt : traj.w) in += sum(wt);
    for (const Vector& zt : traj.z) out += sum(zt);
  } else {
    for (const Vector& wt : traj.w) in += dot(wt, wt);
    for (const Vector& zt : traj.z) out += dot(zt, zt);
  }
  bool all_zero = true;
  for (const Vector& wt : traj.w) all_zero = all_zero && max_abs(wt) == 0.0;
  if (all_zero) throw InputError("empirical gain needs a nonzero input sequence");
  return out / in;
}

namespace {

DecreaseReport decrease_from_values(const Trajectory& traj, const std::vector<double>& v,
                                    const std::vector<double>& supply) {
  DecreaseReport report;
  report.pass = true;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < traj.steps(); ++t) {
    DecreaseStep step;
    step.t = t;
    step.vacuous = max_abs(traj.x[t]) == 0.0 && max_abs(traj.w[t]) == 0.0;
    step.slack = supply[t] - (v[t + 1] - v[t]);
    report.steps.push_back(step);
    if (!step.vacuous) {
      report.min_slack = std::min(report.min_slack, step.slack);
      if (!(step.slack > 0.0)) report.pass = false;
    }
  }
  if (report.min_slack == std::numeric_limits<double>::infinity()) report.min_slack = 0.0;
  return report;
}

}  // namespace

DecreaseReport lyapunov_decrease_check(const SystemDescription& s, const L1Certificate& cert,
                                       const Trajectory& traj) {
  if (static_cast<int>(cert.p.size()) != s.node_count()) {
    throw InputError("certificate node count does not match the system");
  }
  const std::vector<int> nodes = node_sequence(traj.walk);
  std::vector<double> v(nodes.size());
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    if (static_cast<int>(cert.p[nodes[t]].size()) != s.dims.n) {
      throw InputError("certificate vector length does not match the state dimension");
    }
    v[t] = dot(cert.p[nodes[t]], traj.x[t]);
  }
  std::vector<double> supply(traj.steps());
  for (int t = 0; t < traj.steps(); ++t) {
    supply[t] = cert.gamma * sum(traj.w[t]) - sum(traj.z[t]);
  }
  return decrease_from_values(traj, v, supply);
}

DecreaseReport lyapunov_decrease_check(const SystemDescription& s, const L2Certificate& cert,
                                       const Trajectory& traj) {
  if (static_cast<int>(cert.p.size()) != s.node_count()) {
    throw InputError("certificate node count does not match the system");
  }
  const std::vector<int> nodes = node_sequence(traj.walk);
  std::vector<double> v(nodes.size());
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    const Matrix& p = cert.p[nodes[t]];
    if (p.rows() != s.dims.n || p.cols() != s.dims.n) {
      throw InputError("certificate matrix shape does not match the state dimension");
    }
    v[t] = dot(traj.x[t], p * traj.x[t]);
  }
  std::vector<double> supply(traj.steps());
  for (int t = 0; t < traj.steps(); ++t) {
    supply[t] = cert.gamma * dot(traj.w[t], traj.w[t]) - dot(traj.z[t], traj.z[t]);
  }
  return decrease_from_values(traj, v, supply);
}

L1OracleResult worst_case_l1_lower_bound(const SystemDescription& s, int horizon, int threads) {
  require_ready(s);
  if (s.kind != SystemKind::Pss) throw InputError("the l1 oracle applies to pss systems only");
  if (!all_modes_nonnegative(s)) {
    throw InputError("the l1 oracle requires every mode matrix to be nonnegative");
  }
  if (horizon < 0) throw InputError("horizon must be nonnegative");

  L1OracleResult best;
  if (horizon == 0) return best;

  const std::vector<Walk> walks = collect_walks_all_starts(s, horizon);
  const auto [n, q, r] = s.dims;

  // For one walk and injection time t0, propagate the n x q impulse response
  // and accumulate output column sums; linearity and nonnegativity make unit
  // coordinate impulses the worst inputs of unit 1-norm.
  auto eval = [&](int wi) {
    const Walk& walk = walks[wi];
    L1OracleResult local;
    for (int t0 = 0; t0 < horizon; ++t0) {
      Vector value(q, 0.0);
      const ModeMatrices& inject = s.modes[walk.steps[t0].label];
      for (int k = 0; k < q; ++k)
        for (int i = 0; i < r; ++i) value[k] += inject.d(i, k);
      Matrix impulse = inject.b;  // state response to e_k, one column per k
      for (int t = t0 + 1; t < horizon; ++t) {
        const ModeMatrices& mode = s.modes[walk.steps[t].label];
        const Matrix zmap = mode.c * impulse;
        for (int k = 0; k < q; ++k)
          for (int i = 0; i < r; ++i) value[k] += zmap(i, k);
        impulse = mode.a * impulse;
      }
      for (int k = 0; k < q; ++k) {
        if (value[k] > local.bound) {
          local.bound = value[k];
          local.walk = walk;
          local.injection_time = t0;
          local.channel = k;
        }
      }
    }
    return local;
  };
  return parallel_best<L1OracleResult>(
      static_cast<int>(walks.size()), threads, best, eval,
      [](const L1OracleResult& a, const L1OracleResult& b) { return a.bound > b.bound; });
}

namespace {

// Stacked input-output matrix of one walk: block (t, tau) maps w(tau) to
// z(t); D on the diagonal, C A ... B below it.
Matrix walk_toeplitz(const SystemDescription& s, const Walk& walk) {
  const auto [n, q, r] = s.dims;
  const int horizon = walk.length();
  Matrix t_mat(r * horizon, q * horizon);
  for (int tau = 0; tau < horizon; ++tau) {
    const ModeMatrices& inject = s.modes[walk.steps[tau].label];
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < q; ++k) t_mat(tau * r + i, tau * q + k) = inject.d(i, k);
    Matrix impulse = inject.b;
    for (int t = tau + 1; t < horizon; ++t) {
      const ModeMatrices& mode = s.modes[walk.steps[t].label];
      const Matrix block = mode.c * impulse;
      for (int i = 0; i < r; ++i)
        for (int k = 0; k < q; ++k) t_mat(t * r + i, tau * q + k) = block(i, k);
      impulse = mode.a * impulse;
    }
  }
  return t_mat;
}

// Power iteration on T^T T with T applied implicitly through simulation and
// its adjoint through the backward recursion; used past the dense limit.
double implicit_walk_norm(const SystemDescription& s, const Walk& walk) {
  const auto [n, q, r] = s.dims;
  const int horizon = walk.length();

  auto apply = [&](const Vector& win) {
    Vector state(n, 0.0);
    Vector out(static_cast<std::size_t>(r) * horizon, 0.0);
    for (int t = 0; t < horizon; ++t) {
      const ModeMatrices& mode = s.modes[walk.steps[t].label];
      for (int i = 0; i < r; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += mode.c(i, j) * state[j];
        for (int k = 0; k < q; ++k) acc += mode.d(i, k) * win[t * q + k];
        out[t * r + i] = acc;
      }
      Vector next(n, 0.0);
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += mode.a(i, j) * state[j];
        for (int k = 0; k < q; ++k) acc += mode.b(i, k) * win[t * q + k];
        next[i] = acc;
      }
      state = std::move(next);
    }
    return out;
  };
  auto apply_adjoint = [&](const Vector& u) {
    Vector lambda(n, 0.0);  // sum over future outputs, propagated backwards
    Vector out(static_cast<std::size_t>(q) * horizon, 0.0);
    for (int t = horizon - 1; t >= 0; --t) {
      const ModeMatrices& mode = s.modes[walk.steps[t].label];
      for (int k = 0; k < q; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += mode.b(i, k) * lambda[i];
        for (int i = 0; i < r; ++i) acc += mode.d(i, k) * u[t * r + i];
        out[t * q + k] = acc;
      }
      Vector prev(n, 0.0);
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += mode.a(i, j) * lambda[i];
        for (int i = 0; i < r; ++i) acc += mode.c(i, j) * u[t * r + i];
        prev[j] = acc;
      }
      lambda = std::move(prev);
    }
    return out;
  };

  std::mt19937_64 rng(4242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Vector v(static_cast<std::size_t>(q) * horizon);
    for (double& x : v) x = gauss(rng);
    double nv = norm2(v);
    if (nv == 0.0) continue;
    for (double& x : v) x /= nv;
    double lambda = 0.0;
    for (int it = 0; it < 10000; ++it) {
      Vector w = apply_adjoint(apply(v));
      const double next = dot(v, w);
      const double nw = norm2(w);
      if (nw == 0.0) {
        lambda = 0.0;
        break;
      }
      for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
      if (it > 0 && std::abs(next - lambda) <= tol::kPowerIterRel * std::max(next, 1e-300)) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    best = std::max(best, lambda);
  }
  return std::sqrt(std::max(0.0, best));
}

}  // namespace

L2OracleResult worst_case_l2_lower_bound(const SystemDescription& s, int horizon, int threads) {
  require_ready(s);
  if (horizon < 0) throw InputError("horizon must be nonnegative");

  L2OracleResult best;
  if (horizon == 0) return best;

  const std::vector<Walk> walks = collect_walks_all_starts(s, horizon);
  const bool dense = static_cast<long>(horizon) * std::max(s.dims.q, s.dims.r) <=
                     tol::kDenseToeplitzLimit;

  auto eval = [&](int wi) {
    const Walk& walk = walks[wi];
    L2OracleResult local;
    local.bound = dense ? max_singular_value(walk_toeplitz(s, walk)) : implicit_walk_norm(s, walk);
    local.walk = walk;
    return local;
  };
  return parallel_best<L2OracleResult>(
      static_cast<int>(walks.size()), threads, best, eval,
      [](const L2OracleResult& a, const L2OracleResult& b) { return a.bound > b.bound; });
}

}  // namespace conecert
