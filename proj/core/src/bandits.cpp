#include "bct/bandits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bct/confidence.hpp"

namespace bct {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Arm {
  PointId id = 0;
  PairStats prior;  // ledger contents before this call
  double fresh_sum = 0.0;
  std::uint64_t fresh_count = 0;
  double width = std::numeric_limits<double>::infinity();
  // Hit the pull cap while unresolved; classified by its empirical mean.
  bool forced = false;

  std::uint64_t count() const { return prior.count + fresh_count; }
  double mean() const { return (prior.sum + fresh_sum) / static_cast<double>(count()); }
  double lcb() const { return mean() - width; }
  double ucb() const { return mean() + width; }
};

void validate_delta(double delta, std::size_t union_denominator) {
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("delta must lie in (0, 1)");
  if (union_denominator == 0) throw ContractViolation("union denominator must be positive");
}

// Per-call arm state, seeded from the shared ledger and written back to it
// by commit().
class ArmPool {
 public:
  ArmPool(PointId anchor, std::span<const PointId> candidates, double delta,
          std::size_t union_denominator, StochasticOracle& oracle, const SampleLedger& ledger,
          const BanditOptions& options)
      : anchor_(anchor),
        oracle_(oracle),
        options_(options),
        schedule_(delta / static_cast<double>(union_denominator), oracle.sigma()) {
    std::vector<PointId> ids(candidates.begin(), candidates.end());
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw ContractViolation("duplicate candidate in bandit call");
    }
    arms_.reserve(ids.size());
    for (const PointId id : ids) {
      if (id == anchor) throw ContractViolation("anchor listed among its own candidates");
      Arm arm;
      arm.id = id;
      arm.prior = ledger.stats(anchor, id);
      if (arm.prior.count > 0) arm.width = schedule_.width(arm.prior.count);
      arms_.push_back(arm);
    }
  }

  std::vector<Arm>& arms() { return arms_; }
  const std::vector<Arm>& arms() const { return arms_; }
  std::size_t size() const { return arms_.size(); }

  // One pull for every arm without samples, at most `limit` in total; arms
  // already in the ledger are not re-initialized.
  void initialize(std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()) {
    for (std::size_t k = 0; k < arms_.size() && calls_ < limit; ++k) {
      if (arms_[k].count() == 0) pull(k);
    }
  }

  std::uint64_t calls() const { return calls_; }

  void pull(std::size_t k) {
    Arm& arm = arms_[k];
    const double x = oracle_.query(anchor_, arm.id);
    arm.fresh_sum += x;
    ++arm.fresh_count;
    arm.width = schedule_.width(arm.count());
    ++calls_;
    if (options_.trace) options_.trace({round_, anchor_, arm.id, arm.mean(), arm.width});
  }

  bool at_cap(std::size_t k) const { return arms_[k].count() >= options_.t_max; }
  void next_round() { ++round_; }

  void commit(SampleLedger& ledger, BanditStats& stats) const {
    for (const Arm& arm : arms_) {
      if (arm.fresh_count == 0) continue;
      const PairStats fresh{arm.fresh_sum, arm.fresh_count};
      ledger.add(anchor_, arm.id, fresh);
      stats.ledger_delta.add(anchor_, arm.id, fresh);
    }
    stats.oracle_calls = calls_;
  }

  double min_mean() const {
    double m = std::numeric_limits<double>::infinity();
    for (const Arm& arm : arms_) m = std::min(m, arm.mean());
    return m;
  }

  std::size_t argmin_mean() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < arms_.size(); ++k) {
      if (arms_[k].mean() < arms_[best].mean()) best = k;
    }
    return best;
  }

 private:
  PointId anchor_;
  StochasticOracle& oracle_;
  const BanditOptions& options_;
  ConfidenceSchedule schedule_;
  std::vector<Arm> arms_;
  std::uint64_t calls_ = 0;
  std::uint64_t round_ = 0;
};

}  // namespace

CoverOutcome identify_cover(const CoverQuery& query, StochasticOracle& oracle,
                            SampleLedger& ledger, const BanditOptions& options) {
  if (query.candidates.empty()) throw ContractViolation("identify_cover needs candidates");
  if (!(query.epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  if (!(query.gamma >= 0.0)) throw ContractViolation("gamma must be nonnegative");
  validate_delta(query.delta, query.union_denominator);

  CoverOutcome out;
  if (query.candidates.size() == 1) {
    if (query.candidates.front() == query.anchor) {
      throw ContractViolation("anchor listed among its own candidates");
    }
    out.selected.push_back(query.candidates.front());
    return out;
  }

  ArmPool pool(query.anchor, query.candidates, query.delta, query.union_denominator, oracle,
               ledger, options);
  pool.initialize();
  auto& arms = pool.arms();

  if (oracle.noiseless()) {
    const double cut = pool.min_mean() + query.epsilon;
    for (const Arm& arm : arms) {
      if (arm.mean() <= cut) out.selected.push_back(arm.id);
    }
    pool.commit(ledger, out);
    return out;
  }

  const double slack = options.lt_variant ? 0.0 : query.gamma;
  double lower = 0.0;  // L_t
  double min_mean = 0.0;
  for (;;) {
    min_mean = std::numeric_limits<double>::infinity();
    double min_ucb = min_mean;
    double min_lcb = min_mean;
    std::size_t j_star = 0;
    for (std::size_t k = 0; k < arms.size(); ++k) {
      min_mean = std::min(min_mean, arms[k].mean());
      min_ucb = std::min(min_ucb, arms[k].ucb());
      if (arms[k].lcb() < min_lcb) {
        min_lcb = arms[k].lcb();
        j_star = k;
      }
    }
    const double upper = min_ucb + query.epsilon;  // U_t
    lower = min_lcb + query.epsilon + slack;

    // j1: least certain empirically-good arm, j2: least certain
    // empirically-bad arm, both among the unresolved.
    std::size_t j1 = kNone;
    std::size_t j2 = kNone;
    const double good_cut = min_mean + query.epsilon;
    const auto unresolved = [&](const Arm& arm) {
      return !arm.forced && arm.lcb() <= upper && arm.ucb() >= lower;
    };
    for (std::size_t k = 0; k < arms.size(); ++k) {
      const Arm& arm = arms[k];
      if (!unresolved(arm)) continue;
      if (arm.mean() <= good_cut) {
        if (j1 == kNone || arm.ucb() > arms[j1].ucb()) j1 = k;
      } else {
        if (j2 == kNone || arm.lcb() < arms[j2].lcb()) j2 = k;
      }
    }
    if (j1 == kNone && j2 == kNone) break;

    const std::size_t picks[3] = {j1, j2, j_star};
    for (std::size_t a = 0; a < 3; ++a) {
      const std::size_t k = picks[a];
      if (k == kNone || (a > 0 && picks[0] == k) || (a > 1 && picks[1] == k)) continue;
      if (pool.at_cap(k)) {
        if (unresolved(arms[k])) {
          arms[k].forced = true;
          out.capped = true;
        }
        continue;
      }
      pool.pull(k);
    }
    pool.next_round();
  }

  for (const Arm& arm : arms) {
    const bool keep = arm.forced ? arm.mean() <= min_mean + query.epsilon : arm.ucb() < lower;
    if (keep) out.selected.push_back(arm.id);
  }
  if (out.selected.empty()) out.selected.push_back(arms[pool.argmin_mean()].id);
  pool.commit(ledger, out);
  return out;
}

ThresholdOutcome threshold_partition(const ThresholdQuery& query, StochasticOracle& oracle,
                                     SampleLedger& ledger, const BanditOptions& options) {
  if (!(query.theta > 0.0)) throw ContractViolation("threshold must be positive");
  validate_delta(query.delta, query.union_denominator);

  ThresholdOutcome out;
  if (query.candidates.empty()) return out;

  const std::uint64_t budget =
      query.pull_budget.value_or(std::numeric_limits<std::uint64_t>::max());
  ArmPool pool(query.anchor, query.candidates, query.delta, query.union_denominator, oracle,
               ledger, options);
  pool.initialize(budget);
  auto& arms = pool.arms();
  const double theta = query.theta;

  const auto is_below = [&](const Arm& arm) {
    if (oracle.noiseless()) return arm.mean() <= theta;
    return arm.forced ? arm.mean() <= theta : arm.ucb() <= theta;
  };
  const auto is_open = [&](const Arm& arm) {
    if (arm.count() == 0) return true;
    if (oracle.noiseless() || arm.forced) return false;
    return arm.lcb() <= theta && arm.ucb() > theta;
  };

  if (!oracle.noiseless()) {
    for (;;) {
      std::size_t j_star = kNone;
      bool any_below = false;
      for (std::size_t k = 0; k < arms.size(); ++k) {
        const Arm& arm = arms[k];
        if (arm.count() == 0) continue;
        if (arm.forced) {
          any_below = any_below || arm.mean() <= theta;
          continue;
        }
        if (arm.ucb() <= theta) {
          any_below = true;
          continue;
        }
        if (arm.lcb() > theta) continue;
        if (j_star == kNone || arm.lcb() < arms[j_star].lcb()) j_star = k;
      }
      if (query.stop_at_first_below && any_below) break;
      if (j_star == kNone || pool.calls() >= budget) break;
      if (pool.at_cap(j_star)) {
        arms[j_star].forced = true;
        out.capped = true;
        continue;
      }
      pool.pull(j_star);
      pool.next_round();
    }
  }

  for (const Arm& arm : arms) {
    if (query.pull_budget && is_open(arm)) {
      out.undecided.push_back(arm.id);
    } else {
      (is_below(arm) ? out.below : out.above).push_back(arm.id);
    }
  }
  pool.commit(ledger, out);
  return out;
}

SmallestOutcome find_smallest_in_set(const SmallestQuery& query, StochasticOracle& oracle,
                                     SampleLedger& ledger, const BanditOptions& options) {
  if (query.candidates.empty()) throw ContractViolation("find_smallest_in_set needs candidates");
  validate_delta(query.delta, query.union_denominator);

  SmallestOutcome out;
  if (query.candidates.size() == 1) {
    if (query.candidates.front() == query.anchor) {
      throw ContractViolation("anchor listed among its own candidates");
    }
    out.best = query.candidates.front();
    return out;
  }

  ArmPool pool(query.anchor, query.candidates, query.delta, query.union_denominator, oracle,
               ledger, options);
  pool.initialize();
  auto& arms = pool.arms();

  if (oracle.noiseless()) {
    out.best = arms[pool.argmin_mean()].id;
    pool.commit(ledger, out);
    return out;
  }

  std::vector<std::size_t> alive(arms.size());
  for (std::size_t k = 0; k < alive.size(); ++k) alive[k] = k;

  for (;;) {
    std::size_t leader = alive.front();
    for (const std::size_t k : alive) {
      if (arms[k].ucb() < arms[leader].ucb()) leader = k;
    }
    const double bar = arms[leader].ucb();
    std::erase_if(alive, [&](std::size_t k) { return arms[k].lcb() > bar; });
    if (alive.size() == 1) {
      out.best = arms[alive.front()].id;
      break;
    }

    bool pulled = false;
    for (const std::size_t k : alive) {
      if (pool.at_cap(k)) continue;
      pool.pull(k);
      pulled = true;
    }
    if (!pulled) {
      out.capped = true;
      std::size_t best = alive.front();
      for (const std::size_t k : alive) {
        if (arms[k].mean() < arms[best].mean()) best = k;
      }
      out.best = arms[best].id;
      break;
    }
    pool.next_round();
  }

  pool.commit(ledger, out);
  return out;
}

}  // namespace bct
