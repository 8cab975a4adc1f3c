#include "bct/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bct/ground_truth.hpp"
#include "bct/insert.hpp"
#include "bct/invariants.hpp"
#include "bct/io.hpp"
#include "bct/nn_graph.hpp"
#include "bct/remove.hpp"
#include "bct/search.hpp"
#include "json.hpp"

namespace bct {
namespace {

using nlohmann::ordered_json;

constexpr int kSchema = 1;

std::string_view outcome_name(Outcome outcome) { return to_string(outcome); }

Outcome parse_outcome(std::string_view name) {
  for (const auto o : {Outcome::success, Outcome::capped, Outcome::error}) {
    if (to_string(o) == name) return o;
  }
  throw std::invalid_argument("unknown outcome '" + std::string(name) + "'");
}

template <typename T>
void read_opt(const ordered_json& j, const char* key, T& into) {
  if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

void read_oracle(const ordered_json& o, OracleConfig& into) {
  if (o.contains("kind")) into.kind = parse_oracle_kind(o.at("kind").get<std::string>());
  read_opt(o, "sigma", into.sigma);
  read_opt(o, "subsample_len", into.subsample_len);
  read_opt(o, "seed", into.seed);
}

ordered_json oracle_json(const OracleConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"sigma", c.sigma},
          {"subsample_len", c.subsample_len},
          {"seed", c.seed}};
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Data points first, then one held-out query per trial.
struct Universe {
  PointSet data;
  PointSet queries;
};

Universe make_universe(const ExperimentSpec& spec, std::size_t largest) {
  const DatasetSpec& ds = spec.dataset;
  if (ds.input) {
    const PointSet all = io::load_points(*ds.input);
    const bool held_out = spec.operation == Operation::query ||
                          spec.operation == Operation::approx ||
                          spec.operation == Operation::insert;
    const std::size_t q = held_out ? spec.trials : 0;
    if (all.size() < largest + q) {
      throw std::invalid_argument("input has " + std::to_string(all.size()) +
                                  " points; the experiment needs " +
                                  std::to_string(largest + q));
    }
    Universe u{all.prefix(largest), PointSet(all.dim())};
    for (std::size_t k = 0; k < q; ++k) u.queries.add(all[static_cast<PointId>(all.size() - q + k)]);
    return u;
  }
  const PointSet all =
      generate_dataset(ds.kind, largest + spec.trials, ds.dim, ds.params, ds.seed);
  Universe u{all.prefix(largest), PointSet(ds.dim)};
  for (std::size_t k = 0; k < spec.trials; ++k) u.queries.add(all[static_cast<PointId>(largest + k)]);
  return u;
}

OracleConfig seeded(OracleConfig config, std::uint64_t seed) {
  config.seed = seed;
  return config;
}

ordered_json per_level_json(const RunReport& run) {
  ordered_json levels = ordered_json::array();
  for (const LevelTrace& t : run.per_level) {
    levels.push_back({{"level", t.level},
                      {"candidates", t.candidates},
                      {"kept", t.kept},
                      {"oracle_calls", t.oracle_calls}});
  }
  return levels;
}

class Runner {
 public:
  Runner(const ExperimentSpec& spec, const Universe& universe, std::size_t n,
         std::size_t size_index)
      : spec_(spec), n_(n) {
    auto points = std::make_shared<PointSet>(universe.data.prefix(n));
    points->append(universe.queries);
    points_ = points;
    metric_ = surrogate_metric(spec.oracle, points_);
    data_ids_.resize(n);
    std::iota(data_ids_.begin(), data_ids_.end(), PointId{0});
    build_seed_ = derive_seed(derive_seed(spec.seed, ~std::uint64_t{0}), size_index);
  }

  TrialReport run(std::size_t trial) {
    TrialReport report;
    report.trial = trial;
    report.n = n_;
    report.run.seed = derive_seed(spec_.seed, trial);
    const auto started = std::chrono::steady_clock::now();
    try {
      dispatch(report);
    } catch (const std::exception& e) {
      report.run.outcome = Outcome::error;
      report.correct = false;
      report.result_json = ordered_json{{"error", e.what()}}.dump();
    }
    if (spec_.timing) {
      report.run.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
              .count();
    }
    return report;
  }

 private:
  BanditOptions options() const { return {spec_.t_max, spec_.lt_variant, {}}; }

  SearchConfig search_config() const {
    SearchConfig c;
    c.delta = spec_.delta;
    c.expansion_bound = spec_.expansion_bound;
    c.epsilon_approx = spec_.epsilon;
    c.lt_variant = spec_.lt_variant;
    c.t_max = spec_.t_max;
    return c;
  }

  // One tree per dataset size, shared by every trial that needs one.
  const CoverTree& tree() {
    if (!tree_) {
      auto oracle = make_oracle(seeded(spec_.build_oracle.value_or(spec_.oracle), build_seed_), points_);
      tree_ = bct::build(data_ids_, spec_.delta, *oracle, options()).tree;
    }
    return *tree_;
  }

  PointId query_id(std::size_t trial) const { return static_cast<PointId>(n_ + trial); }

  void dispatch(TrialReport& report) {
    auto oracle = make_oracle(seeded(spec_.oracle, report.run.seed), points_);
    const std::uint64_t before = oracle->calls();
    ordered_json result;

    switch (spec_.operation) {
      case Operation::build: {
        auto built = bct::build(data_ids_, spec_.delta, *oracle, options());
        const auto inv = check_invariants(built.tree, *metric_);
        report.run.mark_capped(built.report.outcome == Outcome::capped);
        report.correct = inv.ok && built.tree.explicit_node_count() == n_;
        result = {{"i_top", built.tree.top_level()},
                  {"i_bottom", built.tree.bottom_level()},
                  {"nodes", built.tree.explicit_node_count()},
                  {"violations", inv.violations.size()}};
        break;
      }
      case Operation::query:
      case Operation::approx: {
        const PointId q = query_id(report.trial);
        const CoverTree& t = tree();
        const auto config = search_config();
        const auto found = spec_.operation == Operation::query
                               ? find_nearest(t, q, config, *oracle)
                               : find_nearest_approx(t, q, config, *oracle);
        const PointId truth = brute_force_nn(*metric_, data_ids_, q);
        const double d = metric_->distance(q, found.nn);
        const double best = metric_->distance(q, truth);
        report.run.per_level = found.report.per_level;
        report.run.mark_capped(found.report.outcome == Outcome::capped);
        if (spec_.operation == Operation::query) {
          report.correct = found.nn == truth;
        } else {
          report.correct = d <= (1.0 + *spec_.epsilon) * best;
        }
        result = {{"query", q}, {"nn", found.nn}, {"truth", truth},
                  {"distance", d}, {"truth_distance", best}};
        if (found.exit_level) result["exit_level"] = *found.exit_level;
        break;
      }
      case Operation::insert: {
        CoverTree t = tree();
        SampleLedger ledger;
        const auto r = bct::insert(t, query_id(report.trial), spec_.delta, *oracle, ledger, options());
        const auto inv = check_invariants(t, *metric_);
        report.run.mark_capped(r.capped);
        report.correct = inv.ok && t.explicit_node_count() == t.size();
        result = {{"point", query_id(report.trial)}, {"level", r.level},
                  {"violations", inv.violations.size()}};
        result["parent"] = r.parent ? ordered_json(*r.parent) : ordered_json(nullptr);
        break;
      }
      case Operation::remove: {
        if (n_ < 2) throw std::invalid_argument("remove experiments need n >= 2");
        CoverTree t = tree();
        const auto victim = static_cast<PointId>(report.run.seed % n_);
        SampleLedger ledger;
        const auto r = bct::remove(t, victim, spec_.delta, *oracle, ledger, options());
        const auto inv = check_invariants(t, *metric_);
        report.run.mark_capped(r.capped);
        report.correct = inv.ok && t.size() == n_ - 1 && t.explicit_node_count() == n_ - 1;
        result = {{"point", victim}, {"promotions", r.promotions},
                  {"violations", inv.violations.size()}};
        result["new_root"] = r.new_root ? ordered_json(*r.new_root) : ordered_json(nullptr);
        break;
      }
      case Operation::nngraph: {
        NNGraphOptions opts{spec_.expansion_bound, spec_.lt_variant, spec_.t_max};
        const auto out = build_nn_graph(data_ids_, spec_.delta, *oracle, opts);
        const NNGraph truth = brute_force_nn_graph(*metric_, data_ids_);
        std::size_t wrong = 0;
        for (const auto& [src, dst] : truth.edges) wrong += out.graph.edges.at(src) != dst;
        report.run.mark_capped(out.report.outcome == Outcome::capped);
        report.correct = wrong == 0;
        result = {{"build_calls", out.build_calls},
                  {"query_calls", out.query_calls},
                  {"wrong_edges", wrong}};
        break;
      }
    }
    report.run.total_oracle_calls = oracle->calls() - before;
    report.result_json = result.dump();
  }

  const ExperimentSpec& spec_;
  std::size_t n_;
  std::shared_ptr<const PointSet> points_;
  std::shared_ptr<const Metric> metric_;
  std::vector<PointId> data_ids_;
  std::uint64_t build_seed_ = 0;
  std::optional<CoverTree> tree_;
};

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::capped: return "capped";
    case Outcome::error: return "error";
  }
  return "unknown";
}

std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::build: return "build";
    case Operation::query: return "query";
    case Operation::approx: return "approx";
    case Operation::insert: return "insert";
    case Operation::remove: return "remove";
    case Operation::nngraph: return "nngraph";
  }
  return "unknown";
}

Operation parse_operation(std::string_view name) {
  for (const auto op : {Operation::build, Operation::query, Operation::approx, Operation::insert,
                        Operation::remove, Operation::nngraph}) {
    if (to_string(op) == name) return op;
  }
  if (name == "nn-graph") return Operation::nngraph;
  throw std::invalid_argument("unknown operation '" + std::string(name) + "'");
}

ExperimentSpec ExperimentSpec::from_json(std::string_view text) {
  ExperimentSpec spec;
  try {
    const ordered_json j = ordered_json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");

    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      if (d.contains("kind")) spec.dataset.kind = parse_dataset_kind(d.at("kind").get<std::string>());
      read_opt(d, "n", spec.dataset.n);
      read_opt(d, "dim", spec.dataset.dim);
      read_opt(d, "seed", spec.dataset.seed);
      if (d.contains("input") && !d.at("input").is_null()) {
        spec.dataset.input = d.at("input").get<std::string>();
      }
      if (d.contains("params")) {
        const auto& p = d.at("params");
        DatasetParams& dp = spec.dataset.params;
        read_opt(p, "scale", dp.scale);
        read_opt(p, "spacing", dp.spacing);
        read_opt(p, "components", dp.components);
        read_opt(p, "center_spread", dp.center_spread);
        read_opt(p, "component_std", dp.component_std);
        read_opt(p, "separation", dp.separation);
        read_opt(p, "radius", dp.radius);
        read_opt(p, "intrinsic_dim", dp.intrinsic_dim);
      }
    }
    if (j.contains("oracle")) read_oracle(j.at("oracle"), spec.oracle);
    if (j.contains("build_oracle") && !j.at("build_oracle").is_null()) {
      read_oracle(j.at("build_oracle"), spec.build_oracle.emplace());
    }
    if (j.contains("operation")) spec.operation = parse_operation(j.at("operation").get<std::string>());
    read_opt(j, "delta", spec.delta);
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) spec.epsilon = j.at("epsilon").get<double>();
    if (j.contains("expansion_bound") && !j.at("expansion_bound").is_null()) {
      spec.expansion_bound = j.at("expansion_bound").get<double>();
    }
    read_opt(j, "lt_variant", spec.lt_variant);
    read_opt(j, "t_max", spec.t_max);
    read_opt(j, "trials", spec.trials);
    read_opt(j, "seed", spec.seed);
    read_opt(j, "sweep_n", spec.sweep_n);
    if (j.contains("output") && !j.at("output").is_null()) spec.output = j.at("output").get<std::string>();
    read_opt(j, "timing", spec.timing);
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("bad experiment config: ") + e.what());
  }

  if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (spec.operation == Operation::approx && !(spec.epsilon && *spec.epsilon > 0.0)) {
    throw std::invalid_argument("approx experiments need epsilon > 0");
  }
  if (spec.dataset.input && !std::filesystem::exists(*spec.dataset.input)) {
    throw std::invalid_argument("input file " + spec.dataset.input->string() + " does not exist");
  }
  return spec;
}

std::string ExperimentSpec::to_json() const {
  const DatasetParams& p = dataset.params;
  ordered_json d = {{"kind", to_string(dataset.kind)},
                    {"n", dataset.n},
                    {"dim", dataset.dim},
                    {"seed", dataset.seed},
                    {"params",
                     {{"scale", p.scale},
                      {"spacing", p.spacing},
                      {"components", p.components},
                      {"center_spread", p.center_spread},
                      {"component_std", p.component_std},
                      {"separation", p.separation},
                      {"radius", p.radius},
                      {"intrinsic_dim", p.intrinsic_dim}}}};
  d["input"] = dataset.input ? ordered_json(dataset.input->string()) : ordered_json(nullptr);
  ordered_json j = {{"dataset", d},
                    {"oracle", oracle_json(oracle)}};
  j["build_oracle"] = build_oracle ? oracle_json(*build_oracle) : ordered_json(nullptr);
  j["operation"] = to_string(operation);
  j["delta"] = delta;
  j["epsilon"] = epsilon ? ordered_json(*epsilon) : ordered_json(nullptr);
  j["expansion_bound"] = expansion_bound ? ordered_json(*expansion_bound) : ordered_json(nullptr);
  j["lt_variant"] = lt_variant;
  j["t_max"] = t_max;
  j["trials"] = trials;
  j["seed"] = seed;
  j["sweep_n"] = sweep_n;
  j["output"] = output ? ordered_json(output->string()) : ordered_json(nullptr);
  j["timing"] = timing;
  return j.dump();
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::vector<std::size_t> sizes = spec.sweep_n;
  if (sizes.empty()) sizes.push_back(spec.dataset.n);
  if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s == 0; })) {
    throw std::invalid_argument("dataset sizes must be positive");
  }
  const Universe universe = make_universe(spec, *std::max_element(sizes.begin(), sizes.end()));

  ExperimentResult result;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    Runner runner(spec, universe, sizes[s], s);
    for (std::size_t t = 0; t < spec.trials; ++t) result.reports.push_back(runner.run(t));
  }
  result.summary = summarize(result.reports);

  if (spec.output) {
    write_atomically(*spec.output, reports_to_ndjson(result.reports, spec));
    std::filesystem::path summary_path = *spec.output;
    summary_path.replace_filename(spec.output->stem().string() + ".summary.json");
    write_atomically(summary_path, summary_to_json(result.summary) + "\n");
  }
  return result;
}

std::string report_to_json(const TrialReport& report, const ExperimentSpec& spec) {
  ordered_json j = {{"schema", kSchema},
                    {"operation", to_string(spec.operation)},
                    {"oracle", to_string(spec.oracle.kind)},
                    {"delta", spec.delta},
                    {"trial", report.trial},
                    {"n", report.n},
                    {"seed", report.run.seed},
                    {"outcome", outcome_name(report.run.outcome)},
                    {"correct", report.correct},
                    {"total_oracle_calls", report.run.total_oracle_calls},
                    {"per_level", per_level_json(report.run)}};
  if (spec.timing) j["wall_time_ms"] = report.run.wall_time_ms;
  j["result"] = report.result_json.empty() ? ordered_json::object()
                                           : ordered_json::parse(report.result_json);
  return j.dump();
}

std::string reports_to_ndjson(const std::vector<TrialReport>& reports, const ExperimentSpec& spec) {
  std::string out;
  for (const TrialReport& r : reports) {
    out += report_to_json(r, spec);
    out += '\n';
  }
  return out;
}

std::vector<TrialReport> reports_from_ndjson(std::string_view text) {
  std::vector<TrialReport> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const ordered_json j = ordered_json::parse(line);
      if (j.at("schema").get<int>() != kSchema) throw std::invalid_argument("unsupported report schema");
      TrialReport r;
      r.trial = j.at("trial").get<std::size_t>();
      r.n = j.at("n").get<std::size_t>();
      r.run.seed = j.at("seed").get<std::uint64_t>();
      r.run.outcome = parse_outcome(j.at("outcome").get<std::string>());
      r.correct = j.at("correct").get<bool>();
      r.run.total_oracle_calls = j.at("total_oracle_calls").get<std::uint64_t>();
      for (const auto& l : j.at("per_level")) {
        r.run.per_level.push_back({l.at("level").get<Level>(), l.at("candidates").get<std::size_t>(),
                                   l.at("kept").get<std::size_t>(),
                                   l.at("oracle_calls").get<std::uint64_t>()});
      }
      read_opt(j, "wall_time_ms", r.run.wall_time_ms);
      r.result_json = j.at("result").dump();
      out.push_back(std::move(r));
    } catch (const ordered_json::exception& e) {
      throw std::invalid_argument(std::string("bad report line: ") + e.what());
    }
  }
  return out;
}

ExperimentSummary summarize(const std::vector<TrialReport>& reports) {
  ExperimentSummary s;
  s.trials = reports.size();
  if (reports.empty()) return s;

  std::vector<double> calls;
  std::size_t correct = 0;
  std::map<std::size_t, std::vector<const TrialReport*>> by_n;
  for (const TrialReport& r : reports) {
    calls.push_back(static_cast<double>(r.run.total_oracle_calls));
    correct += r.correct;
    s.capped += r.run.outcome == Outcome::capped;
    s.max_calls = std::max(s.max_calls, r.run.total_oracle_calls);
    by_n[r.n].push_back(&r);
  }
  std::sort(calls.begin(), calls.end());
  s.success_rate = static_cast<double>(correct) / static_cast<double>(reports.size());
  s.mean_calls = std::accumulate(calls.begin(), calls.end(), 0.0) / static_cast<double>(calls.size());
  s.p10_calls = quantile(calls, 0.1);
  s.median_calls = quantile(calls, 0.5);
  s.p90_calls = quantile(calls, 0.9);

  if (by_n.size() > 1) {
    for (const auto& [n, group] : by_n) {
      std::vector<double> c;
      std::size_t ok = 0;
      for (const TrialReport* r : group) {
        c.push_back(static_cast<double>(r->run.total_oracle_calls));
        ok += r->correct;
      }
      std::sort(c.begin(), c.end());
      s.scaling.push_back({n, std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size()),
                           quantile(c, 0.5),
                           static_cast<double>(ok) / static_cast<double>(c.size())});
    }
  }
  return s;
}

std::string summary_to_json(const ExperimentSummary& s) {
  ordered_json j = {{"schema", kSchema},
                    {"trials", s.trials},
                    {"success_rate", s.success_rate},
                    {"capped", s.capped},
                    {"mean_calls", s.mean_calls},
                    {"p10_calls", s.p10_calls},
                    {"median_calls", s.median_calls},
                    {"p90_calls", s.p90_calls},
                    {"max_calls", s.max_calls}};
  ordered_json rows = ordered_json::array();
  for (const ScalingRow& r : s.scaling) {
    rows.push_back({{"n", r.n},
                    {"mean_calls", r.mean_calls},
                    {"median_calls", r.median_calls},
                    {"success_rate", r.success_rate}});
  }
  j["scaling"] = rows;
  return j.dump();
}

}  // namespace bct
