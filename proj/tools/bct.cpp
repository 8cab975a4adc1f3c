#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bct/datasets.hpp"
#include "bct/experiment.hpp"
#include "bct/ground_truth.hpp"
#include "bct/insert.hpp"
#include "bct/invariants.hpp"
#include "bct/io.hpp"
#include "bct/nn_graph.hpp"
#include "bct/remove.hpp"
#include "bct/search.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

struct Common {
  std::string input;
  std::string tree;
  std::string out;
  std::string oracle = "exact";
  double sigma = 1.0;
  std::size_t subsample_len = 0;
  std::uint64_t seed = 0;
  double delta = 0.1;
  std::optional<double> epsilon;
  std::optional<double> expansion_bound;
  std::uint64_t t_max = bct::kDefaultPullCap;
  bool lt_variant = false;

  bct::OracleConfig oracle_config() const {
    return {bct::parse_oracle_kind(oracle), sigma, subsample_len, seed};
  }
  bct::BanditOptions bandit() const { return {t_max, lt_variant, {}}; }
};

void add_oracle_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--oracle", c.oracle, "exact, gaussian or subsample")
      ->check(CLI::IsMember({"exact", "gaussian", "subsample"}));
  cmd->add_option("--sigma", c.sigma, "noise scale of the oracle");
  cmd->add_option("--subsample-len", c.subsample_len, "coordinates per subsample query (0 = all)");
  cmd->add_option("--seed", c.seed, "oracle seed");
  cmd->add_option("--delta", c.delta, "failure probability");
  cmd->add_option("--t-max", c.t_max, "per-pair pull cap");
  cmd->add_flag("--lt-variant", c.lt_variant, "identify-cover lower threshold without the slack term");
}

std::shared_ptr<const bct::PointSet> load(const std::string& path) {
  return std::make_shared<const bct::PointSet>(bct::io::load_points(path));
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

ordered_json report_json(const bct::RunReport& r) {
  ordered_json levels = ordered_json::array();
  for (const auto& t : r.per_level) {
    levels.push_back({{"level", t.level},
                      {"candidates", t.candidates},
                      {"kept", t.kept},
                      {"oracle_calls", t.oracle_calls}});
  }
  return {{"total_oracle_calls", r.total_oracle_calls},
          {"outcome", bct::to_string(r.outcome)},
          {"per_level", levels}};
}

int cmd_gen_data(const std::string& kind, std::size_t n, std::size_t dim, std::uint64_t seed,
                 const bct::DatasetParams& params, const std::string& out) {
  const auto points = bct::generate_dataset(bct::parse_dataset_kind(kind), n, dim, params, seed);
  if (out.empty() || out == "-") {
    bct::io::write_points_ndjson(std::cout, points);
  } else {
    bct::io::save_points(out, points);
  }
  return 0;
}

int cmd_build(const Common& c, std::optional<std::size_t> count) {
  const auto points = load(c.input);
  const std::size_t n = count.value_or(points->size());
  if (n == 0 || n > points->size()) throw std::invalid_argument("--count must lie in [1, #points]");
  auto oracle = bct::make_oracle(c.oracle_config(), points);
  const auto built = bct::build(n, c.delta, *oracle, c.bandit());
  std::ofstream file;
  bct::io::write_tree(output(c.out, file), built.tree);
  std::cerr << ordered_json{{"n", n},
                            {"i_top", built.tree.top_level()},
                            {"i_bottom", built.tree.bottom_level()},
                            {"total_oracle_calls", built.report.total_oracle_calls},
                            {"outcome", bct::to_string(built.report.outcome)}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_query(const Common& c, const std::string& queries_path, bool trace) {
  auto universe = std::make_shared<bct::PointSet>(bct::io::load_points(c.input));
  const bct::PointSet queries = bct::io::load_points(queries_path);
  const auto base = static_cast<bct::PointId>(universe->size());
  universe->append(queries);
  const bct::CoverTree tree = bct::io::load_tree(c.tree);
  auto oracle = bct::make_oracle(c.oracle_config(), universe);

  bct::SearchConfig config;
  config.delta = c.delta;
  config.expansion_bound = c.expansion_bound;
  config.epsilon_approx = c.epsilon;
  config.lt_variant = c.lt_variant;
  config.t_max = c.t_max;

  std::ofstream file;
  std::ostream& out = output(c.out, file);
  for (bct::PointId k = 0; k < queries.size(); ++k) {
    const bct::PointId q = base + k;
    const auto found = c.epsilon ? bct::find_nearest_approx(tree, q, config, *oracle)
                                 : bct::find_nearest(tree, q, config, *oracle);
    ordered_json line = {{"query", k}, {"nn", found.nn}};
    if (found.exit_level) line["exit_level"] = *found.exit_level;
    auto rep = report_json(found.report);
    line["total_oracle_calls"] = rep["total_oracle_calls"];
    line["outcome"] = rep["outcome"];
    if (trace) line["per_level"] = rep["per_level"];
    out << line.dump() << '\n';
  }
  return 0;
}

int cmd_insert(const Common& c, bct::PointId point) {
  const auto points = load(c.input);
  bct::CoverTree tree = bct::io::load_tree(c.tree);
  auto oracle = bct::make_oracle(c.oracle_config(), points);
  bct::SampleLedger ledger;
  const double delta = c.delta / static_cast<double>(tree.size() + 1);
  const auto r = bct::insert(tree, point, delta, *oracle, ledger, c.bandit());
  std::ofstream file;
  bct::io::write_tree(output(c.out, file), tree);
  ordered_json info = {{"point", point}, {"level", r.level}, {"oracle_calls", r.oracle_calls},
                       {"capped", r.capped}};
  info["parent"] = r.parent ? ordered_json(*r.parent) : ordered_json(nullptr);
  std::cerr << info.dump() << '\n';
  return 0;
}

int cmd_remove(const Common& c, bct::PointId point) {
  const auto points = load(c.input);
  bct::CoverTree tree = bct::io::load_tree(c.tree);
  auto oracle = bct::make_oracle(c.oracle_config(), points);
  bct::SampleLedger ledger;
  const auto r = bct::remove(tree, point, c.delta, *oracle, ledger, c.bandit());
  std::ofstream file;
  bct::io::write_tree(output(c.out, file), tree);
  ordered_json info = {{"point", point}, {"promotions", r.promotions},
                       {"oracle_calls", r.oracle_calls}, {"capped", r.capped}};
  info["new_root"] = r.new_root ? ordered_json(*r.new_root) : ordered_json(nullptr);
  std::cerr << info.dump() << '\n';
  return 0;
}

int cmd_nn_graph(const Common& c) {
  const auto points = load(c.input);
  auto oracle = bct::make_oracle(c.oracle_config(), points);
  const auto result = bct::build_nn_graph(points->size(), c.delta, *oracle,
                                          {c.expansion_bound, c.lt_variant, c.t_max});
  std::ofstream file;
  std::ostream& out = output(c.out, file);
  if (c.out.size() > 4 && c.out.ends_with(".csv")) {
    bct::io::write_graph_csv(out, result.graph);
  } else {
    bct::io::write_graph_ndjson(out, result.graph);
  }
  std::cerr << ordered_json{{"build_calls", result.build_calls},
                            {"query_calls", result.query_calls},
                            {"outcome", bct::to_string(result.report.outcome)}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path, const Common& c, const CLI::App* cmd) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open " + config_path);
  std::stringstream text;
  text << in.rdbuf();
  auto spec = bct::ExperimentSpec::from_json(text.str());
  if (cmd->count("--seed")) spec.seed = c.seed;
  if (cmd->count("--out")) spec.output = c.out;
  if (cmd->count("--delta")) spec.delta = c.delta;
  if (cmd->count("--t-max")) spec.t_max = c.t_max;
  if (cmd->count("--epsilon")) spec.epsilon = c.epsilon;
  if (cmd->count("--expansion-bound")) spec.expansion_bound = c.expansion_bound;
  if (c.lt_variant) spec.lt_variant = true;
  const auto result = bct::run_experiment(spec);
  std::cout << bct::summary_to_json(result.summary) << '\n';
  return 0;
}

int cmd_check(const Common& c) {
  const auto points = load(c.input);
  const bct::CoverTree tree = bct::io::load_tree(c.tree);
  const auto metric = bct::surrogate_metric(c.oracle_config(), points);
  const auto report = bct::check_invariants(tree, *metric);
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"kind", bct::to_string(v.kind)}, {"a", v.a}, {"b", v.b},
                          {"level", v.level}, {"detail", v.detail}});
  }
  std::cout << ordered_json{{"ok", report.ok}, {"n", tree.size()},
                            {"explicit_nodes", tree.explicit_node_count()},
                            {"violations", violations}}
                   .dump()
            << '\n';
  return report.ok ? 0 : 1;
}

int cmd_expansion(const Common& c) {
  const auto points = load(c.input);
  std::cout << bct::io::format_double(bct::estimate_expansion_constant(*points)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cover trees over a noisy distance oracle"};
  app.require_subcommand(1);
  Common c;

  auto* gen = app.add_subcommand("gen-data", "generate a synthetic point set");
  std::string kind = "uniform-cube";
  std::size_t n = 64, dim = 2;
  std::uint64_t data_seed = 1;
  bct::DatasetParams params;
  gen->add_option("--kind", kind, "uniform-cube, gaussian-mixture, line, two-clusters, low-dim-subspace");
  gen->add_option("--n", n, "number of points");
  gen->add_option("--dim", dim, "ambient dimension");
  gen->add_option("--seed", data_seed, "generator seed");
  gen->add_option("--scale", params.scale);
  gen->add_option("--spacing", params.spacing);
  gen->add_option("--components", params.components);
  gen->add_option("--center-spread", params.center_spread);
  gen->add_option("--component-std", params.component_std);
  gen->add_option("--separation", params.separation);
  gen->add_option("--radius", params.radius);
  gen->add_option("--intrinsic-dim", params.intrinsic_dim);
  gen->add_option("--out", c.out, "output file (.csv or .ndjson); stdout if omitted");

  auto* build = app.add_subcommand("build", "build a cover tree over every input point");
  std::optional<std::size_t> count;
  build->add_option("--input", c.input, "point file")->required();
  build->add_option("--count", count, "only use the first COUNT points");
  build->add_option("--out", c.out, "tree file; stdout if omitted");
  add_oracle_flags(build, c);

  auto* query = app.add_subcommand("query", "nearest-neighbor queries against a stored tree");
  std::string queries_path;
  bool trace = false;
  query->add_option("--input", c.input, "point file the tree was built on")->required();
  query->add_option("--tree", c.tree, "tree file")->required();
  query->add_option("--queries", queries_path, "file of query points")->required();
  query->add_option("--epsilon", c.epsilon, "return a (1 + epsilon)-approximate neighbor");
  query->add_option("--expansion-bound", c.expansion_bound, "known bound on the expansion constant");
  query->add_flag("--trace", trace, "include the per-level trace");
  query->add_option("--out", c.out, "NDJSON results; stdout if omitted");
  add_oracle_flags(query, c);

  bct::PointId point = 0;
  auto* insert = app.add_subcommand("insert", "insert one input point into a stored tree");
  insert->add_option("--input", c.input, "point file")->required();
  insert->add_option("--tree", c.tree, "tree file")->required();
  insert->add_option("--point", point, "index of the point to insert")->required();
  insert->add_option("--out", c.out, "updated tree; stdout if omitted");
  add_oracle_flags(insert, c);

  auto* remove = app.add_subcommand("remove", "remove one point from a stored tree");
  remove->add_option("--input", c.input, "point file")->required();
  remove->add_option("--tree", c.tree, "tree file")->required();
  remove->add_option("--point", point, "index of the point to remove")->required();
  remove->add_option("--out", c.out, "updated tree; stdout if omitted");
  add_oracle_flags(remove, c);

  auto* graph = app.add_subcommand("nn-graph", "nearest-neighbor graph of the input points");
  graph->add_option("--input", c.input, "point file")->required();
  graph->add_option("--expansion-bound", c.expansion_bound, "known bound on the expansion constant");
  graph->add_option("--out", c.out, "edge list (.csv or NDJSON); stdout if omitted");
  add_oracle_flags(graph, c);

  auto* bench = app.add_subcommand("bench", "run a seeded experiment from a JSON config");
  std::string config_path;
  bench->add_option("--config", config_path, "experiment config")->required();
  bench->add_option("--out", c.out, "NDJSON report path (overrides the config)");
  bench->add_option("--epsilon", c.epsilon);
  bench->add_option("--expansion-bound", c.expansion_bound);
  add_oracle_flags(bench, c);

  auto* check = app.add_subcommand("check", "verify tree invariants with exact distances");
  check->add_option("--input", c.input, "point file")->required();
  check->add_option("--tree", c.tree, "tree file")->required();
  check->add_option("--oracle", c.oracle, "oracle whose dissimilarity the tree was built on")
      ->check(CLI::IsMember({"exact", "gaussian", "subsample"}));
  check->add_option("--subsample-len", c.subsample_len);

  auto* expansion = app.add_subcommand("expansion", "estimate the expansion constant");
  expansion->add_option("--input", c.input, "point file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_data(kind, n, dim, data_seed, params, c.out);
    if (*build) return cmd_build(c, count);
    if (*query) return cmd_query(c, queries_path, trace);
    if (*insert) return cmd_insert(c, point);
    if (*remove) return cmd_remove(c, point);
    if (*graph) return cmd_nn_graph(c);
    if (*bench) return cmd_bench(config_path, c, bench);
    if (*check) return cmd_check(c);
    if (*expansion) return cmd_expansion(c);
  } catch (const std::exception& e) {
    std::cerr << "bct: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
