#include "fiid/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fiid/core_math.hpp"
#include "fiid/errors.hpp"
#include "fiid/gaussian.hpp"
#include "fiid/graph.hpp"
#include "fiid/obstruction.hpp"
#include "fiid/parallel.hpp"
#include "fiid/partition.hpp"
#include "fiid/processes.hpp"
#include "fiid/seeding.hpp"
#include "fiid/tree.hpp"

namespace fiid::cli {
namespace {

// Substream indices reserved under the master seed.
constexpr std::uint64_t kGraphStream = 1000;
constexpr std::uint64_t kRunStream = 2000;

std::string fixed7(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(7) << x;
  return s.str();
}

template <class T> T value_or(const std::optional<T> &v, T fallback) { return v ? *v : fallback; }

std::string format_or(const ExperimentConfig &c, const char *fallback) {
  return c.format.empty() ? fallback : c.format;
}

void require_format(const std::string &format, std::initializer_list<const char *> allowed) {
  for (const char *a : allowed)
    if (format == a)
      return;
  throw std::domain_error("unsupported --format " + format);
}

Json envelope(const ExperimentConfig &config, Json result) {
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["subcommand"] = config.subcommand;
  report["config"] = config_to_json(config);
  report["result"] = std::move(result);
  return report;
}

void finish_json(Json report, const ExperimentConfig &config, double seconds, std::ostream &out) {
  report["timing"] = {{"wall_seconds", seconds}, {"threads", config.threads}};
  out << report.dump(2) << '\n';
}

/// Graph from --graph-file, else a random d-regular graph on --n vertices.
Graph load_graph(const ExperimentConfig &c, Json &description) {
  if (!c.graph_file.empty()) {
    std::ifstream in(c.graph_file);
    if (!in)
      throw std::domain_error("cannot open graph file " + c.graph_file);
    Graph g = read_edge_list(in);
    description = {{"source", "file"}, {"path", c.graph_file}};
    return g;
  }
  if (!c.n)
    throw std::domain_error("need --graph-file or --n");
  const std::uint64_t graph_seed = derive_substream(*c.seed, kGraphStream);
  Graph g = random_regular(static_cast<std::size_t>(*c.n), c.d, graph_seed);
  description = {{"source", "random_regular"}, {"graph_seed", graph_seed}};
  return g;
}

// ---------------------------------------------------------------------------

Json verify_formulas(const ExperimentConfig &c) {
  const int d = c.d;
  Json r;
  r["d"] = d;
  r["rho_d"] = spectral_radius(d);
  r["min_bisection_bound"] = bisection_bound(d, CutMode::min);
  r["max_bisection_bound"] = bisection_bound(d, CutMode::max);
  r["bound_sum"] = bisection_bound(d, CutMode::min) + bisection_bound(d, CutMode::max);
  r["half_degree"] = d / 2.0;
  Json table = Json::array();
  for (int n : {2, 3, 5, 10, 100, 327}) {
    const double corr = block_factor_correlation(d, n);
    table.push_back({{"n", n},
                     {"correlation", corr},
                     {"edge_cut_bound", sign_flip_probability(corr)},
                     {"required_girth", 2 * n + 1}});
  }
  r["edge_cut"] = table;
  Json decay = Json::array();
  for (int n = 0; n <= 6; ++n)
    decay.push_back({{"n", n}, {"sphere_size", sphere_size(d, n)}, {"cghv_correlation", cghv_correlation(d, n)}});
  r["spheres"] = decay;
  return r;
}

void verify_formulas_csv(const Json &r, std::ostream &out) {
  out << "quantity,value\n";
  out << "rho_d," << fixed7(r["rho_d"]) << '\n';
  out << "min_bisection_bound," << fixed7(r["min_bisection_bound"]) << '\n';
  out << "max_bisection_bound," << fixed7(r["max_bisection_bound"]) << '\n';
  for (const auto &row : r["edge_cut"])
    out << "edge_cut_bound_n" << row["n"].get<int>() << ',' << fixed7(row["edge_cut_bound"]) << '\n';
}

// ---------------------------------------------------------------------------

Json sample_record(const ExperimentConfig &c, const TreeBall &ball, std::uint64_t index) {
  const std::uint64_t seed = derive_substream(*c.seed, index);
  Json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["process"] = c.process;
  rec["d"] = c.d;
  rec["radius"] = ball.radius();
  if (c.theta)
    rec["theta"] = *c.theta;
  rec["index"] = index;
  rec["seed"] = seed;
  Json config;
  auto spins_json = [](const SpinField &s) {
    Json a = Json::array();
    for (auto v : s.values)
      a.push_back(static_cast<int>(v));
    return a;
  };
  auto bytes_json = [](const std::vector<std::uint8_t> &v) {
    Json a = Json::array();
    for (auto x : v)
      a.push_back(static_cast<int>(x));
    return a;
  };
  if (c.process == "mc-direct" || c.process == "mc-cluster") {
    if (!c.theta)
      throw std::domain_error("--theta is required for " + c.process);
    const auto params = MarkovParams::make(c.d, *c.theta);
    config["spins"] = spins_json(c.process == "mc-direct"
                                     ? sample_mc_direct(ball, params, seed)
                                     : sample_mc_cluster(ball, params, sample_uniform_labels(ball, seed)));
  } else if (c.process == "perfect-matching") {
    config["in_matching"] = bytes_json(sample_perfect_matching(ball, seed).in_matching);
  } else if (c.process == "coloring") {
    config["color"] = bytes_json(sample_proper_coloring(ball, seed).color);
  } else if (c.process == "matching-list") {
    const auto list =
        sample_matching_list(ball, sample_uniform_labels(ball, derive_substream(seed, 0)), derive_substream(seed, 1));
    Json matchings = Json::array();
    for (const auto &m : list.matchings)
      matchings.push_back(bytes_json(m.in_matching));
    config["matchings"] = matchings;
    config["q_class"] = bytes_json(list.q_class);
    config["pair_class"] = bytes_json(list.pair_class);
  } else {
    throw std::domain_error("unknown --process " + c.process +
                            " (mc-direct, mc-cluster, perfect-matching, coloring, matching-list)");
  }
  rec["configuration"] = config;
  return rec;
}

// ---------------------------------------------------------------------------

Json obstruct(const ExperimentConfig &c) {
  const int max_n = value_or(c.radius, 6);
  const int n_min = value_or(c.n_min, 1);
  if (n_min < 0 || max_n < n_min)
    throw std::domain_error("need 0 <= --n-min <= --radius");
  std::vector<int> n_values;
  for (int n = n_min; n <= max_n; ++n)
    n_values.push_back(n);

  ObstructionReport report;
  const std::string process = c.process.empty() ? "mc-direct" : c.process;
  if (c.exact) {
    if (!c.theta)
      throw std::domain_error("--exact needs --theta");
    report = mc_exact_report(c.d, *c.theta, n_values);
  } else {
    const int block = value_or(c.block_radius, 3);
    const bool gauss = process == "gauss" || process == "gauss-sign";
    const TreeBall ball(c.d, gauss ? max_n + block - 1 : max_n);
    ConfigurationSampler sampler;
    if (process == "mc-direct" || process == "mc-cluster") {
      if (!c.theta)
        throw std::domain_error("--theta is required for " + process);
      const auto params = MarkovParams::make(c.d, *c.theta);
      sampler = process == "mc-direct" ? mc_direct_sampler(ball, params) : mc_cluster_sampler(ball, params);
    } else if (process == "iid") {
      sampler = iid_spin_sampler(ball);
    } else if (gauss) {
      const auto spec = BlockFactorSpec::make(c.d, block, c.sign == "positive" ? WeightSign::positive
                                                                                : WeightSign::alternating);
      sampler = gauss_block_sampler(ball, spec, process == "gauss-sign");
    } else {
      throw std::domain_error("unknown --process " + process + " (mc-direct, mc-cluster, iid, gauss, gauss-sign)");
    }
    report = sphere_sum_stats(sampler, ball, n_values, static_cast<std::size_t>(value_or<std::int64_t>(c.replicas, 100000)),
                              *c.seed, c.threads);
    report.theta = c.theta;
    report.process = process;
  }
  if (n_values.size() >= 3)
    report.classification = classify(report);

  Json r;
  r["d"] = report.d;
  if (report.theta)
    r["theta"] = *report.theta;
  r["process"] = report.process;
  r["n_values"] = report.n_values;
  r["var_ratio"] = report.var_ratio;
  r["var_ratio_se"] = report.var_ratio_se;
  r["root_corr"] = report.root_corr;
  r["root_corr_se"] = report.root_corr_se;
  r["classification"] = to_string(report.classification);
  return r;
}

void obstruct_csv(const Json &r, std::ostream &out) {
  out << "n,var_ratio,var_ratio_se,root_corr,root_corr_se,classification\n";
  for (std::size_t i = 0; i < r["n_values"].size(); ++i)
    out << r["n_values"][i].get<int>() << ',' << r["var_ratio"][i].get<double>() << ','
        << r["var_ratio_se"][i].get<double>() << ',' << r["root_corr"][i].get<double>() << ','
        << r["root_corr_se"][i].get<double>() << ',' << r["classification"].get<std::string>() << '\n';
}

// ---------------------------------------------------------------------------

double prior_bound(int d, CutMode mode) {
  if (d == 3)
    return mode == CutMode::min ? 1.0 / 6.0 : 1.32595;
  if (d == 4)
    return mode == CutMode::min ? 1.0 / 3.0 : 5.0 / 3.0;
  return std::nan("");
}

Json stage_json(const CutResult &r) {
  return {{"cut_size", r.cut_size}, {"fraction", r.fraction}, {"balance_defect", r.balance_defect}};
}

Json bisect(const ExperimentConfig &c) {
  Json graph_info;
  const Graph g = load_graph(c, graph_info);
  const int radius = value_or(c.radius, 3);
  graph_info["n"] = g.vertex_count();
  graph_info["m"] = g.edge_count();
  graph_info["average_degree"] =
      g.vertex_count() == 0 ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());

  std::vector<CutMode> modes;
  if (c.mode == "min" || c.mode == "both")
    modes.push_back(CutMode::min);
  if (c.mode == "max" || c.mode == "both")
    modes.push_back(CutMode::max);
  if (modes.empty())
    throw std::domain_error("--mode must be min, max or both");

  Json r;
  r["graph"] = graph_info;
  r["d"] = c.d;
  r["radius"] = radius;
  Json runs = Json::array();
  for (CutMode mode : modes) {
    const std::uint64_t run_seed = derive_substream(*c.seed, kRunStream + (mode == CutMode::min ? 0 : 1));
    const BisectionRun run = bisection_heuristic(g, c.d, radius, mode, run_seed, c.max_passes, c.threads);
    Json j;
    j["mode"] = to_string(mode);
    j["seeds"] = {{"run", run_seed}, {"labels", run.label_seed}, {"ties", run.tie_seed}};
    j["stages"] = {{"raw", stage_json(run.raw)},
                   {"rebalanced", stage_json(run.rebalanced)},
                   {"improved", stage_json(run.improved)}};
    j["tree_like_fraction"] = run.tree_like_fraction;
    j["tree_like_edge_fraction"] = run.tree_like_edge_fraction;
    j["predictions"] = {{"edge_flip_probability", run.edge_flip_probability},
                        {"predicted_raw_fraction", run.predicted_raw_fraction},
                        {"asymptotic_bound", run.asymptotic_bound},
                        {"prior_bound", prior_bound(c.d, mode)}};
    runs.push_back(j);
  }
  r["runs"] = runs;
  return r;
}

void bisect_csv(const Json &r, std::ostream &out) {
  out << "mode,stage,cut_size,fraction,balance_defect,radius,n\n";
  for (const auto &run : r["runs"])
    for (const char *stage : {"raw", "rebalanced", "improved"}) {
      const auto &s = run["stages"][stage];
      out << run["mode"].get<std::string>() << ',' << stage << ',' << s["cut_size"].get<std::int64_t>() << ','
          << s["fraction"].get<double>() << ',' << s["balance_defect"].get<std::int64_t>() << ','
          << r["radius"].get<int>() << ',' << r["graph"]["n"].get<std::size_t>() << '\n';
    }
}

// ---------------------------------------------------------------------------

Json edgecut(const ExperimentConfig &c, bool with_edges) {
  const int radius = value_or(c.radius, 3);
  Json r;
  r["d"] = c.d;
  r["radius"] = radius;
  r["correlation"] = block_factor_correlation(c.d, radius);
  r["bound"] = edge_cut_bound(c.d, radius);
  r["required_girth"] = 2 * radius + 1;
  r["note"] = "girth ≥ " + std::to_string(2 * radius + 1) + " required";
  if (c.bound_only)
    return r;

  Json graph_info;
  Graph g;
  if (c.ball_radius && c.graph_file.empty() && !c.n) {
    g = tree_ball_graph(TreeBall(c.d, *c.ball_radius));
    graph_info = {{"source", "tree_ball"}, {"ball_radius", *c.ball_radius}};
  } else {
    g = load_graph(c, graph_info);
  }
  graph_info["n"] = g.vertex_count();
  graph_info["m"] = g.edge_count();
  const auto replicas = static_cast<std::size_t>(value_or<std::int64_t>(c.replicas, 1000));
  const std::uint64_t run_seed = derive_substream(*c.seed, kRunStream);
  const EdgeCutSample s = edge_cut_experiment(g, c.d, radius, replicas, run_seed, c.threads);
  r["graph"] = graph_info;
  r["replicas"] = replicas;
  r["run_seed"] = run_seed;
  if (s.girth)
    r["girth"] = *s.girth;
  else
    r["girth"] = nullptr;
  r["girth_sufficient"] = s.girth_sufficient;
  r["min_frequency"] = s.min_frequency;
  r["mean_frequency"] = s.mean_frequency;
  if (with_edges) {
    Json freq = Json::array();
    for (double f : s.per_edge_frequency)
      freq.push_back(f);
    r["per_edge_frequency"] = freq;
  }
  return r;
}

// ---------------------------------------------------------------------------

void gauss_field(const ExperimentConfig &c, const std::string &format, std::ostream &out, Json &result) {
  const int block = value_or(c.radius, 3);
  const auto spec =
      BlockFactorSpec::make(c.d, block, c.sign == "positive" ? WeightSign::positive : WeightSign::alternating);
  const std::uint64_t label_seed = derive_substream(*c.seed, kRunStream);
  GaussField field;
  if (c.graph_file.empty() && !c.n) {
    const TreeBall ball(c.d, value_or(c.ball_radius, block - 1));
    field = evaluate_on_tree(ball, spec, label_seed);
  } else {
    Json info;
    const Graph g = load_graph(c, info);
    field = emulate_on_graph(g, spec, label_seed, c.threads);
  }
  if (format == "csv") {
    out << "vertex,value,defined\n";
    out << std::setprecision(17);
    for (Eigen::Index v = 0; v < field.values.size(); ++v)
      out << v << ',' << field.values(v) << ',' << static_cast<int>(field.defined_mask[v]) << '\n';
    return;
  }
  result["radius"] = block;
  result["sign"] = to_string(spec.sign);
  result["label_seed"] = label_seed;
  Json values = Json::array();
  Json defined = Json::array();
  for (Eigen::Index v = 0; v < field.values.size(); ++v) {
    values.push_back(field.values(v));
    defined.push_back(static_cast<int>(field.defined_mask[v]));
  }
  result["values"] = values;
  result["defined"] = defined;
}

int dispatch(ExperimentConfig &c, std::ostream &out) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const std::string &cmd = c.subcommand;

  if (cmd == "verify-formulas") {
    const std::string format = format_or(c, "json");
    require_format(format, {"json", "csv"});
    const Json r = verify_formulas(c);
    if (format == "csv")
      verify_formulas_csv(r, out);
    else
      finish_json(envelope(c, r), c, elapsed(), out);
  } else if (cmd == "gen-graph") {
    const std::string format = format_or(c, "edgelist");
    require_format(format, {"edgelist", "json"});
    Json info;
    const Graph g = load_graph(c, info);
    if (format == "edgelist") {
      write_edge_list(out, g);
    } else {
      const auto gi = girth(g);
      info["n"] = g.vertex_count();
      info["m"] = g.edge_count();
      info["d"] = c.d;
      if (gi)
        info["girth"] = *gi;
      else
        info["girth"] = nullptr;
      Json edges = Json::array();
      for (const Edge &e : g.edges())
        edges.push_back({e.u, e.v});
      info["edges"] = edges;
      finish_json(envelope(c, info), c, elapsed(), out);
    }
  } else if (cmd == "sample-process") {
    const std::string format = format_or(c, "json");
    require_format(format, {"json"});
    const TreeBall ball(c.d, value_or(c.radius, 3));
    const auto count = value_or<std::int64_t>(c.replicas, 1);
    if (count < 1)
      throw std::domain_error("--replicas must be positive");
    for (std::int64_t i = 0; i < count; ++i)
      out << sample_record(c, ball, static_cast<std::uint64_t>(i)).dump() << '\n';
    Json trailer = envelope(c, {{"samples", count}});
    trailer["timing"] = {{"wall_seconds", elapsed()}, {"threads", c.threads}};
    out << trailer.dump() << '\n';
  } else if (cmd == "gauss-field") {
    const std::string format = format_or(c, "csv");
    require_format(format, {"csv", "json"});
    Json r;
    gauss_field(c, format, out, r);
    if (format == "json")
      finish_json(envelope(c, r), c, elapsed(), out);
  } else if (cmd == "obstruct") {
    const std::string format = format_or(c, "json");
    require_format(format, {"json", "csv"});
    const Json r = obstruct(c);
    if (format == "csv")
      obstruct_csv(r, out);
    else
      finish_json(envelope(c, r), c, elapsed(), out);
  } else if (cmd == "bisect") {
    const std::string format = format_or(c, "json");
    require_format(format, {"json", "csv"});
    const Json r = bisect(c);
    if (format == "csv")
      bisect_csv(r, out);
    else
      finish_json(envelope(c, r), c, elapsed(), out);
  } else if (cmd == "edgecut") {
    const std::string format = format_or(c, "json");
    require_format(format, {"json", "csv"});
    const Json r = edgecut(c, format == "csv");
    if (format == "csv") {
      out << "edge,frequency\n";
      if (r.contains("per_edge_frequency"))
        for (std::size_t i = 0; i < r["per_edge_frequency"].size(); ++i)
          out << i << ',' << r["per_edge_frequency"][i].get<double>() << '\n';
    } else {
      finish_json(envelope(c, r), c, elapsed(), out);
    }
  } else {
    throw std::domain_error("unknown subcommand: " + cmd);
  }
  return kExitOk;
}

} // namespace

const std::vector<std::string> &subcommands() {
  static const std::vector<std::string> names{"verify-formulas", "gen-graph", "sample-process", "gauss-field",
                                              "obstruct",        "bisect",    "edgecut"};
  return names;
}

Json config_to_json(const ExperimentConfig &c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["d"] = c.d;
  j["radius"] = c.radius ? Json(*c.radius) : Json(nullptr);
  j["theta"] = c.theta ? Json(*c.theta) : Json(nullptr);
  j["n"] = c.n ? Json(*c.n) : Json(nullptr);
  j["replicas"] = c.replicas ? Json(*c.replicas) : Json(nullptr);
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["format"] = c.format;
  j["graph_file"] = c.graph_file;
  j["process"] = c.process;
  j["mode"] = c.mode;
  j["sign"] = c.sign;
  j["n_min"] = c.n_min ? Json(*c.n_min) : Json(nullptr);
  j["ball_radius"] = c.ball_radius ? Json(*c.ball_radius) : Json(nullptr);
  j["block_radius"] = c.block_radius ? Json(*c.block_radius) : Json(nullptr);
  j["max_passes"] = c.max_passes;
  j["bound_only"] = c.bound_only;
  j["exact"] = c.exact;
  return j;
}

ExperimentConfig config_from_json(const Json &j) {
  const Json &src = j.contains("config") && j["config"].is_object() ? j["config"] : j;
  ExperimentConfig c;
  auto opt = [&](const char *key, auto &field) {
    if (src.contains(key) && !src[key].is_null())
      field = src[key].get<typename std::remove_reference_t<decltype(field)>::value_type>();
  };
  auto val = [&](const char *key, auto &field) {
    if (src.contains(key) && !src[key].is_null())
      field = src[key].get<std::remove_reference_t<decltype(field)>>();
  };
  val("subcommand", c.subcommand);
  val("d", c.d);
  opt("radius", c.radius);
  opt("theta", c.theta);
  opt("n", c.n);
  opt("replicas", c.replicas);
  opt("seed", c.seed);
  val("format", c.format);
  val("graph_file", c.graph_file);
  val("process", c.process);
  val("mode", c.mode);
  val("sign", c.sign);
  opt("n_min", c.n_min);
  opt("ball_radius", c.ball_radius);
  opt("block_radius", c.block_radius);
  val("max_passes", c.max_passes);
  val("bound_only", c.bound_only);
  val("exact", c.exact);
  return c;
}

Json strip_timing(Json report) {
  report.erase("timing");
  return report;
}

int run(ExperimentConfig config, std::ostream &out, std::ostream &err) {
  try {
    if (!config.seed)
      config.seed = entropy_seed();
    return dispatch(config, out);
  } catch (const ResourceError &e) {
    err << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::domain_error &e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::logic_error &e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Factor-of-IID simulator on regular trees and graphs", "fiid"};
  ExperimentConfig c;
  std::string config_file;
  app.add_option("subcommand", c.subcommand, "Experiment to run")->check(CLI::IsMember(subcommands()));
  auto *o_config = app.add_option("--config", config_file, "Replay a recorded config (report JSON or its config)");
  auto *o_d = app.add_option("--d", c.d, "Degree");
  auto *o_radius = app.add_option("--radius", c.radius, "Tree ball radius, or block factor radius n");
  auto *o_theta = app.add_option("--theta", c.theta, "Markov chain parameter in [-1, 1]");
  auto *o_n = app.add_option("--n", c.n, "Vertex count of a random regular graph");
  auto *o_replicas = app.add_option("--replicas", c.replicas, "Number of independent replicas or samples");
  auto *o_seed = app.add_option("--seed", c.seed, "Master seed (drawn from entropy and recorded if absent)");
  app.add_option("--out", c.out, "Output file (default: stdout, or $FIID_OUTPUT_DIR)");
  auto *o_format = app.add_option("--format", c.format, "json | csv (edgelist for gen-graph)");
  app.add_option("--threads", c.threads, "Worker threads (0 = hardware parallelism)");
  auto *o_graph = app.add_option("--graph-file", c.graph_file, "Edge-list graph input");
  auto *o_process = app.add_option("--process", c.process, "Process for sample-process / obstruct");
  auto *o_mode = app.add_option("--mode", c.mode, "min | max | both (bisect)");
  auto *o_sign = app.add_option("--sign", c.sign, "positive | alternating block factor weights");
  auto *o_nmin = app.add_option("--n-min", c.n_min, "Smallest sphere radius (obstruct)");
  auto *o_ball = app.add_option("--ball-radius", c.ball_radius, "Tree ball radius (gauss-field, edgecut)");
  auto *o_block = app.add_option("--block-radius", c.block_radius, "Block factor radius (obstruct gauss processes)");
  auto *o_passes = app.add_option("--max-passes", c.max_passes, "Local improvement pass limit (bisect)");
  auto *o_bound = app.add_flag("--bound-only", c.bound_only, "Only evaluate the edge-cut bound (edgecut)");
  auto *o_exact = app.add_flag("--exact", c.exact, "Closed-form Markov chain statistics (obstruct)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }

  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) {
      err << "error: cannot open config file " << config_file << '\n';
      return kExitValidation;
    }
    Json base;
    try {
      base = Json::parse(in);
      Json merged = config_to_json(config_from_json(base));
      const Json given = config_to_json(c);
      const std::pair<CLI::Option *, const char *> overrides[] = {
          {o_d, "d"},           {o_radius, "radius"},   {o_theta, "theta"},         {o_n, "n"},
          {o_replicas, "replicas"}, {o_seed, "seed"},   {o_format, "format"},       {o_graph, "graph_file"},
          {o_process, "process"}, {o_mode, "mode"},     {o_sign, "sign"},           {o_nmin, "n_min"},
          {o_ball, "ball_radius"}, {o_block, "block_radius"}, {o_passes, "max_passes"},
          {o_bound, "bound_only"}, {o_exact, "exact"}};
      for (const auto &[option, key] : overrides)
        if (option->count() > 0)
          merged[key] = given[key];
      if (!c.subcommand.empty())
        merged["subcommand"] = c.subcommand;
      const std::string out_path = c.out;
      const unsigned threads = c.threads;
      c = config_from_json(merged);
      c.out = out_path;
      c.threads = threads;
    } catch (const nlohmann::json::exception &e) {
      err << "error: bad config file: " << e.what() << '\n';
      return kExitValidation;
    }
  }
  (void)o_config;

  if (c.subcommand.empty()) {
    err << "usage error: a subcommand is required\n" << app.help();
    return kExitValidation;
  }
  if (c.threads == 0)
    c.threads = default_thread_count();

  std::string path = c.out;
  if (path.empty())
    if (const char *dir = std::getenv(kOutputDirEnv); dir && *dir) {
      if (!c.seed)
        c.seed = entropy_seed();
      const std::string ext = c.format.empty() ? (c.subcommand == "gen-graph" ? "txt" : c.subcommand == "gauss-field" ? "csv" : "json")
                                               : (c.format == "edgelist" ? "txt" : c.format);
      path = (std::filesystem::path(dir) / (c.subcommand + "-" + std::to_string(*c.seed) + "." + ext)).string();
    }
  if (path.empty())
    return run(c, out, err);
  std::ofstream file(path);
  if (!file) {
    err << "error: cannot write " << path << '\n';
    return kExitValidation;
  }
  return run(c, file, err);
}

} // namespace fiid::cli
