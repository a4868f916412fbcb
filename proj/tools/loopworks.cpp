// loopworks command line: analyze / lerw / ust / soup / verify over chain and
// graph json files. Reports are machine readable and reproducible: the seed
// defaults to a fixed constant and every report embeds its config.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "loopworks/acceptance.hpp"
#include "loopworks/fixtures.hpp"
#include "loopworks/io.hpp"
#include "loopworks/lerw.hpp"
#include "loopworks/linops.hpp"
#include "loopworks/soup.hpp"
#include "loopworks/wilson.hpp"

namespace {

using namespace loopworks;

struct RunConfig {
  std::string command;
  std::string chain_path;
  std::string start;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t samples = 0;
  double t = 1.0;
  std::string format = "json";
  std::string output;
};

void emit(const RunConfig& config, const std::string& text) {
  if (config.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.output, std::ios::binary);
  if (!out) fail(ErrorCode::UsageError, "cannot write '" + config.output + "'");
  out << text;
}

// Leading comment line so csv reports also carry their config and seed.
std::string csv_header(const RunConfig& config) {
  std::ostringstream head;
  head << "# command=" << config.command;
  if (!config.chain_path.empty()) head << " chain=" << config.chain_path;
  if (!config.start.empty()) head << " start=" << config.start;
  head << " seed=" << config.seed;
  if (config.samples > 0) head << " samples=" << config.samples;
  if (config.command == "soup") head << " t=" << format_double(config.t);
  head << "\n";
  return head.str();
}

Json config_json(const RunConfig& config) {
  Json j;
  j["command"] = config.command;
  if (!config.chain_path.empty()) j["chain"] = config.chain_path;
  if (!config.start.empty()) j["start"] = config.start;
  j["seed"] = config.seed;
  if (config.samples > 0) j["samples"] = config.samples;
  if (config.command == "soup") j["t"] = config.t;
  return j;
}

int pick_start(const ChainSpec& chain, const std::string& name) {
  if (name.empty()) {
    if (chain.interior().empty()) fail(ErrorCode::DomainError, "chain has no interior");
    return chain.interior().front();
  }
  const int s = chain.index_of(name);
  if (!chain.is_interior(s)) fail(ErrorCode::DomainError, "start must be interior");
  return s;
}

int run_analyze(const RunConfig& config) {
  const ChainSpec chain = load_chain_file(config.chain_path);
  const GreensBundle bundle = greens_bundle(chain);
  const PoissonKernel kernel = poisson_kernel(chain);

  if (config.format == "csv") {
    std::ostringstream out;
    out << csv_header(config);
    out << "# laplacian\n";
    write_matrix_csv(out, bundle.laplacian);
    out << "# greens\n";
    write_matrix_csv(out, bundle.greens);
    out << "# poisson_kernel\n";
    write_matrix_csv(out, kernel.h);
    out << "# det_greens," << format_double(bundle.det_greens) << '\n';
    out << "# log_det_greens," << format_double(bundle.log_det_greens) << '\n';
    out << "# det_laplacian," << format_double(bundle.det_laplacian) << '\n';
    for (int x : chain.interior()) {
      out << "# f," << chain.label(x) << ',' << format_double(elementary_mass(chain, x))
          << '\n';
    }
    emit(config, out.str());
    return 0;
  }

  Json report;
  report["config"] = config_json(config);
  report["laplacian"] = matrix_to_json(chain, bundle.interior_order, bundle.laplacian);
  report["greens"] = matrix_to_json(chain, bundle.interior_order, bundle.greens);
  report["det_greens"] = bundle.det_greens;
  report["log_det_greens"] = bundle.log_det_greens;
  report["det_laplacian"] = bundle.det_laplacian;
  report["log_det_laplacian"] = -bundle.log_det_greens;
  report["poisson_kernel"] = matrix_to_json(chain, kernel.boundary_order, kernel.h);
  Json f_table = Json::object();
  for (int x : chain.interior()) f_table[chain.label(x)] = elementary_mass(chain, x);
  report["elementary_mass"] = std::move(f_table);
  emit(config, report.dump(2) + "\n");
  return 0;
}

int run_lerw(const RunConfig& config) {
  const ChainSpec chain = load_chain_file(config.chain_path);
  const int start = pick_start(chain, config.start);

  Json report;
  report["config"] = config_json(config);

  bool have_exact = false;
  LerwDistribution exact;
  if (chain.n_interior() <= 12) {
    exact = enumerate_lerw(chain, start);
    have_exact = true;
    report["exact"] = lerw_distribution_to_json(chain, exact);
  }

  if (config.samples > 0) {
    const ChainSpec* chain_ptr = &chain;
    const auto emp = empirical<Path>(config.samples, config.seed, [chain_ptr, start](Rng& rng) {
      return sample_lerw(*chain_ptr, start, rng).saw;
    });
    Json empirical_json = Json::array();
    for (const auto& [saw, count] : emp.counts) {
      Json entry;
      entry["saw"] = path_to_json(chain, saw);
      entry["count"] = count;
      empirical_json.push_back(std::move(entry));
    }
    report["empirical"] = std::move(empirical_json);
    if (have_exact) {
      std::map<Path, double> reference;
      for (const auto& [saw, p] : exact.entries) reference[saw] = p;
      report["tv_empirical_vs_exact"] = total_variation(emp, reference);
    }
  }

  if (config.format == "csv") {
    std::ostringstream out;
    out << csv_header(config) << "saw,p\n";
    if (have_exact) {
      for (const auto& [saw, p] : exact.entries) {
        for (std::size_t i = 0; i < saw.size(); ++i) out << (i ? " " : "") << chain.label(saw[i]);
        out << ',' << format_double(p) << '\n';
      }
    }
    emit(config, out.str());
    return 0;
  }
  emit(config, report.dump(2) + "\n");
  return 0;
}

int run_ust(const RunConfig& config) {
  const Graph graph = load_graph_file(config.chain_path);
  int root = 0;
  if (!config.start.empty()) {
    root = -1;
    for (int v = 0; v < graph.n_vertices(); ++v) {
      if (graph.vertices[static_cast<std::size_t>(v)] == config.start) root = v;
    }
    if (root < 0) fail(ErrorCode::UnknownState, "root '" + config.start + "'");
  }

  Json report;
  report["config"] = config_json(config);
  report["count_matrix_tree"] = count_spanning_trees(graph, root);
  report["tree_probability"] = tree_probability(graph, root);
  if (graph.n_vertices() <= 8) {
    report["count_enumerated"] =
        static_cast<std::int64_t>(enumerate_spanning_trees(graph).size());
  }

  std::map<std::string, std::int64_t> counts;
  Json sampled = Json::array();
  if (config.samples > 0) {
    const Graph* graph_ptr = &graph;
    const auto emp = empirical<std::string>(config.samples, config.seed,
                                            [graph_ptr, root](Rng& rng) {
                                              return tree_key(wilson_ust(*graph_ptr, root, {}, rng));
                                            });
    counts = emp.counts;
    report["distinct_trees_observed"] = static_cast<std::int64_t>(counts.size());
    double max_dev = 0.0;
    if (report.contains("count_enumerated")) {
      const double uniform = 1.0 / report["count_enumerated"].get<double>();
      for (const auto& [key, count] : counts) {
        max_dev = std::max(max_dev, std::abs(static_cast<double>(count) /
                                                 static_cast<double>(config.samples) -
                                             uniform));
      }
      report["max_frequency_deviation"] = max_dev;
    }
    for (const auto& [key, count] : counts) {
      Json entry;
      entry["tree"] = key;
      entry["count"] = count;
      sampled.push_back(std::move(entry));
    }
    report["sampled"] = std::move(sampled);
  } else {
    Rng rng = derive_stream(config.seed, 0);
    report["tree"] = tree_to_json(graph, wilson_ust(graph, root, {}, rng));
  }

  if (config.format == "csv") {
    std::ostringstream out;
    out << csv_header(config) << "tree,count\n";
    for (const auto& [key, count] : counts) out << key << ',' << count << '\n';
    emit(config, out.str());
    return 0;
  }
  emit(config, report.dump(2) + "\n");
  return 0;
}

int run_soup(const RunConfig& config) {
  const ChainSpec chain = load_chain_file(config.chain_path);

  if (config.format == "csv") {
    // Measure table for the rooted flavor.
    std::ostringstream out;
    out << csv_header(config);
    const int len = chain.n_interior() <= 3 ? 20 : 12;
    write_measure_csv(out, chain, SoupFlavor::Rooted, len);
    emit(config, out.str());
    return 0;
  }

  Json report;
  report["config"] = config_json(config);
  report["empty_soup_prob"] = empty_soup_prob(chain, config.t);
  report["log_det_greens"] = chain.greens().log_det_greens();

  if (chain.n_interior() <= 6) {
    Json visits = Json::array();
    for (int x : chain.interior()) {
      for (int w : chain.interior()) {
        if (x == w) continue;
        const SiteVisitStats stats = site_visit_stats(chain, x, w, config.t);
        Json entry;
        entry["site"] = chain.label(x);
        entry["visits"] = chain.label(w);
        entry["visit_prob"] = stats.visit_prob;
        entry["expected_count"] = stats.expected_count;
        visits.push_back(std::move(entry));
      }
    }
    report["site_visit_stats"] = std::move(visits);
  }

  const std::int64_t reps = std::max<std::int64_t>(config.samples, 1);
  Rng rng = derive_stream(config.seed, 0);
  Json realizations = Json::array();
  std::int64_t empty = 0;
  double loop_total = 0.0;
  for (std::int64_t i = 0; i < reps; ++i) {
    const SoupRealization soup = sample_rooted_soup(chain, config.t, rng);
    if (soup.loops.empty()) ++empty;
    loop_total += static_cast<double>(soup.loops.size());
    if (i < 5) realizations.push_back(soup_to_json(chain, soup));
  }
  report["realizations"] = std::move(realizations);
  report["n_realizations"] = reps;
  report["empty_fraction"] = static_cast<double>(empty) / static_cast<double>(reps);
  report["mean_loop_count"] = loop_total / static_cast<double>(reps);
  emit(config, report.dump(2) + "\n");
  return 0;
}

int run_verify(const RunConfig& config) {
  std::ostringstream log;
  const auto results = run_acceptance_suite(config.seed, log);

  if (config.format == "csv") {
    std::ostringstream out;
    out << csv_header(config) << "check,statistic,threshold,pass,N,seed\n";
    for (const auto& criterion : results) {
      for (const auto& check : criterion.checks) {
        out << '"' << std::to_string(criterion.id) << ". " << check.name << '"' << ','
            << format_double(check.statistic) << ',' << format_double(check.threshold) << ','
            << (check.pass ? "true" : "false") << ',' << check.n << ',' << check.seed << '\n';
      }
    }
    emit(config, out.str());
  } else {
    Json report;
    report["config"] = config_json(config);
    report["log"] = log.str();
    Json checks = Json::array();
    for (const auto& criterion : results) {
      for (const auto& check : criterion.checks) {
        Json j = check_to_json(check);
        j["criterion"] = criterion.id;
        checks.push_back(std::move(j));
      }
    }
    report["checks"] = std::move(checks);
    report["pass"] = all_pass(results);
    emit(config, report.dump(2) + "\n");
  }
  std::cerr << log.str();
  return all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"killed Markov chains, loop-erased walks, spanning trees, and loop soups"};
  app.require_subcommand(1);

  RunConfig config;

  auto add_common = [&config](CLI::App* cmd, bool with_chain, bool with_samples) {
    if (with_chain) {
      cmd->add_option("--chain", config.chain_path, "chain or graph json file")->required();
    }
    if (with_samples) cmd->add_option("--samples", config.samples, "number of draws");
    cmd->add_option("--seed", config.seed, "64-bit master seed");
    cmd->add_option("--format", config.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", config.output, "write the report to this path");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Laplacian, Green's function, exit kernel");
  add_common(analyze, true, false);

  CLI::App* lerw = app.add_subcommand("lerw", "loop-erased walk distributions");
  add_common(lerw, true, true);
  lerw->add_option("--start", config.start, "interior start state");

  CLI::App* ust = app.add_subcommand("ust", "uniform spanning trees via successive erasures");
  add_common(ust, true, true);
  ust->add_option("--start", config.start, "root vertex");

  CLI::App* soup = app.add_subcommand("soup", "Poissonian loop soups");
  add_common(soup, true, true);
  soup->add_option("--t", config.t, "soup time parameter");

  CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
  add_common(verify, false, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      config.command = "analyze";
      return run_analyze(config);
    }
    if (lerw->parsed()) {
      config.command = "lerw";
      return run_lerw(config);
    }
    if (ust->parsed()) {
      config.command = "ust";
      return run_ust(config);
    }
    if (soup->parsed()) {
      config.command = "soup";
      return run_soup(config);
    }
    if (verify->parsed()) {
      config.command = "verify";
      return run_verify(config);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
