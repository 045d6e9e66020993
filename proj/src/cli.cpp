#include "expdecomp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "expdecomp/decomposition.hpp"
#include "expdecomp/generators.hpp"
#include "expdecomp/report.hpp"
#include "expdecomp/verify.hpp"

namespace expdecomp {

namespace {

LoadedGraph load_graph_file(const std::string& path) {
  if (path == "-") return load_edge_list(std::cin);
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open input file: " + path);
  return load_edge_list(f);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << text;
}

std::string partition_tsv(const LoadedGraph& lg, const Partition& p) {
  std::ostringstream out;
  for (Vertex v = 0; v < lg.graph.num_vertices(); ++v) out << lg.labels[v] << '\t' << p.cluster_of[v] << '\n';
  return out.str();
}

// Brute-force phi/6 audit of every small cluster plus an independent error
// recount. Returns a failure list (empty = pass).
std::vector<std::string> audit_partition(const Graph& g, const std::vector<int32_t>& cluster_of,
                                         const std::vector<std::vector<Vertex>>& clusters, double phi,
                                         int64_t reported_error) {
  std::vector<std::string> failures;
  int64_t err = 0;
  for (const Edge& e : g.edges())
    if (cluster_of[e.u] != cluster_of[e.v]) ++err;
  if (reported_error >= 0 && err != reported_error)
    failures.push_back("error recount mismatch: " + std::to_string(err) + " vs " + std::to_string(reported_error));
  for (size_t i = 0; i < clusters.size(); ++i) {
    const auto& members = clusters[i];
    if (members.size() < 2 || static_cast<int>(members.size()) > 20) continue;
    InducedSubgraph sub = induced_subgraph(g, VertexSet(g, members));
    ExpansionReport rep = brute_force_expansion(sub.graph, phi / 6.0);
    if (!rep.is_expander)
      failures.push_back("cluster " + std::to_string(i) + " fails the phi/6 expansion check (" +
                         std::to_string(rep.phi_num) + "/" + std::to_string(rep.phi_den) + ")");
  }
  return failures;
}

int cmd_decompose(const std::string& input, double phi, uint64_t seed, const std::string& out_path,
                  const std::string& report_path, int threads, bool verify) {
  LoadedGraph lg;
  try {
    lg = load_graph_file(input);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }

  RunReport rep;
  rep.n = lg.graph.num_vertices();
  rep.m = lg.graph.num_edges();
  rep.phi = phi;
  rep.seed = seed;
  rep.threads = threads;

  auto t0 = std::chrono::steady_clock::now();
  DecompOptions opts;
  opts.threads = threads;
  opts.counters = &rep.counters;
  Partition p = compute_exp_decomp(lg.graph, phi, seed, opts);
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.clusters = static_cast<int64_t>(p.clusters.size());
  rep.error_edges = p.error_edges;
  rep.error_fraction = rep.m > 0 ? static_cast<double>(p.error_edges) / static_cast<double>(rep.m) : 0.0;

  write_text(out_path, partition_tsv(lg, p));
  if (!report_path.empty()) write_text(report_path, report_to_json(rep));

  if (verify) {
    std::vector<std::vector<Vertex>> clusters;
    for (const auto& c : p.clusters) clusters.push_back(c.vertices());
    auto failures = audit_partition(lg.graph, p.cluster_of, clusters, phi, p.error_edges);
    for (const auto& f : failures) std::cerr << "verification failure: " << f << "\n";
    if (!failures.empty()) return 2;
  }
  return 0;
}

int cmd_verify(const std::string& partition_path, const std::string& graph_path, double phi) {
  LoadedGraph lg;
  try {
    lg = load_graph_file(graph_path);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }
  std::ifstream pf(partition_path);
  if (!pf) {
    std::cerr << "input error: cannot open partition file: " << partition_path << "\n";
    return 1;
  }
  std::map<std::string, Vertex> label_to_id;
  for (Vertex v = 0; v < lg.graph.num_vertices(); ++v) label_to_id[lg.labels[v]] = v;

  std::vector<int32_t> cluster_of(lg.graph.num_vertices(), -1);
  std::map<int64_t, int32_t> cluster_ids;
  std::vector<std::vector<Vertex>> clusters;
  std::string line;
  int lineno = 0;
  while (std::getline(pf, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string label;
    int64_t cid;
    if (!(ls >> label)) continue;
    if (label[0] == '#') continue;
    if (!(ls >> cid)) {
      std::cerr << "partition parse error at line " << lineno << "\n";
      return 1;
    }
    auto it = label_to_id.find(label);
    if (it == label_to_id.end()) {
      std::cerr << "partition names unknown vertex '" << label << "'\n";
      return 1;
    }
    if (cluster_of[it->second] != -1) {
      std::cerr << "vertex '" << label << "' assigned twice\n";
      return 1;
    }
    auto [cit, fresh] = cluster_ids.emplace(cid, static_cast<int32_t>(clusters.size()));
    if (fresh) clusters.emplace_back();
    cluster_of[it->second] = cit->second;
    clusters[cit->second].push_back(it->second);
  }
  for (Vertex v = 0; v < lg.graph.num_vertices(); ++v) {
    if (cluster_of[v] == -1) {
      std::cerr << "vertex '" << lg.labels[v] << "' missing from partition\n";
      return 1;
    }
  }

  auto failures = audit_partition(lg.graph, cluster_of, clusters, phi, -1);
  int64_t err = 0;
  for (const Edge& e : lg.graph.edges())
    if (cluster_of[e.u] != cluster_of[e.v]) ++err;

  nlohmann::ordered_json j;
  j["ok"] = failures.empty();
  j["n"] = lg.graph.num_vertices();
  j["m"] = lg.graph.num_edges();
  j["clusters"] = clusters.size();
  j["error_edges"] = err;
  j["failures"] = failures;
  std::cout << j.dump(2) << "\n";
  return failures.empty() ? 0 : 2;
}

int cmd_gen(const std::string& kind, int k, int s, int n, int d, uint64_t seed, const std::string& out_path) {
  Graph g;
  std::ostringstream header;
  if (kind == "ring-of-cliques") {
    g = gen_ring_of_cliques(k, s);
    header << "ring-of-cliques k=" << k << " s=" << s;
  } else if (kind == "dumbbell") {
    g = gen_dumbbell(s);
    header << "dumbbell s=" << s;
  } else if (kind == "path") {
    g = gen_path(n);
    header << "path n=" << n;
  } else if (kind == "random-regular") {
    g = gen_random_regular(n, d, seed);
    header << "random-regular n=" << n << " d=" << d << " seed=" << seed;
  } else {
    std::cerr << "unknown generator kind: " << kind << "\n";
    return 1;
  }
  write_text(out_path, to_edge_list_text(g, header.str()));
  return 0;
}

struct BenchRow {
  std::string graph;
  Graph g;
};

int cmd_bench(const std::string& suite, const std::string& phis_csv, const std::string& sizes_csv, uint64_t seed,
              const std::string& csv_path) {
  std::vector<double> phis;
  {
    std::istringstream ss(phis_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      double p = std::stod(tok);
      if (!(p > 0.0 && p < 1.0)) {
        std::cerr << "bench: phi out of range: " << tok << "\n";
        return 1;
      }
      phis.push_back(p);
    }
  }
  if (phis.empty()) {
    std::cerr << "bench: no phi values\n";
    return 1;
  }
  std::vector<std::string> sizes;
  {
    std::istringstream ss(sizes_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) sizes.push_back(tok);
    }
  }

  auto parse_pair = [](const std::string& tok) {
    auto x = tok.find('x');
    if (x == std::string::npos) throw std::invalid_argument("expected AxB size, got " + tok);
    return std::pair<int, int>(std::stoi(tok.substr(0, x)), std::stoi(tok.substr(x + 1)));
  };

  std::vector<BenchRow> rows;
  try {
    if (suite == "ring") {
      if (sizes.empty()) sizes = {"8x8"};
      for (const auto& t : sizes) {
        auto [k, s] = parse_pair(t);
        rows.push_back({"ring-" + t, gen_ring_of_cliques(k, s)});
      }
    } else if (suite == "dumbbell") {
      if (sizes.empty()) sizes = {"4", "6", "8"};
      for (const auto& t : sizes) rows.push_back({"dumbbell-" + t, gen_dumbbell(std::stoi(t))});
    } else if (suite == "random-regular") {
      if (sizes.empty()) sizes = {"32x3"};
      for (size_t i = 0; i < sizes.size(); ++i) {
        auto [n, d] = parse_pair(sizes[i]);
        rows.push_back({"rr-" + sizes[i], gen_random_regular(n, d, derive_seed(seed, 9000 + i))});
      }
    } else if (suite == "path") {
      if (sizes.empty()) sizes = {"64"};
      for (const auto& t : sizes) rows.push_back({"path-" + t, gen_path(std::stoi(t))});
    } else {
      std::cerr << "unknown suite: " << suite << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 1;
  }

  std::ostringstream csv;
  csv << "graph,n,m,phi,error,error_per_m,sweeps,rounds,wall_ms\n";
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    for (size_t pi = 0; pi < phis.size(); ++pi) {
      Counters counters;
      DecompOptions opts;
      opts.counters = &counters;
      auto t0 = std::chrono::steady_clock::now();
      Partition p = compute_exp_decomp(rows[ri].g, phis[pi], derive_seed(seed, ri * 1000 + pi), opts);
      auto t1 = std::chrono::steady_clock::now();
      double wall = std::chrono::duration<double, std::milli>(t1 - t0).count();
      int64_t m = rows[ri].g.num_edges();
      csv << rows[ri].graph << ',' << rows[ri].g.num_vertices() << ',' << m << ',' << phis[pi] << ','
          << p.error_edges << ',' << (m > 0 ? static_cast<double>(p.error_edges) / static_cast<double>(m) : 0.0)
          << ',' << counters.unit_flow_sweeps << ',' << counters.cut_matching_rounds << ',' << wall << '\n';
    }
  }
  write_text(csv_path, csv.str());
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("expdecomp");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"phi-expander decompositions of undirected graphs"};
  app.require_subcommand(1);

  auto* dec = app.add_subcommand("decompose", "compute an expander decomposition");
  std::string input, out_path, report_path;
  double phi = 0.0;
  uint64_t seed = 1;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  bool verify = false;
  dec->add_option("input", input, "edge-list file ('-' for stdin)")->required();
  dec->add_option("--phi", phi, "expansion parameter in (0,1)")->required();
  dec->add_option("--seed", seed, "random seed");
  dec->add_option("--out", out_path, "partition TSV output (default stdout)");
  dec->add_option("--report", report_path, "JSON run report path");
  dec->add_option("--threads", threads, "parallelism degree (1 = deterministic reference)");
  dec->add_flag("--verify", verify, "audit the output (brute force for clusters of <= 20 vertices)");

  auto* gen = app.add_subcommand("gen", "generate a benchmark graph");
  std::string kind, gen_out;
  int gk = 3, gs = 4, gn = 8, gd = 3;
  uint64_t gen_seed = 1;
  gen->add_option("kind", kind, "ring-of-cliques | dumbbell | random-regular | path")->required();
  gen->add_option("--k", gk, "number of cliques");
  gen->add_option("--s", gs, "clique size");
  gen->add_option("--n", gn, "vertex count");
  gen->add_option("--d", gd, "degree");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  auto* ver = app.add_subcommand("verify", "check a partition against a graph");
  std::string vpart, vgraph;
  double vphi = 0.0;
  ver->add_option("partition", vpart, "partition TSV")->required();
  ver->add_option("graph", vgraph, "edge-list file")->required();
  ver->add_option("--phi", vphi, "expansion parameter in (0,1)")->required();

  auto* ben = app.add_subcommand("bench", "run a benchmark suite");
  std::string suite, phis_csv = "0.01,0.05,0.2", sizes_csv, csv_path;
  uint64_t bench_seed = 1;
  ben->add_option("suite", suite, "ring | dumbbell | random-regular | path")->required();
  ben->add_option("--phis", phis_csv, "comma-separated phi values");
  ben->add_option("--sizes", sizes_csv, "comma-separated sizes (ring/random-regular use AxB)");
  ben->add_option("--seed", bench_seed, "random seed");
  ben->add_option("--csv", csv_path, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dec->parsed()) {
      if (!(phi > 0.0 && phi < 1.0) || threads < 1) {
        std::cerr << "usage error: --phi must be in (0,1) and --threads >= 1\n";
        return 1;
      }
      return cmd_decompose(input, phi, seed, out_path, report_path, threads, verify);
    }
    if (gen->parsed()) return cmd_gen(kind, gk, gs, gn, gd, gen_seed, gen_out);
    if (ver->parsed()) {
      if (!(vphi > 0.0 && vphi < 1.0)) {
        std::cerr << "usage error: --phi must be in (0,1)\n";
        return 1;
      }
      return cmd_verify(vpart, vgraph, vphi);
    }
    if (ben->parsed()) return cmd_bench(suite, phis_csv, sizes_csv, bench_seed, csv_path);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace expdecomp
