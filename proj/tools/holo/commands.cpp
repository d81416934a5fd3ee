#include "commands.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "holo/config.hpp"
#include "holo/curation.hpp"
#include "holo/error.hpp"
#include "holo/eval.hpp"
#include "holo/generator.hpp"
#include "holo/io.hpp"
#include "holo/pipeline.hpp"
#include "serve.hpp"

namespace holo::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Unreadable input path; reported with exit status kUsage.
class MissingFile : public Error {
 public:
  explicit MissingFile(const fs::path& path) : Error("cannot read input file '" + path.string() + "'") {}
};

void require_file(const fs::path& path) {
  std::ifstream probe(path);
  if (!probe) throw MissingFile(path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::string jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::string clusters_jsonl(const std::vector<Cluster>& clusters, bool with_representative) {
  std::ostringstream out;
  io::write_clusters(out, clusters, with_representative);
  return out.str();
}

std::string edges_jsonl(const std::vector<SimEdge>& edges) {
  std::vector<json> rows;
  rows.reserve(edges.size());
  for (const auto& e : edges) rows.push_back(io::edge_to_json(e));
  return jsonl(rows);
}

std::vector<Cluster> assignment_clusters(const Assignment& a) {
  std::vector<Cluster> out;
  for (const auto& g : a.groups()) {
    Cluster c;
    c.cid = g.cid;
    for (std::size_t i : g.members) c.members.push_back(a.vertex(i));
    out.push_back(std::move(c));
  }
  return out;
}

json timings_json(const PhaseTimings& t) {
  return {{"pre", t.pre}, {"dec", t.dec}, {"merge", t.merge}, {"total", t.total}};
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string vertices;
  std::string edges;
  std::string out_dir = ".";
  std::string config;
  std::string types;
  std::string manifest;
  std::size_t parallelism = 0;
  bool skip_merge = false;
  bool phase_dump = false;
};

void write_phase_dump(const fs::path& dir, const Intermediates& in) {
  ensure_dir(dir);
  io::write_file_atomic(dir / "1_preprocessed_edges.jsonl", edges_jsonl(in.preprocessed.edges));
  io::write_file_atomic(dir / "2_components.jsonl", clusters_jsonl(assignment_clusters(in.components), false));
  io::write_file_atomic(dir / "2_intra_edges.jsonl", edges_jsonl(in.intra_edges));

  std::vector<json> winners;
  for (const auto& w : in.type_winners) {
    winners.push_back({{"vertex", w.vertex}, {"sim", w.sim}, {"type", w.type}, {"cid", w.cid}});
  }
  io::write_file_atomic(dir / "3_type_candidates.jsonl", jsonl(winners));
  io::write_file_atomic(dir / "3_typed.jsonl", clusters_jsonl(assignment_clusters(in.typed), false));

  std::vector<json> steps;
  for (const auto& s : in.refinement) {
    steps.push_back({{"superstep", s.superstep},
                     {"cluster", s.cluster},
                     {"vertex", s.vertex},
                     {"asim", s.asim},
                     {"source_conflict", s.source_conflict}});
  }
  io::write_file_atomic(dir / "3_refinement.jsonl", jsonl(steps));
  io::write_file_atomic(dir / "3_refined.jsonl", clusters_jsonl(assignment_clusters(in.refined), false));
  io::write_file_atomic(dir / "3_decomposed.jsonl", clusters_jsonl(in.decomposed, true));

  std::vector<json> candidates;
  for (const auto& t : in.merge_candidates) {
    candidates.push_back({{"block", t.block}, {"cid_a", t.cid_a}, {"cid_b", t.cid_b}, {"sim", t.sim}});
  }
  io::write_file_atomic(dir / "4_merge_candidates.jsonl", jsonl(candidates));
  std::vector<json> events;
  for (const auto& e : in.merges) {
    events.push_back(
        {{"round", e.round}, {"block", e.block}, {"kept", e.kept}, {"absorbed", e.absorbed}, {"sim", e.sim}});
  }
  io::write_file_atomic(dir / "4_merges.jsonl", jsonl(events));
}

int cmd_cluster(ClusterArgs args, std::ostream& out) {
  PipelineConfig cfg;
  if (!args.manifest.empty()) {
    require_file(args.manifest);
    std::ifstream in(args.manifest);
    json m;
    try {
      m = json::parse(in);
      const json& inputs = m.at("inputs");
      if (args.vertices.empty()) args.vertices = inputs.at("vertices").get<std::string>();
      if (args.edges.empty()) args.edges = inputs.at("edges").get<std::string>();
      if (args.types.empty()) args.types = inputs.value("types", std::string());
      std::istringstream cfg_text(m.at("config_text").get<std::string>());
      cfg = parse_config(cfg_text, {}, args.manifest);
      if (m.value("skip_merge", false)) args.skip_merge = true;
    } catch (const json::exception& e) {
      throw ParseError(args.manifest, 0, std::string("malformed manifest: ") + e.what());
    }
  }
  if (args.vertices.empty() || args.edges.empty()) throw CLI::RequiredError("--vertices and --edges");
  require_file(args.vertices);
  require_file(args.edges);
  if (!args.config.empty()) {
    require_file(args.config);
    cfg = load_config(args.config, cfg);
  }
  if (args.parallelism > 0) cfg.parallelism = args.parallelism;
  cfg.validate();

  std::optional<TypeDictionary> types;
  if (!args.types.empty()) {
    require_file(args.types);
    types = io::load_type_dictionary(args.types);
  }

  auto vertices = io::read_vertices(args.vertices);
  auto edges = io::read_edges(args.edges);
  RunOptions options;
  options.skip_merge = args.skip_merge;
  options.keep_intermediates = args.phase_dump;
  auto result = run_pipeline(std::move(vertices), std::move(edges), cfg, types ? &*types : nullptr, options);

  const fs::path dir(args.out_dir);
  ensure_dir(dir);
  const fs::path clusters_path = dir / "clusters.jsonl";
  const fs::path reps_path = dir / "representatives.jsonl";
  io::write_file_atomic(clusters_path, clusters_jsonl(result.clusters, true));
  std::vector<json> reps;
  for (const auto& c : result.clusters) {
    json r = io::representative_to_json(c.representative);
    r["cid"] = c.cid;
    r["members"] = c.members;
    reps.push_back(std::move(r));
  }
  io::write_file_atomic(reps_path, jsonl(reps));
  if (result.intermediates) write_phase_dump(dir / "phases", *result.intermediates);

  PipelineConfig snapshot = cfg;
  snapshot.parallelism = 1;  // output does not depend on it; keeps manifests comparable
  json manifest{{"version", kVersion},
                {"inputs", {{"vertices", fs::absolute(args.vertices).string()},
                            {"edges", fs::absolute(args.edges).string()},
                            {"types", args.types.empty() ? std::string() : fs::absolute(args.types).string()}}},
                {"config_text", format_config(snapshot)},
                {"parallelism", cfg.parallelism},
                {"skip_merge", args.skip_merge},
                {"outputs", {{"clusters", clusters_path.string()}, {"representatives", reps_path.string()}}},
                {"cluster_count", result.clusters.size()},
                {"timings", timings_json(result.timings)}};
  if (args.phase_dump) manifest["outputs"]["phases"] = (dir / "phases").string();
  io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  out << result.clusters.size() << " clusters written to " << clusters_path.string() << " (pre "
      << result.timings.pre << " s, dec " << result.timings.dec << " s, merge " << result.timings.merge << " s)\n";
  return kOk;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::size_t clusters = 10000;
  std::uint64_t seed = 42;
  std::uint64_t link_seed = 7;
  std::string out_dir = ".";
  double thin = 0.0;
  double wrong = 0.0;
  std::vector<double> sizes;
  CorruptionSpec corruption;
};

int cmd_generate(const GenerateArgs& args, std::ostream& out) {
  SizeDistribution dist;
  if (!args.sizes.empty()) dist.proportions = args.sizes;
  CorruptionSpec spec = args.corruption;
  spec.seed = args.seed;
  Executor exec(1);
  auto data = generate_synthetic(args.clusters, dist, spec, exec);
  const LinkSet star = derive_star_links(data.gold);
  const auto links = perturb_links(star, data.vertices, LinkNoise{args.thin, args.wrong, args.link_seed});

  const fs::path dir(args.out_dir);
  ensure_dir(dir);
  std::vector<json> rows;
  rows.reserve(data.vertices.size());
  for (const auto& v : data.vertices) rows.push_back(io::vertex_to_json(v));
  io::write_file_atomic(dir / "vertices.jsonl", jsonl(rows));
  io::write_file_atomic(dir / "edges.jsonl", edges_jsonl(links));
  io::write_file_atomic(dir / "gold.jsonl", clusters_jsonl(data.gold, true));

  out << data.vertices.size() << " vertices, " << data.gold.size() << " gold clusters, "
      << derive_links(data.gold).size() << " gold links, " << star.size() << " star links, " << links.size()
      << " input links written to " << dir.string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string computed;
  std::string gold;
  std::string links;
  bool json_output = false;
};

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  require_file(args.gold);
  const auto gold = io::read_gold(args.gold);
  json report = json::object();
  std::string text;
  if (!args.computed.empty()) {
    require_file(args.computed);
    const auto computed = io::read_gold(args.computed);
    const auto q = score(computed, gold);
    report["clusters"] = to_json(q);
    text += "clusters: " + format_quality(q);
  }
  if (!args.links.empty()) {
    require_file(args.links);
    const auto edges = io::read_edges(args.links);
    const auto q = score_links(LinkSet::from_edges(edges), derive_links(gold));
    report["links"] = to_json(q);
    text += "links:    " + format_quality(q);
  }
  if (args.computed.empty() && args.links.empty()) throw CLI::RequiredError("--computed or --links");
  if (args.json_output) {
    out << report.dump(2) << "\n";
  } else {
    out << text;
  }
  return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string vertices;
  std::string edges;
  std::string config;
  std::string json_path;
  std::vector<std::size_t> parallelism{1, 2, 4, 8};
  std::size_t repetitions = 3;
  std::size_t clusters = 10000;
  std::uint64_t seed = 42;
  double thin = 0.2;
  double wrong = 0.05;
};

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  BenchInput input;
  if (!args.config.empty()) {
    require_file(args.config);
    input.config = load_config(args.config);
  } else {
    input.config.similarity_profile = SimilarityProfile::MusicWeighted;
  }
  if (!args.vertices.empty() || !args.edges.empty()) {
    if (args.vertices.empty() || args.edges.empty()) throw CLI::RequiredError("--vertices with --edges");
    require_file(args.vertices);
    require_file(args.edges);
    input.vertices = io::read_vertices(args.vertices);
    input.edges = io::read_edges(args.edges);
  } else {
    CorruptionSpec spec;
    spec.seed = args.seed;
    Executor exec(1);
    auto data = generate_synthetic(args.clusters, {}, spec, exec);
    input.edges = perturb_links(derive_star_links(data.gold), data.vertices, LinkNoise{args.thin, args.wrong, 7});
    input.vertices = std::move(data.vertices);
  }
  const auto reports = bench(input, args.parallelism, args.repetitions);
  out << input.vertices.size() << " vertices, " << input.edges.size() << " input links, " << args.repetitions
      << " repetitions\n"
      << format_timing_table(reports);
  if (!args.json_path.empty()) io::write_file_atomic(args.json_path, to_json(reports).dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 7878;
  std::string clusters;
  std::string vertices;
  std::string links;
  std::string log;
};

std::atomic<CurationServer*> g_server{nullptr};

extern "C" void stop_server(int) {
  if (auto* s = g_server.load()) s->stop();
}

int cmd_serve(const ServeArgs& args, std::ostream& out) {
  require_file(args.clusters);
  if (!args.vertices.empty()) require_file(args.vertices);
  if (!args.links.empty()) require_file(args.links);
  auto state = CurationState::load(args.clusters, args.vertices.empty() ? std::nullopt : std::optional<fs::path>(args.vertices),
                                   args.links.empty() ? std::nullopt : std::optional<fs::path>(args.links));
  CurationServer server(std::move(state), args.log.empty() ? std::nullopt : std::optional<fs::path>(args.log));
  const int port = server.bind(args.host, args.port);
  out << "serving " << args.clusters << " on http://" << args.host << ":" << port;
  if (server.replayed() > 0) out << " (" << server.replayed() << " logged decisions replayed)";
  out << std::endl;
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  server.serve();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holistic multi-source entity clustering"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ClusterArgs cluster;
  auto* c = app.add_subcommand("cluster", "Cluster vertices along their input links");
  c->add_option("--vertices", cluster.vertices, "Vertex JSON Lines file");
  c->add_option("--edges", cluster.edges, "Input link JSON Lines file");
  c->add_option("--out-dir", cluster.out_dir, "Output directory")->capture_default_str();
  c->add_option("--config", cluster.config, "key = value configuration file");
  c->add_option("--types", cluster.types, "Type dictionary (raw<TAB>harmonized)");
  c->add_option("--parallelism", cluster.parallelism, "Worker threads (overrides the config)")
      ->check(CLI::PositiveNumber);
  c->add_flag("--skip-merge", cluster.skip_merge, "Stop after the decomposition phase");
  c->add_flag("--phase-dump", cluster.phase_dump, "Write every intermediate result to <out-dir>/phases");
  c->add_option("--manifest", cluster.manifest, "Re-run with the inputs and configuration of a manifest");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic music benchmark");
  g->add_option("--clusters", gen.clusters, "Number of gold clusters")->capture_default_str()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  g->add_option("--link-seed", gen.link_seed, "Seed for link thinning and pollution")->capture_default_str();
  g->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();
  g->add_option("--thin", gen.thin, "Fraction of star links dropped")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  g->add_option("--wrong", gen.wrong, "Random wrong links added, as a fraction of the star links")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  g->add_option("--sizes", gen.sizes, "Share of clusters of size 1,2,... (comma separated)")->delimiter(',');
  g->add_option("--year-reformat", gen.corruption.year_reformat)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  g->add_option("--length-reformat", gen.corruption.length_reformat)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  g->add_option("--char-edit", gen.corruption.char_edit)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  g->add_option("--field-omission", gen.corruption.field_omission)->capture_default_str()->check(CLI::Range(0.0, 1.0));

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Score a clustering or a link file against a gold standard");
  e->add_option("--computed", ev.computed, "Computed cluster file");
  e->add_option("--gold", ev.gold, "Gold cluster file")->required();
  e->add_option("--links", ev.links, "Link file scored as is");
  e->add_flag("--json", ev.json_output, "Print JSON instead of text");

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "Time the pipeline at several parallelism levels");
  b->add_option("--vertices", be.vertices, "Vertex file (default: generated data)");
  b->add_option("--edges", be.edges, "Input link file");
  b->add_option("--config", be.config, "Configuration file (default: music-weighted profile)");
  b->add_option("--parallelism", be.parallelism, "Comma separated thread counts")->delimiter(',')->capture_default_str();
  b->add_option("--repetitions", be.repetitions, "Runs per level")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--clusters", be.clusters, "Generated clusters when no input is given")->capture_default_str();
  b->add_option("--seed", be.seed, "Generator seed")->capture_default_str();
  b->add_option("--thin", be.thin, "Generated link thinning")->capture_default_str();
  b->add_option("--wrong", be.wrong, "Generated wrong-link fraction")->capture_default_str();
  b->add_option("--json", be.json_path, "Also write the reports as JSON");

  ServeArgs sv;
  auto* s = app.add_subcommand("serve", "Serve clusters for review over HTTP");
  s->add_option("--port", sv.port, "TCP port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
  s->add_option("--host", sv.host, "Interface to bind")->capture_default_str();
  s->add_option("--clusters", sv.clusters, "Cluster file under review")->required();
  s->add_option("--vertices", sv.vertices, "Vertex file for member details");
  s->add_option("--links", sv.links, "Original input links");
  s->add_option("--log", sv.log, "Append-only decision log, replayed on start");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c->parsed()) return cmd_cluster(cluster, out);
    if (g->parsed()) return cmd_generate(gen, out);
    if (e->parsed()) return cmd_eval(ev, out);
    if (b->parsed()) return cmd_bench(be, out);
    if (s->parsed()) return cmd_serve(sv, out);
  } catch (const MissingFile& ex) {
    err << "holo: " << ex.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& ex) {
    err << "holo: " << ex.what() << "\n";
    return kUsage;
  } catch (const std::exception& ex) {
    err << "holo: " << ex.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace holo::cli
