#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "pathmatch/corpus.hpp"
#include "pathmatch/error.hpp"
#include "pathmatch/ingest.hpp"
#include "pathmatch/matcher.hpp"
#include "pathmatch/synthgen.hpp"
#include "pathmatch/text.hpp"
#include "pathmatch/weights.hpp"
#include "pathmatch/workflow.hpp"

namespace fs = std::filesystem;
using namespace pathmatch;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::UsageError:
      return 2;
    case ErrorCode::ParseError:
      return 3;
    case ErrorCode::IntegrityWarning:
      return 4;
    default:
      return 1;
  }
}

// PATHMATCH_LOG_LEVEL=quiet silences warnings; anything else prints them.
bool verbose() {
  const char* level = std::getenv("PATHMATCH_LOG_LEVEL");
  return level == nullptr || !equals_ci(level, "quiet");
}

void note(const std::string& msg) {
  if (verbose()) std::cerr << msg << '\n';
}

// Output directory: the flag, else PATHMATCH_OUTPUT_DIR.
std::string out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PATHMATCH_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  throw Error(ErrorCode::UsageError, "an output directory is required (-o or PATHMATCH_OUTPUT_DIR)");
}

std::ofstream open_file(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  return out;
}

// Runs `emit` against the file at `path`, or standard output when empty.
template <typename F>
void with_output(const std::string& path, F&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_file(path);
  emit(out);
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

// `--weights` takes a kind name or the path of a weight configuration.
WeightSpec load_weights(const std::string& arg, std::span<const LabelledTree> corpus) {
  if (fs::is_regular_file(arg)) {
    const auto base = fs::path(arg).parent_path().string();
    return weight_from_config(KeyValueConfig::load(arg), base, corpus);
  }
  if (equals_ci(arg, "indicator")) return indicator_weight();
  if (equals_ci(arg, "frequency")) return frequency_weight(corpus);
  throw Error(ErrorCode::UsageError, "--weights expects indicator, frequency or a config file, got '" + arg + "'");
}

std::string label_text(const Label& l) { return join(l, "|"); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

// ---- gen

struct GenArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void run_gen(const GenArgs& a) {
  auto cfg = KeyValueConfig::load(a.config);
  if (a.seed) cfg.set("seed", std::to_string(*a.seed));
  const auto spec = toy_spec_from_config(cfg);
  const auto corpus = sample_toy_corpus(spec);
  const auto dir = out_dir(a.out);
  write_planted_corpus(dir, spec, corpus);
  std::cout << "trees=" << corpus.trees.size() << " dir=" << dir << '\n';
}

// ---- match

struct MatchArgs {
  std::string g;
  std::string h;
  std::string weights = "indicator";
  std::string variant = "basic";
  std::size_t k = 1;
  std::size_t max_gap = 0;
  std::size_t max_len = 0;
  bool json = false;
  std::string out;
};

nlohmann::json pairs_json(const Matching& m) {
  auto arr = nlohmann::json::array();
  for (const auto& p : m.pairs) arr.push_back(nlohmann::json::array({p.g, p.h}));
  return arr;
}

void run_match(const MatchArgs& a) {
  const auto g = read_tree_file(a.g);
  const auto h = read_tree_file(a.h);
  const std::vector<LabelledTree> both{g, h};
  const auto w = load_weights(a.weights, both);
  std::string variant = a.variant;
  std::transform(variant.begin(), variant.end(), variant.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  if (variant == "basic" || variant == "gaplim" || variant == "subtree") {
    MatchResult r;
    if (variant == "basic") {
      r = match_basic(g, h, w);
    } else if (variant == "gaplim") {
      r = match_gap_limited(g, h, w, a.max_gap);
    } else {
      r = match_subtree(g, h, w);
    }
    with_output(a.out, [&](std::ostream& out) {
      if (a.json) {
        out << match_json(r) << '\n';
      } else {
        write_match_record(out, g, h, w, r);
      }
    });
    return;
  }
  if (variant == "topk") {
    if (a.k == 0) throw Error(ErrorCode::UsageError, "--k must be positive");
    const auto results = match_top_k(g, h, w, a.k);
    with_output(a.out, [&](std::ostream& out) {
      if (a.json) {
        auto arr = nlohmann::json::array();
        for (const auto& r : results) arr.push_back(nlohmann::json::parse(match_json(r)));
        out << arr.dump() << '\n';
        return;
      }
      for (std::size_t i = 0; i < results.size(); ++i) {
        out << "# rank=" << i + 1 << '\n';
        write_match_record(out, g, h, w, results[i]);
      }
    });
    return;
  }
  if (variant == "lengths") {
    const std::size_t limit = std::min(g.height(), h.height()) + 1;
    const auto r = match_length_indexed(g, h, w, a.max_len == 0 ? limit : a.max_len);
    with_output(a.out, [&](std::ostream& out) {
      if (a.json) {
        auto scores = nlohmann::json::array();
        auto matchings = nlohmann::json::array();
        for (std::size_t len = 0; len < r.scores_by_length.size(); ++len) {
          const double s = r.scores_by_length[len];
          scores.push_back(std::isfinite(s) ? nlohmann::json(s) : nlohmann::json(nullptr));
          matchings.push_back(pairs_json(r.matchings[len]));
        }
        out << nlohmann::json{{"scores_by_length", scores}, {"matchings", matchings}}.dump() << '\n';
        return;
      }
      for (std::size_t len = 1; len < r.scores_by_length.size(); ++len) {
        const double s = r.scores_by_length[len];
        out << "length\t" << len << '\t' << (std::isfinite(s) ? format_double(s) : "none");
        for (const auto& p : r.matchings[len].pairs) out << '\t' << p.g << ':' << p.h;
        out << '\n';
      }
    });
    return;
  }
  throw Error(ErrorCode::UsageError, "unknown --variant '" + a.variant + "'");
}

// ---- simmatrix

struct SimArgs {
  std::string corpus;
  std::string out;
  std::string weights = "indicator";
  std::string variant = "basic";
  std::size_t max_gap = 0;
  std::size_t threads = 0;
};

void run_simmatrix(const SimArgs& a) {
  const auto corpus = load_corpus(a.corpus);
  const auto w = load_weights(a.weights, corpus.trees);
  SimilarityOptions opt;
  opt.variant = parse_matcher_variant(a.variant);
  opt.max_gap = a.max_gap;
  opt.threads = a.threads;
  const auto sim = pairwise_similarity(corpus.trees, w, opt);
  const auto dir = fs::path(out_dir(a.out));
  fs::create_directories(dir);
  write_matrix_file((dir / "similarity.csv").string(), sim.s);
  write_matrix_file((dir / "distance.csv").string(), normalize_distances(sim.s));
  std::cout << "n=" << sim.s.n << " dir=" << dir.string() << '\n';
}

// ---- embed / cluster

struct EmbedArgs {
  std::string matrix;
  std::size_t dims = 2;
  std::string out;
};

void run_embed(const EmbedArgs& a) {
  const auto e = embed_classical(read_matrix_file(a.matrix), a.dims);
  with_output(a.out, [&](std::ostream& out) { write_embedding(out, e); });
}

struct ClusterArgs {
  std::string input;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::string out;
};

// A distance matrix starts with `n=`; anything else is read as an embedding.
bool is_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return t.starts_with("n=");
  }
  throw Error(ErrorCode::EmptyInput, path + ": no data");
}

void run_cluster(const ClusterArgs& a) {
  KMedoidsOptions opt;
  opt.seed = a.seed;
  opt.restarts = a.restarts;
  Partition p;
  if (is_matrix_file(a.input)) {
    p = cluster_kmedoids(read_matrix_file(a.input), a.k, opt);
  } else {
    std::ifstream in(a.input);
    p = cluster_kmedoids(read_embedding(in, a.input), a.k, opt);
  }
  with_output(a.out, [&](std::ostream& out) {
    out << "# k=" << a.k << " seed=" << a.seed << " restarts=" << a.restarts
        << " cost=" << format_double(p.cost) << '\n';
    write_partition(out, p.labels);
  });
}

// ---- exemplar

struct ExemplarArgs {
  std::string corpus;
  std::string partition;
  std::string weights = "indicator";
  std::string out;
  std::size_t threads = 0;
};

void run_exemplar(const ExemplarArgs& a) {
  const auto corpus = load_corpus(a.corpus);
  std::ifstream in(a.partition);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + a.partition);
  const auto labels = read_partition(in, a.partition);
  if (labels.size() != corpus.trees.size()) {
    throw Error(ErrorCode::ParseError, a.partition + ": " + std::to_string(labels.size()) +
                                           " rows for a corpus of " + std::to_string(corpus.trees.size()));
  }
  const auto w = load_weights(a.weights, corpus.trees);
  const auto exemplars = cluster_exemplars(corpus.trees, labels, w, a.threads);
  const auto dir = fs::path(out_dir(a.out));
  fs::create_directories(dir);
  std::size_t noise = 0;
  for (auto l : labels) noise += l < 0;
  for (std::size_t c = 0; c < exemplars.size(); ++c) {
    const auto stem = dir / ("exemplar_" + std::to_string(c));
    auto out = open_file(stem.string() + ".txt");
    write_exemplar(out, exemplars[c]);
    if (!exemplars[c].sequence.empty()) write_tree_file(stem.string() + ".tree", exemplar_tree(exemplars[c]));
    std::cout << "cluster=" << c << " support=" << exemplars[c].support
              << " length=" << exemplars[c].sequence.size() << '\n';
  }
  if (noise > 0) note("skipped " + std::to_string(noise) + " noise rows");
}

// ---- featurize

struct FeaturizeArgs {
  std::string corpus;
  std::string templates;
  std::size_t random_templates = 0;
  std::uint64_t seed = 0;
  std::string save_templates;
  double tau = 3.0;
  std::string weights = "indicator";
  std::string out;
  std::size_t threads = 0;
};

void run_featurize(const FeaturizeArgs& a) {
  if (a.templates.empty() == (a.random_templates == 0)) {
    throw Error(ErrorCode::UsageError, "give exactly one of --templates and --random-templates");
  }
  const auto corpus = load_corpus(a.corpus);
  std::vector<LabelledTree> templates;
  if (!a.templates.empty()) {
    templates = load_corpus(a.templates).trees;
  } else {
    const auto picked = pick_random_templates(corpus.trees, a.random_templates, a.seed);
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : picked) {
      templates.push_back(t.path);
      rows.push_back({std::to_string(t.tree), std::to_string(t.leaf)});
    }
    if (!a.save_templates.empty()) {
      KeyValueConfig header;
      header.set("format", kCorpusFormat);
      header.set("source", "random-templates");
      header.set("seed", std::to_string(a.seed));
      write_corpus(a.save_templates, templates, header, {"source_tree", "leaf"}, rows, "template_");
    }
  }
  const auto w = load_weights(a.weights, corpus.trees);
  const auto f = featurize_templates(corpus.trees, templates, w, a.tau, a.threads);
  with_output(a.out, [&](std::ostream& out) { write_features(out, f); });
}

// ---- ingest / subtrees

struct IngestArgs {
  std::string table;
  std::string out;
  std::string delimiter = ",";
  std::string columns;
  std::vector<std::string> flag_users;
  std::string timestamp;
  bool strict = false;
  std::size_t threads = 0;
};

char parse_delimiter(const std::string& s) {
  if (s == "\\t" || equals_ci(s, "tab")) return '\t';
  if (s.size() != 1) throw Error(ErrorCode::UsageError, "--delimiter must be one character, got '" + s + "'");
  return s[0];
}

void run_ingest(const IngestArgs& a) {
  IngestOptions opt;
  opt.delimiter = parse_delimiter(a.delimiter);
  opt.threads = a.threads;
  opt.flagged_users.insert(a.flag_users.begin(), a.flag_users.end());
  if (!a.columns.empty()) {
    const auto names = split(a.columns, ',');
    if (names.size() != 4) {
      throw Error(ErrorCode::UsageError, "--columns takes pid,parent_pid,process_name,user_name");
    }
    opt.columns = {names[0], names[1], names[2], names[3]};
  }
  const auto result = ingest_edge_table_file(a.table, opt);
  if (a.strict && !result.warnings.empty()) {
    throw Error(ErrorCode::IntegrityWarning, std::to_string(result.warnings.size()) +
                                                 " repair warning(s) under --strict:\n" +
                                                 join(result.warnings, "\n"));
  }
  for (const auto& w : result.warnings) note("warning: " + w);
  const auto dir = out_dir(a.out);
  write_ingested_corpus(dir, result, fs::path(a.table).filename().string(), a.timestamp);
  const auto& s = result.stats;
  std::cout << "trees=" << result.trees.size() << " nodes=" << s.nodes << " edges=" << s.edges
            << " records=" << s.records << " warnings=" << result.warnings.size() << '\n';
}

struct SubtreeArgs {
  std::string corpus;
  std::string out;
  SubtreeFilter filter;
  std::vector<std::string> exclude;
};

void run_subtrees(SubtreeArgs a) {
  if (!a.exclude.empty()) a.filter.excluded_root_names = a.exclude;
  const auto corpus = load_corpus(a.corpus);
  const auto found = extract_subtrees(corpus.trees, a.filter);
  std::vector<LabelledTree> trees;
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : found) {
    trees.push_back(e.subtree);
    const auto& src = corpus.trees[e.tree];
    rows.push_back({corpus.files[e.tree], std::to_string(e.root), std::to_string(e.subtree.size()),
                    std::to_string(e.subtree.height()), src.label(e.root)[0]});
  }
  KeyValueConfig header;
  header.set("format", kCorpusFormat);
  header.set("source", "subtrees");
  header.set("min_size", std::to_string(a.filter.min_size));
  header.set("max_size", std::to_string(a.filter.max_size));
  header.set("min_subtree_size", std::to_string(a.filter.min_subtree_size));
  header.set("excluded_root_names", join(a.filter.excluded_root_names, ","));
  const auto dir = out_dir(a.out);
  write_corpus(dir, trees, header, {"source_file", "root", "size", "depth", "root_name"}, rows, "sub_");
  std::cout << "subtrees=" << trees.size() << " dir=" << dir << '\n';
}

// ---- hist

struct HistArgs {
  std::string corpus;
  std::string reference;
  std::optional<std::size_t> reference_class;
  std::string weights = "indicator";
  std::string out;
  std::size_t threads = 0;
};

// Planted sequence of class c, rebuilt from a generated corpus's manifest.
LabelledTree class_reference(const Corpus& corpus, std::size_t c) {
  KeyValueConfig cfg;
  for (const auto& [k, v] : corpus.manifest.header.entries()) {
    if (k.starts_with("spec.")) cfg.add(k.substr(5), v);
  }
  const auto perm_col = corpus.manifest.column("permutation");
  if (!perm_col || !cfg.has("base_sequence")) {
    throw Error(ErrorCode::UsageError, "--reference-class needs a corpus written by gen");
  }
  const auto spec = toy_spec_from_config(cfg);
  for (std::size_t i = 0; i < corpus.trees.size(); ++i) {
    if (corpus.class_of[i] != static_cast<std::int64_t>(c)) continue;
    std::vector<std::string> symbols;
    for (const auto& pos : split(corpus.manifest.rows[i][*perm_col], ',')) {
      symbols.push_back(spec.plant.alphabet[spec.plant.base_sequence[parse_uint(pos, "permutation")]]);
    }
    return make_path(symbols);
  }
  throw Error(ErrorCode::DomainError, "no tree of class " + std::to_string(c));
}

void run_hist(const HistArgs& a) {
  if (a.reference.empty() == !a.reference_class.has_value()) {
    throw Error(ErrorCode::UsageError, "give exactly one of --reference and --reference-class");
  }
  const auto corpus = load_corpus(a.corpus);
  const auto ref = a.reference.empty() ? class_reference(corpus, *a.reference_class) : read_tree_file(a.reference);
  const auto w = load_weights(a.weights, corpus.trees);
  const std::size_t n = corpus.trees.size();

  std::vector<double> score(n);
  std::vector<MatchWorkspace> scratch(worker_count(n, a.threads));
  parallel_for(n, a.threads, [&](std::size_t i, std::size_t worker) {
    score[i] = match_score(corpus.trees[i], ref, w, scratch[worker]);
  });

  std::set<Label> symbols;
  for (const auto& t : corpus.trees) symbols.insert(t.labels().begin(), t.labels().end());
  const std::vector<Label> columns(symbols.begin(), symbols.end());

  const auto dir = fs::path(out_dir(a.out));
  fs::create_directories(dir);
  {
    auto out = open_file((dir / "similarity.csv").string());
    out << "id,class,score\n";
    for (std::size_t i = 0; i < n; ++i) {
      out << i << ',' << corpus.class_of[i] << ',' << format_double(score[i]) << '\n';
    }
  }
  {
    auto out = open_file((dir / "counts.csv").string());
    out << "id,class";
    for (const auto& l : columns) out << ',' << csv_field(label_text(l));
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      std::map<Label, std::size_t> count;
      for (const auto& l : corpus.trees[i].labels()) ++count[l];
      out << i << ',' << corpus.class_of[i];
      for (const auto& l : columns) out << ',' << count[l];
      out << '\n';
    }
  }
  std::cout << "trees=" << n << " symbols=" << columns.size() << " dir=" << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planted-path matching for labelled trees"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Sample a planted-path corpus from a toy-model config");
  c_gen->add_option("config", gen.config, "toy-model configuration file")->required();
  c_gen->add_option("-o,--out", gen.out, "corpus directory");
  c_gen->add_option("--seed", gen.seed, "override the configured seed");

  MatchArgs match;
  auto* c_match = app.add_subcommand("match", "Match two tree files");
  c_match->add_option("first", match.g, "first tree file")->required();
  c_match->add_option("second", match.h, "second tree file")->required();
  c_match->add_option("--weights", match.weights, "indicator, frequency, or a weight config file");
  c_match->add_option("--variant", match.variant, "basic|subtree|topk|gaplim|lengths");
  c_match->add_option("--k", match.k, "number of matchings for topk");
  c_match->add_option("--max-gap", match.max_gap, "gap budget for gaplim");
  c_match->add_option("--max-len", match.max_len, "longest length for lengths (default: the limit)");
  c_match->add_flag("--json", match.json, "structured output");
  c_match->add_option("-o,--out", match.out, "output file (default: standard output)");

  SimArgs sim;
  auto* c_sim = app.add_subcommand("simmatrix", "Pairwise similarity and distance matrices of a corpus");
  c_sim->add_option("corpus", sim.corpus, "corpus directory")->required();
  c_sim->add_option("-o,--out", sim.out, "output directory");
  c_sim->add_option("--weights", sim.weights, "indicator, frequency, or a weight config file");
  c_sim->add_option("--variant", sim.variant, "basic|gaplim|subtree");
  c_sim->add_option("--max-gap", sim.max_gap, "gap budget for gaplim");
  c_sim->add_option("--threads", sim.threads, "worker threads (0: all cores)");

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed", "Classical MDS of a distance matrix");
  c_embed->add_option("matrix", embed.matrix, "distance matrix file")->required();
  c_embed->add_option("--dims", embed.dims, "embedding dimension");
  c_embed->add_option("-o,--out", embed.out, "output file (default: standard output)");

  ClusterArgs cluster;
  auto* c_cluster = app.add_subcommand("cluster", "k-medoids on a distance matrix or an embedding");
  c_cluster->add_option("input", cluster.input, "distance matrix or embedding file")->required();
  c_cluster->add_option("--k", cluster.k, "number of clusters")->required();
  c_cluster->add_option("--seed", cluster.seed, "restart seed");
  c_cluster->add_option("--restarts", cluster.restarts, "random restarts");
  c_cluster->add_option("-o,--out", cluster.out, "output file (default: standard output)");

  ExemplarArgs exemplar;
  auto* c_ex = app.add_subcommand("exemplar", "Consensus sequence of every cluster in a partition");
  c_ex->add_option("corpus", exemplar.corpus, "corpus directory")->required();
  c_ex->add_option("partition", exemplar.partition, "partition file (id,cluster; -1 is noise)")->required();
  c_ex->add_option("--weights", exemplar.weights, "indicator, frequency, or a weight config file");
  c_ex->add_option("-o,--out", exemplar.out, "output directory");
  c_ex->add_option("--threads", exemplar.threads, "worker threads (0: all cores)");

  FeaturizeArgs feat;
  auto* c_feat = app.add_subcommand("featurize", "Template match scores and threshold counts per tree");
  c_feat->add_option("corpus", feat.corpus, "corpus directory")->required();
  c_feat->add_option("--templates", feat.templates, "directory of template trees");
  c_feat->add_option("--random-templates", feat.random_templates, "draw this many root-to-leaf templates");
  c_feat->add_option("--seed", feat.seed, "seed for --random-templates");
  c_feat->add_option("--save-templates", feat.save_templates, "write drawn templates to this directory");
  c_feat->add_option("--tau", feat.tau, "count threshold");
  c_feat->add_option("--weights", feat.weights, "indicator, frequency, or a weight config file");
  c_feat->add_option("-o,--out", feat.out, "output file (default: standard output)");
  c_feat->add_option("--threads", feat.threads, "worker threads (0: all cores)");

  IngestArgs ingest;
  auto* c_ing = app.add_subcommand("ingest", "Build process trees from a parent/child edge table");
  c_ing->add_option("table", ingest.table, "delimited edge table with a header line")->required();
  c_ing->add_option("-o,--out", ingest.out, "corpus directory");
  c_ing->add_option("--delimiter", ingest.delimiter, "field delimiter (one character or \\t)");
  c_ing->add_option("--columns", ingest.columns, "header names: pid,parent_pid,process_name,user_name");
  c_ing->add_option("--flag-user", ingest.flag_users, "user name that marks a tree bad-user");
  c_ing->add_option("--timestamp", ingest.timestamp, "ingestion time recorded in the manifest");
  c_ing->add_flag("--strict", ingest.strict, "fail with exit status 4 when any repair was needed");
  c_ing->add_option("--threads", ingest.threads, "worker threads (0: all cores)");

  SubtreeArgs sub;
  auto* c_sub = app.add_subcommand("subtrees", "Extract node-rooted subtrees from a corpus");
  c_sub->add_option("corpus", sub.corpus, "corpus directory")->required();
  c_sub->add_option("-o,--out", sub.out, "output corpus directory");
  c_sub->add_option("--min-size", sub.filter.min_size, "smallest source tree");
  c_sub->add_option("--max-size", sub.filter.max_size, "largest source tree");
  c_sub->add_option("--min-subtree-size", sub.filter.min_subtree_size, "smallest subtree kept");
  c_sub->add_option("--exclude-root", sub.exclude, "root process name to skip (default: unknown)");

  HistArgs hist;
  auto* c_hist = app.add_subcommand("hist", "Per-tree similarity to a reference and symbol counts");
  c_hist->add_option("corpus", hist.corpus, "corpus directory")->required();
  c_hist->add_option("--reference", hist.reference, "reference tree file");
  c_hist->add_option("--reference-class", hist.reference_class, "use the planted sequence of this class");
  c_hist->add_option("--weights", hist.weights, "indicator, frequency, or a weight config file");
  c_hist->add_option("-o,--out", hist.out, "output directory");
  c_hist->add_option("--threads", hist.threads, "worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error=" << to_string(ErrorCode::UsageError) << '\n' << e.what() << '\n';
    return 2;
  }

  try {
    if (c_gen->parsed()) run_gen(gen);
    if (c_match->parsed()) run_match(match);
    if (c_sim->parsed()) run_simmatrix(sim);
    if (c_embed->parsed()) run_embed(embed);
    if (c_cluster->parsed()) run_cluster(cluster);
    if (c_ex->parsed()) run_exemplar(exemplar);
    if (c_feat->parsed()) run_featurize(feat);
    if (c_ing->parsed()) run_ingest(ingest);
    if (c_sub->parsed()) run_subtrees(sub);
    if (c_hist->parsed()) run_hist(hist);
  } catch (const Error& e) {
    std::cerr << "error=" << to_string(e.code()) << '\n' << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error=" << to_string(ErrorCode::IoError) << '\n' << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error=Internal\n" << e.what() << '\n';
    return 1;
  }
  return 0;
}
