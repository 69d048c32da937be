#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ingest_fixtures.hpp"
#include "pathmatch/corpus.hpp"
#include "pathmatch/matcher.hpp"
#include "pathmatch/text.hpp"
#include "pathmatch/tree.hpp"
#include "pathmatch/weights.hpp"

namespace fs = std::filesystem;
using namespace pathmatch;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

// Scratch directory per test case, emptied on entry.
fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pathmatch_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run cli(const std::string& args, const fs::path& cwd) {
  const auto err_file = cwd / "stderr.txt";
  const std::string cmd = "cd '" + cwd.string() + "' && '" PATHMATCH_CLI "' " + args + " 2>'" +
                          err_file.string() + "'";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream e(err_file);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

void write_abc_fixture(const fs::path& dir) {
  write_tree_file((dir / "a.tree").string(), make_path({"A", "B", "C"}));
  write_tree_file((dir / "b.tree").string(), make_path({"A", "X", "C"}));
}

}  // namespace

TEST_CASE("match on the A,B,C / A,X,C fixture") {
  const auto dir = scratch("match");
  write_abc_fixture(dir);

  auto r = cli("match a.tree b.tree --weights indicator", dir);
  REQUIRE(r.status == 0);
  CHECK(r.out == "0\t0\t1\n2\t2\t1\nscore\t2\n");

  r = cli("match a.tree b.tree --weights indicator --json", dir);
  REQUIRE(r.status == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["score"].get<double>() == 2.0);
  CHECK(doc["pairs"] == nlohmann::json::parse("[[0,0],[2,2]]"));
  CHECK(doc["end_cell"] == nlohmann::json::parse("[2,2]"));

  r = cli("match a.tree b.tree --variant gaplim --max-gap 0 --json", dir);
  CHECK(nlohmann::json::parse(r.out)["score"].get<double>() == 1.0);

  r = cli("match a.tree b.tree --variant lengths --json", dir);
  const auto lengths = nlohmann::json::parse(r.out)["scores_by_length"];
  CHECK(lengths == nlohmann::json::parse("[0.0,1.0,2.0,2.0]"));

  r = cli("match a.tree b.tree --variant topk --k 5 --json", dir);
  CHECK(nlohmann::json::parse(r.out).size() == 2);

  r = cli("match a.tree b.tree --variant subtree -o out/m.txt", dir);
  CHECK(r.status == 0);
  CHECK(slurp(dir / "out" / "m.txt").ends_with("score\t2\n"));
}

TEST_CASE("weights from a configuration file") {
  const auto dir = scratch("weights");
  const std::vector<std::int64_t> parents{-1, 0};
  write_tree_file((dir / "a.tree").string(),
                  build_tree(parents, {Label{"cmd.exe", "bad3"}, Label{"x", "u"}}).tree);
  write_tree_file((dir / "b.tree").string(),
                  build_tree(parents, {Label{"cmd.exe", "user1"}, Label{"y", "u"}}).tree);
  write_text(dir / "w.cfg", "kind=composite\ncomponent_weights=0.75,0.25\nwildcard=1:prefix:user|bad\n");
  const auto r = cli("match a.tree b.tree --weights w.cfg --json", dir);
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["score"].get<double>() == doctest::Approx(1.25));
}

TEST_CASE("gen with a fixed seed is byte-identical") {
  const auto dir = scratch("gen");
  write_text(dir / "toy.cfg", "gw.depth=5\ngw.lambda=1.8\np=0.9\nclass_sizes=3,4\n");
  REQUIRE(cli("gen toy.cfg --seed 7 -o one", dir).status == 0);
  REQUIRE(cli("gen toy.cfg --seed 7 -o two", dir).status == 0);
  REQUIRE(cli("gen toy.cfg --seed 8 -o three", dir).status == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "one")) {
    const auto name = e.path().filename();
    CHECK(slurp(e.path()) == slurp(dir / "two" / name));
    ++files;
  }
  CHECK(files == 8);
  CHECK(slurp(dir / "one" / "manifest.txt") != slurp(dir / "three" / "manifest.txt"));
  CHECK(load_corpus((dir / "one").string()).class_of == std::vector<std::int64_t>{0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("similarity, embedding, clustering and exemplars") {
  const auto dir = scratch("pipeline");
  write_text(dir / "toy.cfg", "seed=3\ngw.depth=5\ngw.lambda=1.8\np=0.9\nclass_sizes=5,5\n");
  REQUIRE(cli("gen toy.cfg -o corpus", dir).status == 0);
  REQUIRE(cli("simmatrix corpus -o m --threads 2", dir).status == 0);
  CHECK(first_line(slurp(dir / "m" / "distance.csv")) == "n=10");
  REQUIRE(cli("embed m/distance.csv --dims 2 -o e.csv", dir).status == 0);
  CHECK(first_line(slurp(dir / "e.csv")) == "id,x1,x2");

  auto r = cli("cluster e.csv --k 2", dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.starts_with("# k=2"));
  r = cli("cluster m/distance.csv --k 3 -o p.csv", dir);
  REQUIRE(r.status == 0);

  // partition in the density-clusterer layout: comment header, any row order, noise rows
  write_text(dir / "bridge.csv",
             "# min_cluster_size=2 seed=0\nid,cluster\n9,1\n0,0\n1,0\n2,-1\n3,0\n4,0\n5,1\n6,1\n7,-1\n8,1\n");
  r = cli("exemplar corpus bridge.csv -o ex", dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("cluster=0 support=6") != std::string::npos);
  CHECK(r.out.find("cluster=1 support=6") != std::string::npos);
  CHECK(fs::exists(dir / "ex" / "exemplar_1.txt"));
  CHECK(first_line(slurp(dir / "ex" / "exemplar_0.txt")) == "support=6");

  write_text(dir / "short.csv", "id,cluster\n0,0\n1,0\n");
  r = cli("exemplar corpus short.csv -o ex2", dir);
  CHECK(r.status == 3);
  CHECK(first_line(r.err) == "error=ParseError");
}

TEST_CASE("featurize counts scores at or above tau") {
  const auto dir = scratch("featurize");
  const std::vector<LabelledTree> trees{make_path({"A", "B", "C", "D"}), make_path({"A", "B", "X", "Y"}),
                                        make_tree(std::vector<std::int64_t>{-1, 0, 0, 1}, {"A", "B", "C", "D"})};
  const std::vector<LabelledTree> templates{make_path({"A", "B", "C", "D"}), make_path({"A", "B", "Y"}),
                                            make_path({"Q"})};
  KeyValueConfig header;
  header.set("format", kCorpusFormat);
  write_corpus((dir / "corpus").string(), trees, header, {}, {});
  write_corpus((dir / "templates").string(), templates, header, {}, {});

  const auto r = cli("featurize corpus --templates templates --tau 3", dir);
  REQUIRE(r.status == 0);
  CHECK(r.out == "# tau=3\nid,x_1,x_2,x_3,count\n0,4,2,0,1\n1,2,3,0,1\n2,3,2,0,1\n");

  CHECK(cli("featurize corpus --random-templates 2 --seed 4 --save-templates picked -o f.csv", dir).status == 0);
  CHECK(load_corpus((dir / "picked").string()).trees.size() == 2);
  CHECK(cli("featurize corpus", dir).status == 2);
}

TEST_CASE("hist tables") {
  const auto dir = scratch("hist");
  write_text(dir / "toy.cfg", "seed=11\ngw.depth=5\ngw.lambda=1.8\np=1\nclass_sizes=4,4\n");
  REQUIRE(cli("gen toy.cfg -o corpus", dir).status == 0);
  REQUIRE(cli("hist corpus --reference-class 0 -o h", dir).status == 0);
  const auto sim = split(slurp(dir / "h" / "similarity.csv"), '\n');
  CHECK(sim[0] == "id,class,score");
  CHECK(sim.size() == 10);  // header, 8 rows, trailing empty
  CHECK(first_line(slurp(dir / "h" / "counts.csv")) == "id,class,A,B,C,D,E");

  write_abc_fixture(dir);
  CHECK(cli("hist corpus --reference a.tree -o h2", dir).status == 0);
  CHECK(cli("hist corpus -o h3", dir).status == 2);
}

TEST_CASE("ingest and subtrees") {
  const auto dir = scratch("ingest");
  write_text(dir / "clean.csv", testing::kTwoPairsTable);
  write_text(dir / "messy.csv", testing::kMessyTable);

  auto r = cli("ingest clean.csv -o clean --strict", dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.starts_with("trees=2 nodes=4 edges=2"));

  r = cli("ingest messy.csv -o messy --timestamp 2026-01-01T00:00:00Z", dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.starts_with("trees=4 nodes=11 edges=7"));
  const auto c = load_corpus((dir / "messy").string());
  CHECK(c.manifest.header.get("ingested_at") == "2026-01-01T00:00:00Z");

  r = cli("ingest messy.csv -o strict --strict", dir);
  CHECK(r.status == 4);
  CHECK(first_line(r.err) == "error=IntegrityWarning");
  CHECK_FALSE(fs::exists(dir / "strict"));

  r = cli("subtrees messy -o sub", dir);
  REQUIRE(r.status == 0);
  const auto sub = load_corpus((dir / "sub").string());
  // r1 in the first tree, k1 and k2 in the repaired cycle
  CHECK(sub.trees.size() == 3);

  write_text(dir / "semi.csv", "p;pp;n;u\n1;;a;x\n2;1;b;x\n");
  r = cli("ingest semi.csv -o semi --delimiter ';' --columns p,pp,n,u", dir);
  CHECK(r.status == 0);
  CHECK(r.out.starts_with("trees=1 nodes=2 edges=1"));
}

TEST_CASE("error reporting and exit status") {
  const auto dir = scratch("errors");
  write_abc_fixture(dir);
  write_text(dir / "bad.tree", "0\t-1\tA\n1\tzero\tB\n");

  auto r = cli("match a.tree", dir);
  CHECK(r.status == 2);
  CHECK(first_line(r.err) == "error=UsageError");

  r = cli("match a.tree b.tree --variant sideways", dir);
  CHECK(r.status == 2);

  r = cli("match a.tree bad.tree", dir);
  CHECK(r.status == 3);
  CHECK(first_line(r.err) == "error=ParseError");
  CHECK(r.err.find("bad.tree:2") != std::string::npos);

  r = cli("match a.tree missing.tree", dir);
  CHECK(r.status == 1);
  CHECK(first_line(r.err) == "error=IoError");

  r = cli("embed nothing.csv", dir);
  CHECK(r.status == 1);

  CHECK(cli("--help", dir).status == 0);
}
