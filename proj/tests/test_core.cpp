#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathmatch/config.hpp"
#include "pathmatch/corpus.hpp"
#include "pathmatch/text.hpp"
#include "pathmatch/tree.hpp"
#include "pathmatch/weights.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace pathmatch;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

// Ancestor test by walking parent links; independent of the interval index.
bool walk_ancestor(const LabelledTree& t, NodeId u, NodeId v) {
  for (auto p = t.parent(v); p != kNoParent; p = t.parent(static_cast<NodeId>(p))) {
    if (static_cast<NodeId>(p) == u) return true;
  }
  return false;
}

Matching pairs(std::initializer_list<std::pair<NodeId, NodeId>> list) {
  Matching m;
  for (const auto& [u, v] : list) m.pairs.push_back({u, v});
  return m;
}

}  // namespace

TEST_CASE("build_tree on literal arrays") {
  const auto one = make_tree(std::vector<std::int64_t>{-1}, {"A"});
  CHECK(one.size() == 1);
  CHECK(one.height() == 0);

  const auto path = make_tree(std::vector<std::int64_t>{-1, 0, 1}, {"A", "B", "C"});
  CHECK(path.height() == 2);
  CHECK(path.chain_to(2) == std::vector<NodeId>{0, 1, 2});

  const auto t = make_tree(std::vector<std::int64_t>{-1, 0, 0, 1}, {"A", "B", "C", "D"});
  CHECK(t.chain_to(3) == std::vector<NodeId>{0, 1, 3});
  CHECK(t.leaves() == std::vector<NodeId>{2, 3});
  CHECK(t.subtree_size(1) == 2);
  CHECK(t.subtree(1) == make_path({"B", "D"}));
}

TEST_CASE("build_tree relabels unordered input breadth-first") {
  // input node 2 is the root, 0 hangs under 1, 1 under 2
  const std::vector<std::int64_t> parents{1, 2, -1};
  const auto built = build_tree(parents, {Label{"c"}, Label{"b"}, Label{"a"}});
  CHECK(built.relabelled);
  CHECK(built.new_index == std::vector<NodeId>{2, 1, 0});
  CHECK(built.tree == make_path({"a", "b", "c"}));

  const std::vector<std::int64_t> ordered{-1, 0, 0};
  const auto same = build_tree(ordered, {Label{"a"}, Label{"b"}, Label{"c"}});
  CHECK_FALSE(same.relabelled);
  CHECK(same.new_index == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("build_tree rejects malformed arrays") {
  auto build = [](std::vector<std::int64_t> p) {
    std::vector<Label> labels(p.size(), Label{"x"});
    return build_tree(p, std::move(labels));
  };
  CHECK(code_of([&] { build({-1, -1}); }) == ErrorCode::MultipleRoots);
  CHECK(code_of([&] { build({-1, 2, 1}); }) == ErrorCode::CycleDetected);
  CHECK(code_of([&] { build({-1, 5}); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { build({}); }) == ErrorCode::EmptyInput);
  CHECK(code_of([&] { build_tree(std::vector<std::int64_t>{-1, 0}, {Label{"a"}, Label{"b", "c"}}); }) ==
        ErrorCode::ArityMismatch);
}

TEST_CASE("parents precede children and is_ancestor agrees with a parent walk") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    Rng rng(derive_seed(404, s));
    const auto t = testing::small_gw_tree(rng, 3 + s % 5, 1.9, 200, 4);
    for (NodeId v = 1; v < t.size(); ++v) CHECK(t.parent(v) < static_cast<std::int64_t>(v));
    for (NodeId u = 0; u < t.size(); ++u) {
      for (NodeId v = 0; v < t.size(); ++v) {
        if (t.is_ancestor(u, v) != walk_ancestor(t, u, v)) {
          FAIL_CHECK("mismatch at " << u << "," << v);
        }
      }
    }
  }
}

TEST_CASE("is_ancestor examples") {
  const auto path = make_path({"a", "b", "c"});
  CHECK(path.is_ancestor(0, 2));
  CHECK_FALSE(path.is_ancestor(1, 1));
  CHECK_FALSE(path.is_ancestor(2, 0));
  const auto cherry = make_tree(std::vector<std::int64_t>{-1, 0, 0}, {"a", "b", "c"});
  CHECK_FALSE(cherry.is_ancestor(1, 2));
  CHECK(code_of([&] { (void)cherry.is_ancestor(0, 3); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("validate_matching") {
  const auto path = make_path({"a", "b", "c"});
  const auto cherry = make_tree(std::vector<std::int64_t>{-1, 0, 0}, {"a", "b", "c"});
  CHECK(validate_matching(path, path, Matching{}));
  CHECK(validate_matching(path, path, pairs({{0, 0}, {1, 1}})));
  CHECK_FALSE(validate_matching(cherry, path, pairs({{1, 0}, {2, 1}})));
  CHECK_FALSE(validate_matching(path, path, pairs({{1, 1}, {0, 2}})));
  CHECK_FALSE(validate_matching(path, path, pairs({{0, 0}, {0, 1}})));
  CHECK_FALSE(validate_matching(path, path, pairs({{0, 0}, {7, 1}})));
}

TEST_CASE("score_matching") {
  const auto g = make_path({"A", "B", "C"});
  const auto h = make_path({"A", "X", "C"});
  const auto w = indicator_weight();
  CHECK(score_matching(g, h, Matching{}, w) == 0.0);
  CHECK(score_matching(g, h, pairs({{0, 0}}), w) == 1.0);
  CHECK(score_matching(g, h, pairs({{0, 0}, {2, 2}}), w) == 2.0);
  CHECK(code_of([&] { score_matching(g, h, pairs({{2, 2}, {0, 0}}), w); }) == ErrorCode::InvalidMatching);

  // concatenating two valid segments adds their scores
  Rng rng(12);
  for (int rep = 0; rep < 30; ++rep) {
    const auto a = testing::label_uniform(make_path(std::vector<std::string>(8, "")), 3, rng);
    const auto b = testing::label_uniform(make_path(std::vector<std::string>(8, "")), 3, rng);
    const auto cut_g = 1 + rng.below(6);
    const auto cut_h = 1 + rng.below(6);
    Matching first, second, whole;
    for (NodeId i = 0; i < cut_g && i < cut_h; ++i) first.pairs.push_back({i, i});
    for (NodeId i = 0; cut_g + i < 8 && cut_h + i < 8; ++i) second.pairs.push_back({cut_g + i, cut_h + i});
    whole.pairs = first.pairs;
    whole.pairs.insert(whole.pairs.end(), second.pairs.begin(), second.pairs.end());
    CHECK(score_matching(a, b, whole, w) ==
          score_matching(a, b, first, w) + score_matching(a, b, second, w));
  }
}

TEST_CASE("tree files") {
  const auto t = build_tree(std::vector<std::int64_t>{-1, 0, 0, 2},
                            {Label{"explorer.exe", "alice"}, Label{"", "alice"}, Label{"cmd.exe", ""},
                             Label{"a b", "c"}})
                     .tree;
  std::stringstream s;
  write_tree(s, t);
  CHECK(read_tree(s) == t);

  std::istringstream commented("# header\n0\t-1\tA\n\n# mid\n1\t0\tB\n");
  CHECK(read_tree(commented) == make_path({"A", "B"}));

  // ids are arbitrary strings and may come before their parent
  std::istringstream unordered("kid\troot\tB\nroot\t-1\tA\n");
  CHECK(read_tree(unordered) == make_path({"A", "B"}));

  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_tree(in, "t");
  };
  CHECK(code_of([&] { parse(""); }) == ErrorCode::EmptyInput);
  CHECK(code_of([&] { parse("0\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse("0\t-1\tA\n0\t0\tB\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse("0\t-1\tA\n1\t9\tB\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse("0\t-1\tA\n1\t-1\tB\n"); }) == ErrorCode::MultipleRoots);
  try {
    parse("0\t-1\tA\n1\t9\tB\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("t:2") != std::string::npos);
  }
}

TEST_CASE("text helpers") {
  CHECK(split("a,,b,", ',') == std::vector<std::string>{"a", "", "b", ""});
  CHECK(join({"x", "y", "z"}, "--") == "x--y--z");
  CHECK(trim("  a b\t\r\n") == "a b");
  CHECK(starts_with_ci("UserAdmin", "user"));
  CHECK_FALSE(starts_with_ci("us", "user"));
  CHECK(equals_ci("Unknown", "UNKNOWN"));
  CHECK(parse_double(" 0.25 ", "x") == 0.25);
  CHECK(parse_int("-3", "x") == -3);
  CHECK(parse_uint("18446744073709551615", "x") == 18446744073709551615ULL);
  CHECK(parse_double_list("1,2.5", "x") == std::vector<double>{1.0, 2.5});
  CHECK(code_of([] { parse_double("1.5x", "x"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_uint("-1", "x"); }) == ErrorCode::ParseError);
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5}) CHECK(parse_double(format_double(x), "x") == x);
  // published FNV-1a 64 vectors
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(fnv1a64("bar", fnv1a64("foo")) == fnv1a64("foobar"));
}

TEST_CASE("key-value configuration") {
  const auto cfg = KeyValueConfig::parse_string("# c\nkind = composite\n\nrule=a\nrule=b\nx=1.5\nn=7\n", "cfg");
  CHECK(cfg.get("kind") == "composite");
  CHECK(cfg.get_all("rule") == std::vector<std::string>{"a", "b"});
  CHECK(cfg.get_double("x", 0) == 1.5);
  CHECK(cfg.get_uint("n", 0) == 7);
  CHECK(cfg.get_uint("missing", 9) == 9);
  CHECK(cfg.get_or("missing", "d") == "d");
  CHECK(code_of([&] { cfg.require("missing"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { cfg.get_double("kind", 0); }) == ErrorCode::ParseError);
  CHECK(code_of([] { KeyValueConfig::parse_string("novalue\n"); }) == ErrorCode::ParseError);
  CHECK(KeyValueConfig::parse_string(cfg.str()).entries() == cfg.entries());
}

TEST_CASE("indicator and frequency weights") {
  const auto ind = indicator_weight();
  CHECK(ind(Label{"A"}, Label{"A"}) == 1.0);
  CHECK(ind(Label{"A"}, Label{"B"}) == 0.0);
  CHECK(ind(Label{"cmd", "alice"}, Label{"cmd", "bob"}) == 0.0);

  const std::vector<LabelledTree> corpus{make_path({"A", "A", "B"}), make_path({"C", "C", "C", "B", "C", "C", "C"})};
  const auto freq = frequency_weight(corpus);
  CHECK(freq(Label{"Z"}, Label{"Z"}) == 1.0);
  CHECK(freq(Label{"A"}, Label{"A"}) == 0.5);
  CHECK(freq(Label{"B"}, Label{"B"}) == 0.5);
  CHECK(freq(Label{"C"}, Label{"C"}) == doctest::Approx(0.25));
  CHECK(freq(Label{"A"}, Label{"B"}) == 0.0);
  CHECK(freq.count(Label{"C"}) == 6);
  CHECK(code_of([] { frequency_weight(std::vector<LabelledTree>{}); }) == ErrorCode::EmptyCorpus);
}

TEST_CASE("composite weights and wildcard rules") {
  const auto w = composite_weight({0.75, 0.25});
  CHECK(w(Label{"cmd.exe", "a"}, Label{"cmd.exe", "a"}) == 1.0);
  CHECK(w(Label{"cmd.exe", "a"}, Label{"cmd.exe", "b"}) == 0.75);
  CHECK(w(Label{"x", "a"}, Label{"y", "a"}) == 0.25);

  const auto rule = parse_wildcard_rule("1:prefix:user|bad");
  const auto ww = composite_weight({1.0, 0.0}, {rule});
  CHECK(ww(Label{"cmd.exe", "bad3"}, Label{"cmd.exe", "user1"}) == 1.0);
  const auto exact = WeightSpec::indicator({rule});
  CHECK(exact(Label{"cmd.exe", "bad3"}, Label{"cmd.exe", "user1"}) == 1.0);
  CHECK(exact(Label{"cmd.exe", "bad3"}, Label{"cmd.exe", "root"}) == 0.0);
  CHECK(format_wildcard_rule(rule) == "1:prefix:user|bad");
  CHECK(parse_wildcard_rule(format_wildcard_rule(rule)) == rule);

  CHECK(code_of([&] { w(Label{"a"}, Label{"a"}); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([] { composite_weight({0.5, 0.6}); }) == ErrorCode::DomainError);
  CHECK(code_of([] { composite_weight({1.5, -0.5}); }) == ErrorCode::DomainError);
  CHECK(code_of([] { parse_wildcard_rule("1:glob:x"); }) == ErrorCode::ParseError);
}

TEST_CASE("weights are symmetric and within [0,1] on random labels") {
  Rng rng(77);
  auto word = [&] {
    std::string s;
    const auto n = rng.below(4);
    for (std::uint64_t i = 0; i < n; ++i) s += static_cast<char>('a' + rng.below(3));
    return s;
  };
  std::vector<LabelledTree> corpus;
  for (int t = 0; t < 5; ++t) {
    std::vector<Label> labels;
    for (int v = 0; v < 6; ++v) labels.push_back({word(), word()});
    std::vector<std::int64_t> parents{-1, 0, 1, 2, 3, 4};
    corpus.push_back(build_tree(parents, labels).tree);
  }
  const std::vector<WeightSpec> specs{indicator_weight(), frequency_weight(corpus),
                                      composite_weight({0.6, 0.4}, {parse_wildcard_rule("0:prefix:a|b")})};
  for (const auto& w : specs) {
    for (int rep = 0; rep < 500; ++rep) {
      const Label a{word(), word()};
      const Label b{word(), word()};
      const double x = w(a, b);
      CHECK(x == w(b, a));
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("weight configuration round-trips") {
  const auto dir = fs::temp_directory_path() / "pathmatch_weight_cfg";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const auto comp = composite_weight({0.75, 0.25}, {parse_wildcard_rule("1:prefix:user|bad")});
  CHECK(weight_from_config(weight_config(comp)) == comp);
  CHECK(weight_from_config(weight_config(indicator_weight())) == indicator_weight());

  const std::vector<LabelledTree> corpus{make_path({"A", "B", "A"})};
  const auto freq = frequency_weight(corpus);
  write_frequency_table((dir / "freq.tsv").string(), freq.frequency_table());
  CHECK(read_frequency_table((dir / "freq.tsv").string()) == freq.frequency_table());
  const auto cfg = weight_config(freq, "freq.tsv");
  CHECK(weight_from_config(cfg, dir.string()) == freq);
  // without a table the corpus supplies the counts
  CHECK(weight_from_config(KeyValueConfig::parse_string("kind=frequency\n"), "", corpus) == freq);
  CHECK(code_of([] { weight_from_config(KeyValueConfig::parse_string("kind=frequency\n")); }) ==
        ErrorCode::EmptyCorpus);
  CHECK(code_of([] { weight_from_config(KeyValueConfig::parse_string("kind=cosine\n")); }) ==
        ErrorCode::ParseError);
  fs::remove_all(dir);
}

TEST_CASE("corpus directories") {
  const auto dir = fs::temp_directory_path() / "pathmatch_corpus_dir";
  fs::remove_all(dir);
  const std::vector<LabelledTree> trees{make_path({"A"}), make_path({"B", "C"}), make_path({"D"})};
  KeyValueConfig header;
  header.set("format", kCorpusFormat);
  header.set("note", "x");
  write_corpus(dir.string(), trees, header, {"class", "tag"}, {{"1", "a"}, {"0", "b"}, {"1", "c"}});

  const auto c = load_corpus(dir.string());
  CHECK(c.trees == trees);
  CHECK(c.class_of == std::vector<std::int64_t>{1, 0, 1});
  CHECK(c.manifest.header.get("note") == "x");
  REQUIRE(c.manifest.column("tag"));
  CHECK(c.manifest.rows[2][*c.manifest.column("tag")] == "c");
  CHECK(c.files[1] == "tree_00001.tree");

  // without a manifest every *.tree file is read in name order
  const auto bare = fs::temp_directory_path() / "pathmatch_corpus_bare";
  fs::remove_all(bare);
  fs::create_directories(bare);
  write_tree_file((bare / "b.tree").string(), trees[1]);
  write_tree_file((bare / "a.tree").string(), trees[0]);
  std::ofstream(bare / "notes.txt") << "ignored\n";
  const auto b = load_corpus(bare.string());
  CHECK(b.trees == std::vector<LabelledTree>{trees[0], trees[1]});
  CHECK(b.class_of == std::vector<std::int64_t>{-1, -1});

  CHECK(code_of([] { load_corpus("/nonexistent/pathmatch"); }) == ErrorCode::IoError);
  fs::remove_all(dir);
  fs::remove_all(bare);
}
