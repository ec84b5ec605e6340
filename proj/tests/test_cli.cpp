#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lipsel/error.hpp"
#include "lipsel/io.hpp"
#include "lipsel/lab.hpp"

using namespace lipsel;
using Json = nlohmann::json;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& content) {
  std::ofstream f(name, std::ios::binary | std::ios::trunc);
  f << content;
  f.close();
  return name;
}

// The message of the ValidationError raised by the given callable.
template <typename Fn>
std::string error_of(Fn fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

Rat q(long n, long d = 1) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

const char* kTwoPointDoc = R"({
  "dimension": 2,
  "norm": {"kind": "linf"},
  "m": 1,
  "points": ["a", "b"],
  "metric": {"matrix": [["0", "2"], ["2", "0"]]},
  "sets": {"a": [["0", "0"], ["0", "2"]], "b": [["1", "0"]]}
})";

}  // namespace

TEST_CASE("emitted counterexample file round-trips through the parser") {
  RunResult emitted = cli({"counterexample", "--kind", "m1", "--lambda", "2"});
  REQUIRE(emitted.code == 0);
  REQUIRE(emitted.err.empty());

  SetValuedInstance parsed = parse_instance(emitted.out);
  SetValuedInstance direct = counterexample_m1(Rat(2));
  CHECK(parsed.space.points == direct.space.points);
  CHECK(parsed.m == direct.m);
  for (size_t i = 0; i < direct.images.size(); ++i) CHECK(parsed.images[i] == direct.images[i]);

  ScanReport via_file = restriction_scan(parsed, 3);
  ScanReport in_memory = restriction_scan(direct, 3);
  CHECK(via_file.local == in_memory.local);
  CHECK(via_file.global == in_memory.global);
  CHECK(via_file.witness == in_memory.witness);

  // The emitted document is already canonical.
  CHECK(serialize_instance(parsed) == emitted.out);
}

TEST_CASE("canonical serialization is idempotent on denormalized input") {
  // Unreduced rationals, a ball_vrep norm that is really the sup-norm ball,
  // duplicate and interior hull points: all fold away canonically.
  std::string doc = R"({
    "metric": {"matrix": [["0", "4/2"], ["2", "0"]]},
    "sets": {"b": [["1", "0"]], "a": [["0", "2"], ["0", "0"], ["0", "1"], ["0", "0"]]},
    "m": 1,
    "norm": {"kind": "ball_vrep",
             "vertices": [["1", "1"], ["-1", "1"], ["1", "-1"], ["-1", "-1"], ["0", "0"]]},
    "points": ["a", "b"],
    "dimension": 2
  })";
  std::string once = serialize_instance(parse_instance(doc));
  std::string twice = serialize_instance(parse_instance(once));
  CHECK(once == twice);
  CHECK(once.find("\"linf\"") != std::string::npos);
  CHECK(once.find("4/2") == std::string::npos);

  // And the canonical form equals the hand-normalized document's.
  CHECK(once == serialize_instance(parse_instance(kTwoPointDoc)));
}

TEST_CASE("schema and scalar errors name the offending path") {
  auto patched = [&](const std::string& from, const std::string& to) {
    std::string doc = kTwoPointDoc;
    auto pos = doc.find(from);
    REQUIRE(pos != std::string::npos);
    return doc.replace(pos, from.size(), to);
  };

  std::string msg = error_of([&] { parse_instance(patched("\"2\"], [\"2\"", "\"1/0\"], [\"2\"")); });
  CHECK(msg.find("/metric/matrix/0/1") != std::string::npos);

  msg = error_of([&] { parse_instance(patched("\"b\": [[\"1\", \"0\"]]", "\"b2\": [[\"1\", \"0\"]]")); });
  CHECK(msg.find("/sets") != std::string::npos);
  CHECK(msg.find("b2") != std::string::npos);

  msg = error_of([&] { parse_instance(patched(", \"b\": [[\"1\", \"0\"]]}", "}")); });
  CHECK(msg.find("missing \"b\"") != std::string::npos);

  msg = error_of([&] { parse_instance(patched("\"m\": 1", "\"m\": 1, \"extra\": 3")); });
  CHECK(msg.find("/extra") != std::string::npos);

  msg = error_of([&] { parse_instance(patched("linf", "l3")); });
  CHECK(msg.find("/norm/kind") != std::string::npos);

  msg = error_of([&] { parse_instance(patched("[[\"0\", \"0\"],", "[[\"0\", \"0\", \"9\"],")); });
  CHECK(msg.find("/sets/a/0") != std::string::npos);

  msg = error_of([&] { parse_instance(patched("\"b\": [[\"1\", \"0\"]]", "\"b\": [[\"1\", \"inf\"]]")); });
  CHECK(msg.find("/sets/b") != std::string::npos);

  msg = error_of([&] { parse_instance("{\"dimension\": 2"); });
  CHECK(msg.find("not valid JSON") != std::string::npos);

  // Distance symmetry failures come from the space validator, already named.
  msg = error_of([&] { parse_instance(patched("[\"2\", \"0\"]", "[\"3\", \"0\"]")); });
  CHECK_FALSE(msg.empty());
}

TEST_CASE("tree metric payload") {
  std::string doc = R"({
    "dimension": 1,
    "norm": {"kind": "linf"},
    "m": 0,
    "points": ["r", "s", "t"],
    "metric": {"tree": {"edges": [["r", "s", "1"], ["s", "t", "2"]], "root": "s"}},
    "sets": {"r": [["0"]], "s": [["1"]], "t": [["3"]]}
  })";
  ParsedDocument pd = parse_document(doc);
  REQUIRE(pd.tree.has_value());
  CHECK(pd.tree->root == 1);
  CHECK(pd.instance.space.d(0, 2) == Dist::of(Rat(3)));

  // Canonicalization flattens the tree to its path metric table.
  std::string canon = serialize_instance(pd.instance);
  CHECK(canon.find("matrix") != std::string::npos);
  CHECK(canon == serialize_instance(parse_instance(canon)));

  std::string bad = doc;
  bad.replace(bad.find("[\"s\", \"t\", \"2\"]"), 15, "[\"s\", \"q\", \"2\"]");
  std::string msg = error_of([&] { parse_document(bad); });
  CHECK(msg.find("/metric/tree/edges/1/1") != std::string::npos);
}

TEST_CASE("solve and scan on an instance file") {
  RunResult emitted = cli({"counterexample", "--kind", "m1", "--lambda", "2"});
  std::string path = write_file("tmp_cli_m1.json", emitted.out);

  RunResult solved = cli({"solve", path});
  REQUIRE(solved.code == 0);
  Json doc = Json::parse(solved.out);
  CHECK(doc["feasible"] == true);
  CHECK(rat_from_string(doc["lambda_star"]) >= 2);
  CHECK(doc["seminorm"] == doc["lambda_star"]);
  CHECK(doc["values"].size() == 4);

  RunResult scanned = cli({"scan", path, "--N", "3"});
  REQUIRE(scanned.code == 0);
  Json rep = Json::parse(scanned.out);
  CHECK(rep["N"] == 3);
  CHECK(rat_from_string(rep["local"]) <= 1);
  CHECK(rat_from_string(rep["global"]) >= 2);
  CHECK(rep["witness"].size() == 3);

  // Default --N is the finiteness number 2^min(m+1, d) = 4 here.
  RunResult full = cli({"scan", path});
  REQUIRE(full.code == 0);
  Json full_rep = Json::parse(full.out);
  CHECK(full_rep["N"] == 4);
  CHECK(full_rep["ratio"] == "1");

  RunResult fixed = cli({"solve", path, "--lambda", "2"});
  REQUIRE(fixed.code == 0);
  Json fx = Json::parse(fixed.out);
  CHECK(fx["feasible"] == true);
  CHECK(rat_from_string(fx["seminorm"]) <= 2);

  RunResult below = cli({"solve", path, "--lambda", "1"});
  CHECK(below.code == 1);
  CHECK(Json::parse(below.out)["feasible"] == false);
}

TEST_CASE("exit codes") {
  // Triangle violation: d(a,c) = 9 > 1 + 1.
  std::string bad = R"({
    "dimension": 1, "norm": {"kind": "linf"}, "m": 0, "points": ["a", "b", "c"],
    "metric": {"matrix": [["0", "1", "9"], ["1", "0", "1"], ["9", "1", "0"]]},
    "sets": {"a": [["0"]], "b": [["0"]], "c": [["0"]]}
  })";
  std::string bad_path = write_file("tmp_cli_bad.json", bad);
  RunResult r = cli({"validate", bad_path});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("error:") != std::string::npos);

  // Zero-distance pair with disjoint singletons: infeasible at every lambda.
  std::string infeasible = R"({
    "dimension": 1, "norm": {"kind": "linf"}, "m": 0, "points": ["a", "b"],
    "metric": {"matrix": [["0", "0"], ["0", "0"]]},
    "sets": {"a": [["0"]], "b": [["1"]]}
  })";
  std::string inf_path = write_file("tmp_cli_infeasible.json", infeasible);
  r = cli({"solve", inf_path});
  CHECK(r.code == 1);
  CHECK(Json::parse(r.out)["feasible"] == false);

  std::string m1 = cli({"counterexample", "--kind", "m1", "--lambda", "2"}).out;
  std::string m1_path = write_file("tmp_cli_m1b.json", m1);
  r = cli({"scan", m1_path, "--N", "3", "--cap", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("cap") != std::string::npos);

  CHECK(cli({"solvee", m1_path}).code == 2);
  CHECK(cli({"solve", m1_path, "--bogus"}).code == 2);
  CHECK(cli({"solve"}).code == 2);
  CHECK(cli({"solve", "tmp_cli_missing.json"}).code == 2);
  CHECK(cli({"solve", m1_path, "--format", "xml"}).code == 2);
  CHECK(cli({"solve", m1_path, "--lambda", "1/0"}).code == 2);
  CHECK(cli({}).code == 2);

  RunResult usage = cli({"solvee", m1_path});
  CHECK(usage.err.find("Usage") != std::string::npos);
  CHECK(usage.out.empty());

  RunResult help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("counterexample") != std::string::npos);
}

TEST_CASE("gamma and orbit subcommands") {
  std::string path = write_file("tmp_cli_gamma.json",
                                cli({"counterexample", "--kind", "m1", "--lambda", "2"}).out);
  SetValuedInstance inst = counterexample_m1(Rat(2));

  RunResult g = cli({"gamma", path, "--lambda", "2", "--point", "u1", "--subset", "u2,u3"});
  REQUIRE(g.code == 0);
  Json doc = Json::parse(g.out);
  CHECK(doc["point"] == "u1");

  // Rebuild the emitted vertex set and compare with the library's answer.
  std::vector<Vec> verts;
  for (const auto& vj : doc["vertices"]) {
    Vec v;
    for (const auto& c : vj) v.push_back(rat_from_string(c));
    verts.push_back(v);
  }
  auto expected = gamma_set(inst, Rat(2), 0, {1, 2});
  REQUIRE(expected.has_value());
  CHECK(hull(verts) == *expected);

  RunResult g1 = cli({"gamma", path, "--lambda", "2", "--point", "u1", "--ell", "1"});
  REQUIRE(g1.code == 0);
  CHECK(Json::parse(g1.out).contains("vertices"));

  // Both subset flavors at once, or neither, is a usage error.
  CHECK(cli({"gamma", path, "--lambda", "2", "--point", "u1"}).code == 2);
  CHECK(cli({"gamma", path, "--lambda", "2", "--point", "u1", "--subset", "u2", "--ell", "1"})
            .code == 2);
  CHECK(cli({"gamma", path, "--lambda", "2", "--point", "nope", "--subset", "u2"}).code == 2);

  RunResult orb = cli({"orbit", path, "--lambda", "2", "--point", "u2"});
  REQUIRE(orb.code == 0);
  CHECK(Json::parse(orb.out)["vertices"].size() >= 1);

  // Below the sharpness threshold no full selection exists.
  RunResult empty = cli({"orbit", path, "--lambda", "1", "--point", "u2"});
  CHECK(empty.code == 1);
  CHECK(Json::parse(empty.out)["empty"] == true);
}

TEST_CASE("tree, cover and whitney subcommands") {
  std::string tree_doc = R"({
    "dimension": 1,
    "norm": {"kind": "linf"},
    "m": 0,
    "points": ["r", "s", "t"],
    "metric": {"tree": {"edges": [["r", "s", "1"], ["s", "t", "1"]]}},
    "sets": {"r": [["0"]], "s": [["1"]], "t": [["2"]]}
  })";
  std::string tree_path = write_file("tmp_cli_tree.json", tree_doc);

  RunResult cov = cli({"cover", tree_path, "--scale", "4"});
  REQUIRE(cov.code == 0);
  Json cov_doc = Json::parse(cov.out);
  CHECK(cov_doc["ok"] == true);
  CHECK(cov_doc["tree_from_document"] == true);
  size_t covered = 0;
  for (const auto& part : cov_doc["parts"]) covered += part["members"].size();
  CHECK(covered == 3);

  RunResult wh = cli({"whitney", tree_path, "--scale", "1"});
  REQUIRE(wh.code == 0);
  Json wh_doc = Json::parse(wh.out);
  REQUIRE(wh_doc["entries"].size() >= 1);
  // Exact partition of unity: per-point weights sum to one.
  size_t npts = wh_doc["entries"][0]["values"].size();
  for (size_t x = 0; x < npts; ++x) {
    Rat total = 0;
    for (const auto& e : wh_doc["entries"]) total += rat_from_string(e["values"][x]);
    CHECK(total == 1);
  }

  RunResult t = cli({"tree", tree_path});
  REQUIRE(t.code == 0);
  Json t_doc = Json::parse(t.out);
  CHECK(t_doc["edges"].size() == 2);
  CHECK(rat_from_string(t_doc["max_stretch"]) >= 1);
  CHECK(rat_from_string(t_doc["max_stretch"]) <= rat_from_string(t_doc["distortion_bound"]));

  // Matrix payloads fall back to the spanning tree.
  std::string m1_path = write_file("tmp_cli_m1c.json",
                                   cli({"counterexample", "--kind", "m1", "--lambda", "2"}).out);
  RunResult cov2 = cli({"cover", m1_path, "--scale", "2"});
  REQUIRE(cov2.code == 0);
  CHECK(Json::parse(cov2.out)["tree_from_document"] == false);
  CHECK(Json::parse(cov2.out)["ok"] == true);
}

TEST_CASE("patch-demo blends solver locals into a finite-seminorm selection") {
  RunResult demo = cli({"patch-demo", "--seed", "7"});
  REQUIRE(demo.code == 0);
  Json doc = Json::parse(demo.out);
  CHECK(doc["points"].size() == 7);
  CHECK(doc["values"].size() == 7);
  CHECK(doc["multiplicity"].get<int>() >= 1);
  CHECK(doc["seminorm"] != "inf");

  // Identical invocations are byte-identical; other seeds differ.
  RunResult again = cli({"patch-demo", "--seed", "7"});
  CHECK(again.out == demo.out);
  CHECK(cli({"patch-demo", "--seed", "8"}).out != demo.out);
}

TEST_CASE("selector subcommand") {
  std::string square = R"({
    "dimension": 2,
    "norm": {"kind": "linf"},
    "vertices": [["-1", "-1"], ["1", "-1"], ["-1", "1"], ["1", "1"]]
  })";
  std::string path = write_file("tmp_cli_square.json", square);
  RunResult r = cli({"selector", path});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["rect"] == Json::array({"0", "0"}));
  CHECK(doc["diameter"] == "2");
  CHECK(doc["regularity"] == "1");
  CHECK(doc["parallel_body"]["inside"] == true);
  CHECK(doc["parallel_body"]["point"] == Json::array({"0", "0"}));
  CHECK(std::abs(doc["steiner"][0].get<double>()) <= 1e-9);
  CHECK(std::abs(doc["steiner"][1].get<double>()) <= 1e-9);
  CHECK(doc["notes"].empty());

  // A full-dimensional body in ambient 3 keeps only the diameter.
  std::string tetra = R"({
    "dimension": 3,
    "norm": {"kind": "l1"},
    "vertices": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
  })";
  std::string tetra_path = write_file("tmp_cli_tetra.json", tetra);
  r = cli({"selector", tetra_path});
  REQUIRE(r.code == 0);
  doc = Json::parse(r.out);
  CHECK(doc["affine_dim"] == 3);
  CHECK_FALSE(doc.contains("rect"));
  CHECK_FALSE(doc.contains("regularity"));
  CHECK_FALSE(doc.contains("steiner"));
  CHECK(doc["notes"].size() == 3);

  CHECK(cli({"selector", write_file("tmp_cli_bad_body.json", "{\"dimension\": 2}")}).code == 2);
}

TEST_CASE("identical invocations produce identical bytes") {
  std::string path = write_file("tmp_cli_det.json",
                                cli({"counterexample", "--kind", "grid", "--N", "2", "--n", "6"}).out);
  RunResult a = cli({"scan", path, "--N", "2"});
  RunResult b = cli({"scan", path, "--N", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  Json rep = Json::parse(a.out);
  CHECK(rat_from_string(rep["local"]) == q(1, 4));
  CHECK(rat_from_string(rep["global"]) == q(3, 2));
  CHECK(rat_from_string(rep["ratio"]) == q(6));

  RunResult s1 = cli({"solve", path});
  RunResult s2 = cli({"solve", path});
  CHECK(s1.out == s2.out);
}
