#include "lipsel/io.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lipsel/error.hpp"
#include "lipsel/geometry.hpp"

namespace lipsel {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("at " + path + ": " + what);
}

Json parse_json(const std::string& bytes) {
  try {
    return Json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("the document is not valid JSON: ") + e.what());
  }
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing \"") + key + "\"");
  return *it;
}

void reject_unknown_keys(const Json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(path + "/" + item.key(), "unknown key");
  }
}

long int_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// Rational scalars travel as strings so nothing is ever rounded through a
// binary float. The named parses rethrow with the element's path attached.
Rat rat_at(const Json& j, const std::string& path) {
  std::string s = string_at(j, path);
  try {
    return rat_from_string(s);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

Dist dist_at(const Json& j, const std::string& path) {
  std::string s = string_at(j, path);
  try {
    return dist_from_string(s);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

Vec vec_at(const Json& j, const std::string& path, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(path, "expected an array of " + std::to_string(dim) + " coordinates");
  Vec v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(rat_at(j[i], path + "/" + std::to_string(i)));
  return v;
}

std::vector<Vec> vertices_at(const Json& j, const std::string& path, int dim) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of vertices");
  std::vector<Vec> pts;
  for (size_t i = 0; i < j.size(); ++i)
    pts.push_back(vec_at(j[i], path + "/" + std::to_string(i), dim));
  return pts;
}

Polytope hull_at(const Json& j, const std::string& path, int dim) {
  std::vector<Vec> pts = vertices_at(j, path, dim);
  try {
    return hull(pts);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

PolyhedralNorm norm_at(const Json& j, const std::string& path, int dim) {
  if (!j.is_object()) fail(path, "expected an object");
  std::string kind = string_at(field(j, path, "kind"), path + "/kind");
  if (kind == "linf" || kind == "l1") {
    reject_unknown_keys(j, path, {"kind"});
    return kind == "linf" ? norm_linf(dim) : norm_l1(dim);
  }
  if (kind == "ball_vrep") {
    reject_unknown_keys(j, path, {"kind", "vertices"});
    Polytope ball = hull_at(field(j, path, "vertices"), path + "/vertices", dim);
    try {
      return norm_from_ball(ball);
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
  }
  fail(path + "/kind", "unknown norm kind \"" + kind + "\"");
}

std::vector<std::vector<Dist>> table_at(const Json& j, const std::string& path, size_t n) {
  if (!j.is_array() || j.size() != n)
    fail(path, "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<Dist>> table;
  for (size_t i = 0; i < n; ++i) {
    const Json& row = j[i];
    std::string row_path = path + "/" + std::to_string(i);
    if (!row.is_array() || row.size() != n)
      fail(row_path, "expected " + std::to_string(n) + " entries");
    std::vector<Dist> out;
    for (size_t k = 0; k < n; ++k) out.push_back(dist_at(row[k], row_path + "/" + std::to_string(k)));
    table.push_back(std::move(out));
  }
  return table;
}

WeightedTree tree_at(const Json& j, const std::string& path,
                     const std::vector<std::string>& points) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown_keys(j, path, {"edges", "root"});
  const Json& edges_json = field(j, path, "edges");
  std::string edges_path = path + "/edges";
  if (!edges_json.is_array()) fail(edges_path, "expected an array");

  // Labels are resolved against "points" before validate_tree sees indices,
  // so a typo is reported with its path rather than as a connectivity error.
  auto resolve = [&](const Json& item, const std::string& p) {
    std::string label = string_at(item, p);
    for (size_t i = 0; i < points.size(); ++i)
      if (points[i] == label) return static_cast<int>(i);
    fail(p, "unknown point \"" + label + "\"");
  };

  std::vector<TreeEdge> edges;
  for (size_t i = 0; i < edges_json.size(); ++i) {
    const Json& e = edges_json[i];
    std::string e_path = edges_path + "/" + std::to_string(i);
    if (!e.is_array() || e.size() != 3) fail(e_path, "expected [from, to, length]");
    TreeEdge edge;
    edge.a = resolve(e[0], e_path + "/0");
    edge.b = resolve(e[1], e_path + "/1");
    edge.length = rat_at(e[2], e_path + "/2");
    edges.push_back(std::move(edge));
  }
  WeightedTree tree = validate_tree(points, std::move(edges));
  if (j.contains("root")) tree.root = resolve(j["root"], path + "/root");
  return tree;
}

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (const Rat& c : v) out.push_back(rat_to_string(c));
  return out;
}

Json vertices_json(const Polytope& p) {
  Json out = Json::array();
  for (const Vec& v : p.vertices) out.push_back(vec_json(v));
  return out;
}

}  // namespace

ParsedDocument parse_document(const std::string& bytes) {
  Json doc = parse_json(bytes);
  if (!doc.is_object()) fail("/", "expected an object");
  reject_unknown_keys(doc, "", {"dimension", "norm", "m", "points", "metric", "sets"});

  long dim = int_at(field(doc, "/", "dimension"), "/dimension");
  if (dim < 1 || dim > 4) fail("/dimension", "must be between 1 and 4");
  long m = int_at(field(doc, "/", "m"), "/m");

  PolyhedralNorm norm = norm_at(field(doc, "/", "norm"), "/norm", static_cast<int>(dim));

  const Json& points_json = field(doc, "/", "points");
  if (!points_json.is_array() || points_json.empty())
    fail("/points", "expected a nonempty array of labels");
  std::vector<std::string> points;
  for (size_t i = 0; i < points_json.size(); ++i)
    points.push_back(string_at(points_json[i], "/points/" + std::to_string(i)));

  const Json& metric = field(doc, "/", "metric");
  if (!metric.is_object() || metric.size() != 1)
    fail("/metric", "expected exactly one of \"matrix\", \"tree\", \"dissimilarity\"");
  reject_unknown_keys(metric, "/metric", {"matrix", "tree", "dissimilarity"});

  ParsedDocument out;
  PseudometricSpace space;
  if (metric.contains("matrix")) {
    space = validate_space(points, table_at(metric["matrix"], "/metric/matrix", points.size()),
                           SpaceMode::pseudometric);
  } else if (metric.contains("dissimilarity")) {
    space = validate_space(
        points, table_at(metric["dissimilarity"], "/metric/dissimilarity", points.size()),
        SpaceMode::dissimilarity);
  } else {
    WeightedTree tree = tree_at(metric["tree"], "/metric/tree", points);
    space = tree_metric(tree);
    out.tree = std::move(tree);
  }

  const Json& sets = field(doc, "/", "sets");
  if (!sets.is_object()) fail("/sets", "expected an object");
  for (const auto& item : sets.items()) {
    bool known = false;
    for (const std::string& p : points) known = known || p == item.key();
    if (!known) fail("/sets/" + item.key(), "not a point label");
  }
  std::vector<Polytope> images;
  for (const std::string& p : points) {
    if (!sets.contains(p)) fail("/sets", "missing \"" + p + "\"");
    images.push_back(hull_at(sets[p], "/sets/" + p, static_cast<int>(dim)));
  }

  out.instance =
      validate_instance(std::move(space), std::move(norm), std::move(images), static_cast<int>(m));
  return out;
}

SetValuedInstance parse_instance(const std::string& bytes) {
  return parse_document(bytes).instance;
}

std::string serialize_instance(const SetValuedInstance& inst) {
  int dim = inst.norm.dim();
  Json doc = Json::object();
  doc["dimension"] = dim;

  Json norm = Json::object();
  if (inst.norm.ball == norm_linf(dim).ball) {
    norm["kind"] = "linf";
  } else if (inst.norm.ball == norm_l1(dim).ball) {
    norm["kind"] = "l1";
  } else {
    norm["kind"] = "ball_vrep";
    norm["vertices"] = vertices_json(inst.norm.ball);
  }
  doc["norm"] = norm;
  doc["m"] = inst.m;
  doc["points"] = inst.space.points;

  Json table = Json::array();
  for (const auto& row : inst.space.dist) {
    Json r = Json::array();
    for (const Dist& d : row) r.push_back(dist_to_string(d));
    table.push_back(std::move(r));
  }
  Json metric = Json::object();
  metric[inst.space.mode == SpaceMode::dissimilarity ? "dissimilarity" : "matrix"] =
      std::move(table);
  doc["metric"] = std::move(metric);

  Json sets = Json::object();
  for (size_t i = 0; i < inst.space.points.size(); ++i)
    sets[inst.space.points[i]] = vertices_json(inst.images[i]);
  doc["sets"] = std::move(sets);

  return doc.dump(2) + "\n";
}

BodyDocument parse_body(const std::string& bytes) {
  Json doc = parse_json(bytes);
  if (!doc.is_object()) fail("/", "expected an object");
  reject_unknown_keys(doc, "", {"dimension", "norm", "vertices"});
  long dim = int_at(field(doc, "/", "dimension"), "/dimension");
  if (dim < 1 || dim > 4) fail("/dimension", "must be between 1 and 4");
  BodyDocument out{hull_at(field(doc, "/", "vertices"), "/vertices", static_cast<int>(dim)),
                   norm_at(field(doc, "/", "norm"), "/norm", static_cast<int>(dim))};
  return out;
}

}  // namespace lipsel
