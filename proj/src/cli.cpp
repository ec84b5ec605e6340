#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lipsel/error.hpp"
#include "lipsel/io.hpp"
#include "lipsel/lab.hpp"
#include "lipsel/selectors.hpp"
#include "lipsel/whitney.hpp"

namespace lipsel {
namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << "\n"; }

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

Json values_json(const PseudometricSpace& space, const std::vector<Vec>& values) {
  Json out = Json::object();
  for (size_t i = 0; i < values.size(); ++i) out[space.points[i]] = vec_json(values[i]);
  return out;
}

int point_index(const SetValuedInstance& inst, const std::string& label) {
  std::optional<int> i = inst.space.index_of(label);
  if (!i) throw ValidationError("unknown point '" + label + "'");
  return *i;
}

std::vector<int> subset_indices(const SetValuedInstance& inst, const std::string& csv) {
  std::vector<int> out;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) out.push_back(point_index(inst, token));
  return out;
}

// The tree behind the covering subcommands: the document's own tree when
// the metric was given as one, otherwise the low-degree spanning tree.
WeightedTree covering_tree(const ParsedDocument& doc) {
  if (doc.tree) return *doc.tree;
  return build_low_degree_tree(doc.instance.space).tree;
}

int cmd_validate(const std::string& file, std::ostream& out) {
  out << serialize_instance(parse_instance(read_file(file)));
  return 0;
}

int cmd_solve(const std::string& file, const std::string& lambda_s, std::ostream& out) {
  SetValuedInstance inst = parse_instance(read_file(file));
  Json doc = Json::object();
  if (!lambda_s.empty()) {
    Rat lambda = rat_from_string(lambda_s);
    doc["lambda"] = rat_to_string(lambda);
    std::optional<Selection> sel = feasible_at(inst, lambda);
    doc["feasible"] = sel.has_value();
    if (!sel) {
      emit(out, doc);
      return 1;
    }
    doc["seminorm"] = dist_to_string(sel->lip);
    doc["values"] = values_json(inst.space, sel->values);
    emit(out, doc);
    return 0;
  }
  auto opt = min_lipschitz(inst);
  doc["feasible"] = opt.has_value();
  if (!opt) {
    emit(out, doc);
    return 1;
  }
  doc["lambda_star"] = rat_to_string(opt->first);
  doc["seminorm"] = dist_to_string(opt->second.lip);
  doc["values"] = values_json(inst.space, opt->second.values);
  emit(out, doc);
  return 0;
}

int cmd_scan(const std::string& file, long n_opt, long cap, std::ostream& out) {
  SetValuedInstance inst = parse_instance(read_file(file));
  long n = n_opt;
  if (n == 0) {
    // Default to the finiteness number of the instance's dimension data.
    mpz_class f = constants(inst.m, inst.norm.dim()).finiteness_number;
    n = f.fits_slong_p() ? f.get_si() : inst.space.size();
    n = std::min<long>(n, inst.space.size());
  }
  ScanReport rep = restriction_scan(inst, static_cast<int>(n), cap > 0 ? cap : 20000);
  Json doc = Json::object();
  doc["N"] = rep.N;
  doc["local"] = dist_to_string(rep.local);
  doc["global"] = dist_to_string(rep.global);
  doc["ratio"] = dist_to_string(rep.ratio);
  Json witness = Json::array();
  for (int i : rep.witness) witness.push_back(inst.space.points[static_cast<size_t>(i)]);
  doc["witness"] = std::move(witness);
  emit(out, doc);
  return 0;
}

int cmd_gamma(const std::string& file, const std::string& lambda_s, const std::string& point,
              bool have_subset, const std::string& subset_csv, long ell_opt, long cap,
              std::ostream& out) {
  SetValuedInstance inst = parse_instance(read_file(file));
  if (lambda_s.empty()) throw ValidationError("gamma needs --lambda");
  if (have_subset == (ell_opt >= 0))
    throw ValidationError("give exactly one of --subset or --ell");
  Rat lambda = rat_from_string(lambda_s);
  int x = point_index(inst, point);

  std::optional<Polytope> g;
  if (have_subset) {
    g = gamma_set(inst, lambda, x, subset_indices(inst, subset_csv),
                  cap > 0 ? static_cast<int>(cap) : 10000);
  } else {
    g = gamma_ell(inst, lambda, x, static_cast<int>(ell_opt), cap > 0 ? cap : 20000,
                  cap > 0 ? static_cast<int>(cap) : 10000);
  }
  Json doc = Json::object();
  doc["point"] = point;
  doc["lambda"] = rat_to_string(lambda);
  if (!g) {
    doc["empty"] = true;
    emit(out, doc);
    return 1;
  }
  doc["vertices"] = vertices_json(*g);
  emit(out, doc);
  return 0;
}

int cmd_orbit(const std::string& file, const std::string& lambda_s, const std::string& point,
              long cap, std::ostream& out) {
  SetValuedInstance inst = parse_instance(read_file(file));
  if (lambda_s.empty()) throw ValidationError("orbit needs --lambda");
  Rat lambda = rat_from_string(lambda_s);
  int x = point_index(inst, point);
  std::optional<Polytope> orb = orbit(inst, lambda, x, cap > 0 ? static_cast<int>(cap) : 10000);
  Json doc = Json::object();
  doc["point"] = point;
  doc["lambda"] = rat_to_string(lambda);
  if (!orb) {
    doc["empty"] = true;
    emit(out, doc);
    return 1;
  }
  doc["vertices"] = vertices_json(*orb);
  emit(out, doc);
  return 0;
}

int cmd_tree(const std::string& file, std::ostream& out) {
  SetValuedInstance inst = parse_instance(read_file(file));
  LowDegreeTree low = build_low_degree_tree(inst.space);
  PseudometricSpace dt = tree_metric(low.tree);

  // Worst multiplicative stretch over pairs at positive distance; the
  // additive direction d_T >= rho holds by construction.
  Rat stretch = 1;
  for (int i = 0; i < inst.space.size(); ++i) {
    for (int j = i + 1; j < inst.space.size(); ++j) {
      const Dist& d = inst.space.d(i, j);
      if (d.value == 0) continue;
      Rat cand = dt.d(i, j).value / d.value;
      stretch = std::max(stretch, cand);
    }
  }

  Json doc = Json::object();
  doc["hub"] = low.tree.nodes[static_cast<size_t>(low.hub)];
  doc["hub_degree"] = low.tree.degree(low.hub);
  doc["distortion_bound"] = rat_to_string(tree_distortion_bound(inst.space.size()));
  doc["max_stretch"] = rat_to_string(stretch);
  Json edges = Json::array();
  for (const TreeEdge& e : low.tree.edges) {
    edges.push_back(Json::array({low.tree.nodes[static_cast<size_t>(e.a)],
                                 low.tree.nodes[static_cast<size_t>(e.b)],
                                 rat_to_string(e.length)}));
  }
  doc["edges"] = std::move(edges);
  emit(out, doc);
  return 0;
}

int cmd_cover(const std::string& file, const std::string& scale_s, std::ostream& out) {
  ParsedDocument pd = parse_document(read_file(file));
  WeightedTree tree = covering_tree(pd);
  Rat scale = rat_from_string(scale_s);
  Covering cover = nagata_cover_metric_tree(tree, scale);
  CoverReport report = verify_nagata_cover(tree_metric(tree), cover, Rat(1, 16), 1);

  Json doc = Json::object();
  doc["scale"] = rat_to_string(scale);
  doc["tree_from_document"] = pd.tree.has_value();
  Json parts = Json::array();
  for (const CoveringPart& part : cover.parts) {
    Json p = Json::object();
    Json members = Json::array();
    for (int i : part.members) members.push_back(tree.nodes[static_cast<size_t>(i)]);
    p["members"] = std::move(members);
    if (part.label) {
      p["parity"] = part.label->first;
      p["ancestor"] = tree.nodes[static_cast<size_t>(part.label->second)];
    }
    parts.push_back(std::move(p));
  }
  doc["parts"] = std::move(parts);
  doc["ok"] = report.ok;
  if (!report.ok) doc["detail"] = report.detail;
  emit(out, doc);
  return 0;
}

int cmd_whitney(const std::string& file, const std::string& scale_s, std::ostream& out) {
  ParsedDocument pd = parse_document(read_file(file));
  WeightedTree tree = covering_tree(pd);
  PseudometricSpace space = tree_metric(tree);
  Rat scale = rat_from_string(scale_s);
  std::vector<Rat> lengthscales(static_cast<size_t>(space.size()), scale);
  WhitneyPartition part = whitney_partition(space, lengthscales, Rat(1, 16), 1, Rat(1, 4),
                                            tree_cover_supplier(tree), 64);

  Json doc = Json::object();
  doc["tree_from_document"] = pd.tree.has_value();
  doc["a"] = rat_to_string(part.a);
  doc["big_a"] = rat_to_string(part.big_a);
  doc["c_ls"] = rat_to_string(part.c_ls);
  doc["lip_factor"] = rat_to_string(part.lip_factor);
  doc["multiplicity"] = part.multiplicity;
  Json entries = Json::array();
  for (const WhitneyEntry& e : part.entries) {
    Json item = Json::object();
    item["center"] = space.points[static_cast<size_t>(e.center)];
    item["lengthscale"] = rat_to_string(e.lengthscale);
    Json values = Json::array();
    for (const Rat& v : e.values) values.push_back(rat_to_string(v));
    item["values"] = std::move(values);
    entries.push_back(std::move(item));
  }
  doc["entries"] = std::move(entries);
  emit(out, doc);
  return 0;
}

// Scripted end-to-end run of the patching pipeline on a random weighted
// tree: images are unit vertical segments over each node's distance from
// the root, locals come from the exact solver on the lengthscale balls,
// and the partition of unity blends them into a global selection.
int cmd_patch_demo(unsigned long seed, std::ostream& out) {
  std::mt19937_64 g(seed);
  const int n = 7;
  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back("t" + std::to_string(i));
  std::vector<TreeEdge> edges;
  for (int i = 1; i < n; ++i) {
    int parent = static_cast<int>(g() % static_cast<unsigned long>(i));
    Rat len(static_cast<long>(1 + g() % 8), 4);
    len.canonicalize();
    edges.push_back({parent, i, len});
  }
  WeightedTree tree = validate_tree(nodes, std::move(edges));
  PseudometricSpace space = tree_metric(tree);

  std::vector<Polytope> images;
  for (int i = 0; i < n; ++i) {
    Rat x = space.d(0, i).value;
    Rat low(static_cast<long>(g() % 5), 2);
    low.canonicalize();
    Rat high = low + 2;
    images.push_back(hull({Vec{x, low}, Vec{x, high}}));
  }
  SetValuedInstance inst = validate_instance(space, norm_linf(2), std::move(images), 1);

  std::vector<Rat> lengthscales(static_cast<size_t>(n), Rat(4));
  WhitneyPartition part = whitney_partition(space, lengthscales, Rat(1, 16), 1, Rat(1, 4),
                                            tree_cover_supplier(tree), 64);

  std::vector<LocalSelection> locals;
  for (const WhitneyEntry& e : part.entries) {
    std::vector<int> members;
    for (int x = 0; x < n; ++x) {
      const Dist& d = space.d(e.center, x);
      if (d.finite && d.value <= e.lengthscale) members.push_back(x);
    }
    auto solved = min_lipschitz(restrict_instance(inst, members));
    if (!solved) throw ValidationError("a ball restriction of the demo is infeasible");
    LocalSelection loc;
    loc.values.assign(static_cast<size_t>(n), std::nullopt);
    for (size_t k = 0; k < members.size(); ++k)
      loc.values[static_cast<size_t>(members[k])] = solved->second.values[k];
    loc.anchor = *loc.values[static_cast<size_t>(e.center)];
    locals.push_back(std::move(loc));
  }

  PatchReport rep = patch_selections(space, part, locals, inst.norm);
  Json doc = Json::object();
  doc["seed"] = seed;
  doc["points"] = space.points;
  doc["values"] = values_json(space, rep.values);
  doc["seminorm"] = dist_to_string(rep.seminorm);
  doc["partition_lip"] = dist_to_string(rep.partition_lip);
  doc["anchor_consistency"] = rat_to_string(rep.anchor_consistency);
  doc["agreement"] = rat_to_string(rep.agreement);
  doc["local_lip"] = dist_to_string(rep.local_lip);
  doc["multiplicity"] = rep.multiplicity;
  emit(out, doc);
  return 0;
}

int cmd_counterexample(const std::string& kind, const std::string& lambda_s, long n_points,
                       long grid_n, std::ostream& out) {
  if (kind == "m1") {
    out << serialize_instance(counterexample_m1(rat_from_string(lambda_s)));
  } else if (kind == "m2") {
    out << serialize_instance(counterexample_m2(rat_from_string(lambda_s)));
  } else if (kind == "grid") {
    out << serialize_instance(
        quasimetric_grid(static_cast<int>(n_points), static_cast<int>(grid_n)));
  } else {
    throw ValidationError("unknown kind '" + kind + "' (expected m1, m2 or grid)");
  }
  return 0;
}

int cmd_selector(const std::string& file, long quad_nodes, std::ostream& out) {
  BodyDocument bd = parse_body(read_file(file));
  int dim = bd.norm.dim();
  int ad = affine_dim(bd.body);

  Json doc = Json::object();
  doc["dimension"] = dim;
  doc["affine_dim"] = ad;
  doc["diameter"] = rat_to_string(norm_diameter(bd.body, bd.norm));
  Json notes = Json::array();

  if (dim == 2 && bd.norm.ball == norm_linf(2).ball) {
    doc["rect"] = vec_json(rect_selector_linf2(bd.body));
  } else {
    notes.push_back("rect: needs ambient dimension 2 and the sup norm");
  }

  if (ad <= 2) {
    SelectorReport rep = parallel_body_centroid(bd.body, bd.norm);
    Json p = Json::object();
    p["point"] = vec_json(rep.point);
    p["inside"] = rep.inside;
    p["method"] = rep.method;
    doc["parallel_body"] = std::move(p);
    doc["regularity"] = rat_to_string(regularity_coefficient(bd.body, bd.norm));
  } else {
    notes.push_back("parallel_body, regularity: affine dimension exceeds 2");
  }

  if (dim == 2) {
    std::vector<double> s = steiner_point_polygon(bd.body, static_cast<int>(quad_nodes));
    doc["steiner"] = Json(s);
  } else {
    notes.push_back("steiner: needs ambient dimension 2");
  }

  doc["notes"] = std::move(notes);
  emit(out, doc);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact Lipschitz selections of convex-set-valued maps on finite spaces"};
  app.require_subcommand(1);

  std::string file, lambda_s, point, subset_csv, format = "json";
  std::string kind = "m1", scale_s = "1";
  long n_opt = 0, ell_opt = -1, cap = 0, grid_n = 9, quad_nodes = 4096;
  unsigned long seed = 1;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format (json)");
  };
  auto add_file = [&](CLI::App* sub, const char* what) {
    sub->add_option("file", file, what)->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "parse a document and echo it canonically");
  add_file(validate, "instance document");
  add_format(validate);

  CLI::App* solve = app.add_subcommand("solve", "optimal or fixed-lambda Lipschitz selection");
  add_file(solve, "instance document");
  solve->add_option("--lambda", lambda_s, "test feasibility at this lambda instead");
  add_format(solve);

  CLI::App* scan = app.add_subcommand("scan", "compare restricted optima against the global one");
  add_file(scan, "instance document");
  scan->add_option("--N", n_opt, "subset size bound (default: the finiteness number)");
  scan->add_option("--cap", cap, "largest subset count to enumerate");
  add_format(scan);

  CLI::App* gamma = app.add_subcommand("gamma", "admissible values at a point over partial selections");
  add_file(gamma, "instance document");
  gamma->add_option("--lambda", lambda_s, "Lipschitz constant")->required();
  gamma->add_option("--point", point, "point label")->required();
  CLI::Option* subset_opt = gamma->add_option("--subset", subset_csv, "comma separated labels");
  gamma->add_option("--ell", ell_opt, "intersect over all subsets of size (m+2)^ell instead");
  gamma->add_option("--cap", cap, "projection and enumeration cap");
  add_format(gamma);

  CLI::App* orbit_cmd = app.add_subcommand("orbit", "values a point takes over all full selections");
  add_file(orbit_cmd, "instance document");
  orbit_cmd->add_option("--lambda", lambda_s, "Lipschitz constant")->required();
  orbit_cmd->add_option("--point", point, "point label")->required();
  orbit_cmd->add_option("--cap", cap, "projection cap");
  add_format(orbit_cmd);

  CLI::App* tree_cmd = app.add_subcommand("tree", "low-degree spanning tree with distortion report");
  add_file(tree_cmd, "instance document");
  add_format(tree_cmd);

  CLI::App* cover = app.add_subcommand("cover", "scaled tree covering with the ball-multiplicity check");
  add_file(cover, "instance document");
  cover->add_option("--scale", scale_s, "covering lengthscale");
  add_format(cover);

  CLI::App* whitney = app.add_subcommand("whitney", "partition of unity over the covering tree");
  add_file(whitney, "instance document");
  whitney->add_option("--scale", scale_s, "constant lengthscale");
  add_format(whitney);

  CLI::App* patch = app.add_subcommand("patch-demo", "blend exact local selections on a random tree");
  patch->add_option("--seed", seed, "generator seed");
  add_format(patch);

  CLI::App* counter = app.add_subcommand("counterexample", "emit a ready-to-run sharpness instance");
  counter->add_option("--kind", kind, "m1, m2 or grid");
  counter->add_option("--lambda", lambda_s, "target constant for m1/m2 (default 2)");
  counter->add_option("--N", n_opt, "grid: restriction size (default 3)");
  counter->add_option("--n", grid_n, "grid: number of gaps (default 9)");
  add_format(counter);

  CLI::App* selector = app.add_subcommand("selector", "point-valued selectors of one convex body");
  add_file(selector, "body document");
  selector->add_option("--N", quad_nodes, "quadrature nodes for the Steiner point");
  add_format(selector);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    auto subs = app.get_subcommands();
    out << (subs.size() == 1 ? subs[0]->help() : app.help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (format != "json") throw ValidationError("unsupported format '" + format + "'");
    if (app.got_subcommand(validate)) return cmd_validate(file, out);
    if (app.got_subcommand(solve)) return cmd_solve(file, lambda_s, out);
    if (app.got_subcommand(scan)) return cmd_scan(file, n_opt, cap, out);
    if (app.got_subcommand(gamma))
      return cmd_gamma(file, lambda_s, point, subset_opt->count() > 0, subset_csv, ell_opt, cap,
                       out);
    if (app.got_subcommand(orbit_cmd)) return cmd_orbit(file, lambda_s, point, cap, out);
    if (app.got_subcommand(tree_cmd)) return cmd_tree(file, out);
    if (app.got_subcommand(cover)) return cmd_cover(file, scale_s, out);
    if (app.got_subcommand(whitney)) return cmd_whitney(file, scale_s, out);
    if (app.got_subcommand(patch)) return cmd_patch_demo(seed, out);
    if (app.got_subcommand(counter)) {
      if (lambda_s.empty()) lambda_s = "2";
      if (n_opt == 0) n_opt = 3;
      return cmd_counterexample(kind, lambda_s, n_opt, grid_n, out);
    }
    if (app.got_subcommand(selector)) return cmd_selector(file, quad_nodes, out);
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace lipsel
