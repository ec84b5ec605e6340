#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lipsel/metric.hpp"
#include "lipsel/solver.hpp"

namespace lipsel {

// An instance file in its working form. When the document carried its
// metric as a tree the edges are kept alongside the induced path metric,
// because the covering subcommands want the tree itself.
struct ParsedDocument {
  SetValuedInstance instance;
  std::optional<WeightedTree> tree;
};

// Instance document layout (all rational scalars are strings, "p" or "p/q";
// the token "inf" is allowed only inside distance tables):
//
//   {
//     "dimension": 2,
//     "norm": {"kind": "linf"},                     // or "l1", or
//                                                   // {"kind": "ball_vrep", "vertices": [...]}
//     "m": 1,
//     "points": ["u1", "u2"],
//     "metric": {"matrix": [["0", "3/2"], ["3/2", "0"]]},
//          // or {"dissimilarity": [[...]]}  (triangle inequality not required)
//          // or {"tree": {"edges": [["u1", "u2", "3/2"]], "root": "u1"}}
//     "sets": {"u1": [["0", "0"], ["1", "0"]], "u2": [["2", "1"]]}
//   }
//
// Schema violations and malformed rationals throw ValidationError naming
// the JSON path of the offending element; deeper validation failures are
// forwarded from validate_space / validate_tree / validate_instance.
ParsedDocument parse_document(const std::string& bytes);

SetValuedInstance parse_instance(const std::string& bytes);

// Canonical document text: fixed key order, two-space indent, reduced
// rationals, the metric always as an explicit table (a tree payload does
// not survive canonicalization), norms folded back to their names when
// the ball matches. Serializing, parsing and serializing again reproduces
// the exact bytes.
std::string serialize_instance(const SetValuedInstance& inst);

// Convex body file for the selector subcommand: {"dimension": d,
// "norm": ..., "vertices": [...]} with the same scalar conventions.
struct BodyDocument {
  Polytope body;
  PolyhedralNorm norm;
};

BodyDocument parse_body(const std::string& bytes);

// Command line entry point, one JSON document per invocation on `out`.
// Returns the process exit code: 0 success, 1 infeasible or empty result,
// 2 invalid input (including unknown flags, with usage on `err`),
// 3 a resource cap was exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lipsel
