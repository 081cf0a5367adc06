#pragma once

// JSON documents exchanged by the command-line tool.
//
//   matrix: {"field": "real"|"complex", "rows": r, "cols": c, "data": [[...], ...]}
//           complex entries are [re, im] pairs
//   set:    {"kind": "OU"|"OO", "order": d, "elements": [matrix, ...]}
//   states: {"states": [{"dim": d, "field": "real", "amplitudes": [...]}, ...]}

#include "orthoset/quantum.hpp"
#include "orthoset/sets.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace orthoset::cli {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent document.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyMatrix = std::variant<RealMatrix, ComplexMatrix>;
using AnySet = std::variant<OoSet, OuSet>;

Json matrix_json(const RealMatrix& m);
Json matrix_json(const ComplexMatrix& m);
AnyMatrix parse_matrix(const Json& j);

Json set_json(const OoSet& set);
Json set_json(const OuSet& set);
AnySet parse_set(const Json& j);

Json states_json(const std::vector<RealState>& states);
std::vector<RealState> parse_states(const Json& j);

/// Parses text, rethrowing syntax errors as DocumentError.
Json parse_text(const std::string& text);

/// Indented rendering; doubles use the shortest decimal that round-trips and
/// arrays of scalars stay on one line.
std::string render(const Json& j);

}  // namespace orthoset::cli
