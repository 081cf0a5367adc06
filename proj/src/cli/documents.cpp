#include "orthoset/cli/documents.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace orthoset::cli {
namespace {

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw DocumentError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Index positive_index(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw DocumentError(std::string("field \"") + key + "\" must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

double number(const Json& v) {
  if (!v.is_number()) throw DocumentError("matrix entry is not a number");
  return v.get<double>();
}

Complex complex_number(const Json& v) {
  if (!v.is_array() || v.size() != 2) throw DocumentError("complex entry must be [re, im]");
  return {number(v[0]), number(v[1])};
}

std::string field_of(const Json& j) {
  const Json& f = member(j, "field");
  if (!f.is_string()) throw DocumentError("field \"field\" must be a string");
  const auto s = f.get<std::string>();
  if (s != "real" && s != "complex") throw DocumentError("unknown field \"" + s + "\"");
  return s;
}

std::string number_text(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  // Keep integral values typed as floating point on re-read.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

bool is_flat(const Json& j) {
  for (const auto& v : j)
    if (v.is_structured() && !(v.is_array() && v.size() <= 2 && std::all_of(v.begin(), v.end(), [](const Json& x) {
                                 return x.is_primitive();
                               })))
      return false;
  return true;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out += number_text(j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty() || is_flat(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(j[i], out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json matrix_json(const RealMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    data.push_back(std::move(row));
  }
  return {{"field", "real"}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json matrix_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    data.push_back(std::move(row));
  }
  return {{"field", "complex"}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

AnyMatrix parse_matrix(const Json& j) {
  const std::string field = field_of(j);
  const Index rows = positive_index(j, "rows");
  const Index cols = positive_index(j, "cols");
  const Json& data = member(j, "data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows)
    throw DocumentError("\"data\" must hold one array per row");
  for (const auto& row : data)
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw DocumentError("every row of \"data\" must hold cols entries");

  if (field == "real") {
    RealMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index k = 0; k < cols; ++k) m(i, k) = number(data[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    return m;
  }
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k)
      m(i, k) = complex_number(data[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
  return m;
}

Json set_json(const OoSet& set) {
  Json elems = Json::array();
  for (const auto& m : set.elements()) elems.push_back(matrix_json(m));
  return {{"kind", "OO"}, {"order", set.order()}, {"elements", std::move(elems)}};
}

Json set_json(const OuSet& set) {
  Json elems = Json::array();
  for (const auto& m : set.elements()) elems.push_back(matrix_json(m));
  return {{"kind", "OU"}, {"order", set.order()}, {"elements", std::move(elems)}};
}

AnySet parse_set(const Json& j) {
  const Json& kind = member(j, "kind");
  if (!kind.is_string() || (kind != "OU" && kind != "OO")) throw DocumentError("\"kind\" must be \"OU\" or \"OO\"");
  const Index order = positive_index(j, "order");
  const Json& elems = member(j, "elements");
  if (!elems.is_array() || elems.empty()) throw DocumentError("\"elements\" must be a nonempty array");

  std::vector<AnyMatrix> parsed;
  for (const auto& e : elems) {
    parsed.push_back(parse_matrix(e));
    const Index r = std::visit([](const auto& m) { return m.rows(); }, parsed.back());
    const Index c = std::visit([](const auto& m) { return m.cols(); }, parsed.back());
    if (r != order || c != order) throw DocumentError("element shape does not match \"order\"");
  }

  if (kind == "OO") {
    std::vector<RealMatrix> xs;
    for (auto& p : parsed) {
      if (!std::holds_alternative<RealMatrix>(p)) throw DocumentError("OO set with a complex element");
      xs.push_back(std::get<RealMatrix>(std::move(p)));
    }
    return OoSet(std::move(xs));
  }
  std::vector<ComplexMatrix> xs;
  for (auto& p : parsed) {
    if (auto* r = std::get_if<RealMatrix>(&p))
      xs.push_back(r->cast<Complex>());
    else
      xs.push_back(std::get<ComplexMatrix>(std::move(p)));
  }
  return OuSet(std::move(xs));
}

Json states_json(const std::vector<RealState>& states) {
  Json arr = Json::array();
  for (const auto& s : states) {
    Json amps = Json::array();
    for (Index i = 0; i < s.amplitudes.size(); ++i) amps.push_back(s.amplitudes(i));
    arr.push_back({{"dim", s.dim}, {"field", "real"}, {"amplitudes", std::move(amps)}});
  }
  return {{"states", std::move(arr)}};
}

std::vector<RealState> parse_states(const Json& j) {
  const Json& arr = member(j, "states");
  if (!arr.is_array() || arr.empty()) throw DocumentError("\"states\" must be a nonempty array");
  std::vector<RealState> out;
  for (const auto& s : arr) {
    if (field_of(s) != "real") throw DocumentError("only real states are supported here");
    const Index d = positive_index(s, "dim");
    const Json& amps = member(s, "amplitudes");
    if (!amps.is_array() || static_cast<Index>(amps.size()) != d * d)
      throw DocumentError("\"amplitudes\" must hold dim^2 numbers");
    RealState st{static_cast<int>(d), RealVector(d * d)};
    for (Index i = 0; i < d * d; ++i) st.amplitudes(i) = number(amps[static_cast<std::size_t>(i)]);
    out.push_back(std::move(st));
  }
  return out;
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DocumentError(std::string("malformed JSON: ") + e.what());
  }
}

std::string render(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace orthoset::cli
