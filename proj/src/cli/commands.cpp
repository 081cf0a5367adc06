#include "orthoset/cli/commands.hpp"

#include "orthoset/cli/documents.hpp"
#include "orthoset/decompose.hpp"
#include "orthoset/equivalence.hpp"
#include "orthoset/quantum.hpp"
#include "orthoset/sets.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace orthoset::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  buf << in.rdbuf();
  return buf.str();
}

Json read_json(const std::string& path) { return parse_text(read_input(path)); }

OoSet read_oo_set(const std::string& path) {
  AnySet set = parse_set(read_json(path));
  if (!std::holds_alternative<OoSet>(set)) throw UsageError("expected an OO set");
  return std::get<OoSet>(std::move(set));
}

RealMatrix read_real3(const std::string& path) {
  AnyMatrix m = parse_matrix(read_json(path));
  if (!std::holds_alternative<RealMatrix>(m)) throw UsageError("this mode needs a real matrix");
  RealMatrix out = std::get<RealMatrix>(std::move(m));
  if (out.rows() != 3 || out.cols() != 3) throw UsageError("this mode needs a 3x3 matrix");
  return out;
}

template <typename Range>
Json array_of(const Range& r) {
  Json out = Json::array();
  for (const auto& x : r) out.push_back(x);
  return out;
}

Json vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json vector_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

Json verification_json(const VerificationReport& r) {
  Json out = {{"pass", r.pass},
              {"unitarity_residual", r.unitarity_residual},
              {"unitarity_index", r.unitarity_index},
              {"cross_residual", r.cross_residual}};
  if (r.cross_pair)
    out["cross_pair"] = Json::array({r.cross_pair->first, r.cross_pair->second});
  else
    out["cross_pair"] = nullptr;
  return out;
}

Json witness_json(const Witness& w) {
  return {{"u", matrix_json(w.u)}, {"v", matrix_json(w.v)}, {"signs", array_of(w.signs)}, {"perm", array_of(w.perm)}};
}

template <typename Scalar>
Json decomposition_json(const Decomposition<Scalar>& d) {
  return {{"coefficients", vector_json(d.coeffs)}, {"basis", set_json(d.basis)}, {"residual", d.residual}};
}

Json triple_json(const SingularTriple& t) { return Json::array({t.x, t.y, t.z}); }

// ---------------------------------------------------------------------------

int cmd_construct(const std::string& kind, const std::string& param, std::ostream& out) {
  auto integer = [&](int lo, int hi) {
    int v = 0;
    const auto res = std::from_chars(param.data(), param.data() + param.size(), v);
    if (res.ec != std::errc() || res.ptr != param.data() + param.size() || v < lo || v > hi)
      throw UsageError(kind + " expects an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  };
  if (kind == "weyl") {
    out << render(set_json(weyl_heisenberg(integer(1, 64))));
  } else if (kind == "pauli") {
    out << render(set_json(pauli_tensor(integer(1, 6))));
  } else if (kind == "cyclic") {
    out << render(set_json(cyclic_shift_set(integer(1, 256))));
  } else if (kind == "canonical") {
    const auto name = parse_canonical_set_name(param);
    if (!name) throw UsageError("unknown canonical set " + param + " (C, D, G1SET, G2SET, G4SET)");
    out << render(set_json(canonical_set(*name)));
  } else {
    throw UsageError("unknown construction " + kind);
  }
  return kAffirmative;
}

int cmd_verify(const std::string& in, const Tolerance& tol, std::ostream& out) {
  AnySet set = parse_set(read_json(in));
  return std::visit(
      [&](auto& s) {
        const VerificationReport r = verify_set(s, tol);
        Json j = {{"kind", s.kind == SetKind::OU ? "OU" : "OO"}, {"order", s.order()}, {"size", s.size()}};
        j.update(verification_json(r));
        out << render(j);
        return r.pass ? kAffirmative : kNegative;
      },
      set);
}

int cmd_classify(const std::string& in, const Tolerance& tol, std::ostream& out) {
  const OoSet set = read_oo_set(in);
  if (set.order() != 3 || set.size() < 2 || set.size() > 4)
    throw UsageError("classify expects 2, 3 or 4 matrices of order 3");
  const VerificationReport vr = check_set(set, tol);
  Json j = {{"size", set.size()}, {"verification", verification_json(vr)}};
  if (!vr.pass) {
    j["label"] = to_string(EquivalenceLabel::UNRECOGNIZED);
    out << render(j);
    return kNegative;
  }
  ClassificationReport r;
  try {
    if (set.size() == 2)
      r = canonicalize_pair(set, tol);
    else if (set.size() == 3)
      r = classify_triple(set, tol);
    else
      r = classify_quad(set, tol);
  } catch (const std::invalid_argument& e) {
    j["label"] = to_string(EquivalenceLabel::UNRECOGNIZED);
    j["reason"] = e.what();
    out << render(j);
    return kNegative;
  }
  j["label"] = to_string(r.label);
  j["residual"] = r.residual;
  j["witness"] = r.witness ? witness_json(*r.witness) : Json(nullptr);
  out << render(j);
  return r.label == EquivalenceLabel::UNRECOGNIZED || !r.witness ? kNegative : kAffirmative;
}

int cmd_extend(const std::string& in, const SearchOptions& opts, const Tolerance& tol, std::ostream& out) {
  const OoSet set = read_oo_set(in);
  const VerificationReport vr = check_set(set, tol);
  if (!vr.pass) {
    out << render({{"verification", verification_json(vr)}, {"found", false}});
    return kNegative;
  }
  const ExtensionResult r = extend_set(set, opts, tol);
  Json j = {{"found", r.found.has_value()},
            {"extension", r.found ? matrix_json(*r.found) : Json(nullptr)},
            {"objective", r.objective},
            {"max_inner", r.max_inner},
            {"best", matrix_json(r.best)},
            {"best_start", r.best_start},
            {"starts", r.starts},
            {"seed", opts.seed},
            {"heuristic", !r.found.has_value()}};
  out << render(j);
  return r.found ? kAffirmative : kNegative;
}

int cmd_decompose(const std::string& in, const std::string& mode, const SearchOptions& opts,
                  const Tolerance& tol, std::ostream& out) {
  Json j = {{"mode", mode}};
  if (mode == "ou") {
    AnyMatrix m = parse_matrix(read_json(in));
    const ComplexMatrix c = std::holds_alternative<RealMatrix>(m) ? std::get<RealMatrix>(m).cast<Complex>()
                                                                 : std::get<ComplexMatrix>(m);
    if (c.rows() != c.cols()) throw UsageError("ou mode needs a square matrix");
    j["feasible"] = true;
    j.update(decomposition_json(ou_decompose(c, tol)));
    out << render(j);
    return kAffirmative;
  }

  const RealMatrix m = read_real3(in);
  const SingularTriple t = SingularTriple::of(m);
  j["singular_values"] = triple_json(t);

  if (mode == "oo2") {
    const Oo2Feasibility f = oo2_feasible(t, tol);
    j["feasible"] = f.feasible;
    j["doubled"] = f.doubled;
    j["odd"] = f.odd;
    if (f.feasible) j.update(decomposition_json(oo2_decompose(m, tol)));
    out << render(j);
    return f.feasible ? kAffirmative : kNegative;
  }
  if (mode == "oo3") {
    const Oo3Feasibility f = oo3_feasible(t, tol);
    j["feasible"] = f.feasible;
    j["equal_pair"] = f.equal_pair;
    j["discriminants"] = array_of(f.discriminants);
    Json cands = Json::array();
    for (const auto& c : f.candidates)
      cands.push_back({{"signs", array_of(c.signs)}, {"l", array_of(c.l)}, {"discriminant", c.discriminant}});
    j["candidates"] = std::move(cands);
    if (f.feasible) j.update(decomposition_json(oo3_decompose(m, tol)));
    out << render(j);
    return f.feasible ? kAffirmative : kNegative;
  }
  if (mode == "oo4") {
    const Oo4Feasibility f = oo4_feasible(t, opts, tol);
    j["feasible"] = f.feasible;
    j["mismatch"] = f.mismatch;
    j["best"] = array_of(f.best);
    j["best_start"] = f.best_start;
    j["starts"] = f.starts;
    j["seed"] = opts.seed;
    if (f.feasible) {
      j.update(decomposition_json(oo4_decompose(m, opts, tol)));
    } else {
      j["objective_floor"] = f.mismatch;
      j["evidence"] = f.evidence == Oo4Evidence::REFERENCE_FIXTURE ? "reference-fixture" : "search";
      j["heuristic"] = true;
    }
    out << render(j);
    return f.feasible ? kAffirmative : kNegative;
  }
  if (mode == "weak-a" || mode == "weak-b") {
    const WeakDecomposition w = mode == "weak-a" ? weak_decompose_a(m) : weak_decompose_b(m);
    Json mats = Json::array();
    for (const auto& x : w.matrices) mats.push_back(matrix_json(x));
    j["feasible"] = true;
    j["coefficients"] = vector_json(RealVector(w.coeffs));
    j["matrices"] = std::move(mats);
    j["residual"] = w.residual;
    j["orthogonality_residual"] = w.orthogonality_residual;
    out << render(j);
    return kAffirmative;
  }
  throw UsageError("unknown mode " + mode);
}

Json rumeb_json(const RumebReport& r) {
  Json members = Json::array();
  for (const auto& m : r.members)
    members.push_back({{"mes", m.mes}, {"mes_residual", m.mes_residual}, {"norm_residual", m.norm_residual}});
  const Unextendibility& u = r.unextendibility;
  Json ext = {{"searched", u.searched},
              {"found", u.found},
              {"extension", u.extension ? matrix_json(*u.extension) : Json(nullptr)},
              {"objective", u.objective},
              {"starts", u.starts},
              {"heuristic", u.heuristic()}};
  return {{"is_rumeb", r.is_rumeb},
          {"all_mes", r.all_mes},
          {"orthonormal", r.orthonormal},
          {"orthonormality_residual", r.orthonormality_residual},
          {"members", std::move(members)},
          {"unextendibility", std::move(ext)}};
}

int cmd_rumeb_build(const std::string& which, std::ostream& out) {
  const auto size = parse_rumeb_size(which);
  if (!size) throw UsageError("rumeb build expects three or four");
  out << render(states_json(build_rumeb(*size)));
  return kAffirmative;
}

int cmd_rumeb_verify(const std::string& in, const SearchOptions& opts, const Tolerance& tol, std::ostream& out) {
  const auto states = parse_states(read_json(in));
  for (const auto& s : states)
    if (s.dim != states.front().dim) throw UsageError("states differ in dimension");
  const RumebReport r = verify_rumeb(states, opts, tol);
  Json j = rumeb_json(r);
  j["seed"] = opts.seed;
  out << render(j);
  return r.is_rumeb ? kAffirmative : kNegative;
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v) return std::nullopt;
  return std::string(v);
}

}  // namespace

Tolerance tolerance_from(const std::optional<std::string>& env_value) {
  Tolerance tol;
  if (!env_value) return tol;
  double v = 0;
  const auto& s = *env_value;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string(kToleranceEnv) + " is not a number: " + s);
  tol.eps_orth = v;
  return tol.validated();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutually orthogonal unitary and orthogonal matrix sets"};
  app.name("orthoset");
  app.require_subcommand(1);

  std::string in;
  std::string kind, param, mode, which;
  std::optional<double> tol_flag;
  SearchOptions opts;

  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--starts", opts.starts, "Number of seeded starts")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "Search seed")->capture_default_str();
  };

  auto* construct = app.add_subcommand("construct", "Emit a constructed set");
  construct->add_option("kind", kind, "weyl | pauli | cyclic | canonical")->required();
  construct->add_option("param", param, "Order, tensor power or canonical set name")->required();

  auto* verify = app.add_subcommand("verify", "Check the n-OU / n-OO property");
  verify->add_option("--in", in, "Set document ('-' for stdin)")->required();
  verify->add_option("--tol", tol_flag, "Orthogonality tolerance")->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "Equivalence class of an order-3 OO set");
  classify->add_option("--in", in, "Set document ('-' for stdin)")->required();

  auto* extend = app.add_subcommand("extend", "Search for an orthogonal matrix orthogonal to a set");
  extend->add_option("--in", in, "Set document ('-' for stdin)")->required();
  add_search(extend);

  auto* decompose = app.add_subcommand("decompose", "Decompose a matrix over a mutually orthogonal family");
  decompose->add_option("--in", in, "Matrix document ('-' for stdin)")->required();
  decompose->add_option("--mode", mode, "ou | oo2 | oo3 | oo4 | weak-a | weak-b")
      ->required()
      ->check(CLI::IsMember({"ou", "oo2", "oo3", "oo4", "weak-a", "weak-b"}));
  add_search(decompose);

  auto* rumeb = app.add_subcommand("rumeb", "Real unextendible maximally entangled bases");
  rumeb->require_subcommand(1);
  auto* rumeb_build = rumeb->add_subcommand("build", "Emit the three- or four-member basis");
  rumeb_build->add_option("which", which, "three | four")->required();
  auto* rumeb_verify = rumeb->add_subcommand("verify", "Check a list of states");
  rumeb_verify->add_option("--in", in, "States document ('-' for stdin)")->required();
  add_search(rumeb_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kAffirmative : kUsage;
  }

  try {
    Tolerance tol = tolerance_from(env(kToleranceEnv));
    if (tol_flag) {
      tol.eps_orth = *tol_flag;
      tol = tol.validated();
    }
    if (*construct) return cmd_construct(kind, param, out);
    if (*verify) return cmd_verify(in, tol, out);
    if (*classify) return cmd_classify(in, tol, out);
    if (*extend) return cmd_extend(in, opts, tol, out);
    if (*decompose) return cmd_decompose(in, mode, opts, tol, out);
    if (*rumeb_build) return cmd_rumeb_build(which, out);
    if (*rumeb_verify) return cmd_rumeb_verify(in, opts, tol, out);
  } catch (const DocumentError& e) {
    err << "orthoset: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "orthoset: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "orthoset: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace orthoset::cli
