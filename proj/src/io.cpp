#include "frobdyn/io.hpp"

#include <sstream>

#include "frobdyn/errors.hpp"

namespace frobdyn {

namespace {

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset to line/column.
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON", line, col);
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

Rat parse_scalar(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(Int(std::to_string(j.get<long long>())));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
      throw DomainError(where + ": bad rational \"" + j.get<std::string>() + "\"");
    }
  }
  throw DomainError(where + ": expected an integer or a rational string");
}

long parse_long(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw DomainError(where + ": expected an integer");
  return j.get<long>();
}

std::vector<Rat> parse_scalars(const Json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array");
  std::vector<Rat> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_scalar(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

RatMatrix parse_rat_matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected a matrix");
  const std::size_t r = j.size(), c = r ? j[0].size() : 0;
  RatMatrix m(r, c, Rat(0));
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) throw DomainError(where + ": ragged matrix");
    for (std::size_t k = 0; k < c; ++k)
      m(i, k) = parse_scalar(j[i][k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  return m;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::shared_ptr<const FunctionField> parse_field(const Json& j) {
  const long p = parse_long(field(j, "p", "system"), "p");
  if (p < 2 || !is_prime(Int(p))) throw DomainError("p must be prime");
  const long e = j.contains("e") ? parse_long(j["e"], "e") : 1;
  if (e < 1) throw DomainError("e must be at least 1");
  const long d = parse_long(field(j, "d", "system"), "d");
  if (d < 1) throw DomainError("d must be at least 1");
  std::vector<std::string> names;
  if (j.contains("variables")) {
    if (!j["variables"].is_array()) throw DomainError("variables: expected an array of names");
    for (const auto& n : j["variables"]) names.push_back(n.get<std::string>());
  }
  auto F = std::make_shared<const FiniteField>(static_cast<std::uint64_t>(p), static_cast<unsigned>(e));
  return std::make_shared<const FunctionField>(F, static_cast<unsigned>(d), names);
}

std::shared_ptr<const Algebra> parse_ring(const Json& j, const Int& q) {
  std::string kind = "integer";
  if (j.is_string()) kind = j.get<std::string>();
  else if (j.is_object()) kind = field(j, "kind", "ring").get<std::string>();
  else if (!j.is_null()) throw DomainError("ring: expected a name or an object");
  if (kind == "integer") return make_integer_ring(q);
  if (kind == "quadratic") return make_quadratic_ring(parse_scalar(field(j, "trace", "ring"), "ring.trace"), q);
  if (kind == "quaternion")
    return make_quaternion_ring(parse_scalar(field(j, "a", "ring"), "ring.a"), parse_scalar(field(j, "b", "ring"), "ring.b"),
                                parse_scalars(field(j, "frob", "ring"), "ring.frob"), q);
  throw DomainError("ring: unknown kind \"" + kind + "\"");
}

EndoMatrix parse_endo_matrix(const Json& j, const std::shared_ptr<const Algebra>& ring) {
  if (!j.is_array()) throw DomainError("matrix: expected an array of rows");
  const std::size_t r = j.size(), c = r ? j[0].size() : 0;
  EndoMatrix m = endo_zero(ring, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) throw DomainError("matrix: ragged rows");
    for (std::size_t k = 0; k < c; ++k) {
      const Json& x = j[i][k];
      const std::string at = "matrix[" + std::to_string(i) + "][" + std::to_string(k) + "]";
      if (x.is_array()) {
        auto cs = parse_scalars(x, at);
        if (cs.size() != ring->dim) throw DomainError(at + ": wrong number of ring coordinates");
        m(i, k) = Elem(ring, cs);
      } else if (x.is_string() && x.get<std::string>() == "F") {
        m(i, k) = Elem::frobenius(ring);
      } else {
        m(i, k) = Elem::scalar(ring, parse_scalar(x, at));
      }
    }
  }
  return m;
}

std::vector<RationalFunction> parse_literals(const FunctionField& K, const Json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array of literals");
  std::vector<RationalFunction> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_string() && !j[i].is_number_integer()) throw DomainError(at + ": expected a literal");
    const std::string s = j[i].is_string() ? j[i].get<std::string>() : std::to_string(j[i].get<long long>());
    try {
      out.push_back(parse_rational_function(K, s));
    } catch (const ParseError& e) {
      throw DomainError(at + ": " + e.what());
    }
    if (out.back().is_zero()) throw DomainError(at + ": zero is not a torus point");
  }
  return out;
}

SystemDescription parse_system(const std::string& text) {
  const Json j = parse_text(text);
  SystemDescription out;
  out.K = parse_field(j);
  out.d = out.K->d;
  const Int q = out.K->F->order();
  const Json& map = field(j, "map", "system");
  SelfMap& S = out.map;
  if (map.contains("matrix")) {
    const RatMatrix A = parse_rat_matrix(map["matrix"], "map.matrix");
    if (!A.square()) throw DomainError("map.matrix must be square");
    S.factors.push_back({"Gm", make_integer_ring(q), A.rows(), true, 1});
    S.blocks.push_back(endo_from_rational(S.factors[0].ring, A));
  } else {
    const Json& fs = field(j, "factors", "system");
    const Json& bs = field(map, "blocks", "map");
    if (!fs.is_array() || !bs.is_array() || fs.size() != bs.size())
      throw DomainError("factors and map.blocks must be arrays of equal length");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Json& f = fs[i];
      FactorSpec spec;
      spec.label = f.contains("label") ? f["label"].get<std::string>() : "C" + std::to_string(i + 1);
      const std::string type = field(f, "type", "factor").get<std::string>();
      if (type != "torus" && type != "abstract") throw DomainError("factor type must be torus or abstract");
      spec.torus = type == "torus";
      spec.k = static_cast<std::size_t>(parse_long(field(f, "rank", "factor"), "factor.rank"));
      spec.dim = f.contains("dim") ? static_cast<unsigned>(parse_long(f["dim"], "factor.dim")) : 1;
      spec.ring = spec.torus ? make_integer_ring(q) : parse_ring(f.contains("ring") ? f["ring"] : Json(), q);
      S.factors.push_back(spec);
      S.blocks.push_back(parse_endo_matrix(bs[i], spec.ring));
    }
  }
  S.m = 1;
  for (const auto& B : S.blocks) S.m = lcm(S.m, endo_denominator(B));
  if (map.contains("m")) {
    const long m = parse_long(map["m"], "map.m");
    if (m < 1) throw DomainError("map.m must be positive");
    S.m = Int(m);
  }
  if (j.contains("start")) out.start = parse_literals(*out.K, j["start"], "start");
  if (S.torus_index()) {
    const auto beta = map.contains("translation") ? parse_literals(*out.K, map["translation"], "map.translation")
                                                  : std::vector<RationalFunction>(S.factors[*S.torus_index()].k,
                                                                                  RationalFunction::from_int(*out.K, 1));
    std::vector<RationalFunction> gens = beta;
    gens.insert(gens.end(), out.start.begin(), out.start.end());
    S.basis = coprime_basis(out.K, gens);
    S.beta = to_point(beta, *S.basis);
  }
  S.K = out.K;
  S.validate();
  return out;
}

FSetInput parse_fset(const std::string& text) {
  const Json j = parse_text(text);
  FSetInput in;
  in.K = parse_field(j);
  const auto basis = parse_literals(*in.K, field(j, "basis", "fset"), "basis");
  FSet& S = in.set;
  S.basis = coprime_basis(in.K, basis);
  S.q = j.contains("q") ? Int(parse_long(j["q"], "q")) : in.K->F->order();
  auto point = [&](const Json& x, const std::string& where) {
    return to_point(parse_literals(*in.K, x, where), S.basis);
  };
  S.gamma = point(field(j, "gamma", "fset"), "gamma");
  if (j.contains("alphas"))
    for (std::size_t i = 0; i < j["alphas"].size(); ++i)
      S.alphas.push_back(point(j["alphas"][i], "alphas[" + std::to_string(i) + "]"));
  if (j.contains("steps"))
    for (const auto& s : j["steps"]) S.steps.push_back(parse_long(s, "steps"));
  else
    S.steps.assign(S.alphas.size(), 1);
  const std::size_t cols = S.rank() * S.basis.size();
  S.lattice = IntMatrix(0, cols, Int(0));
  if (j.contains("lattice") && !j["lattice"].empty()) {
    const RatMatrix L = parse_rat_matrix(j["lattice"], "lattice");
    if (L.cols() != cols) throw DomainError("lattice rows need rank * basis size columns");
    S.lattice = IntMatrix(L.rows(), L.cols(), Int(0));
    for (std::size_t r = 0; r < L.rows(); ++r)
      for (std::size_t c = 0; c < L.cols(); ++c) {
        if (!is_integer(L(r, c))) throw DomainError("lattice entries must be integers");
        S.lattice(r, c) = L(r, c).get_num();
      }
  }
  S.ell = j.contains("ell") ? Int(parse_long(j["ell"], "ell")) : Int(1);
  S.frobenius_stable = j.value("frobeniusStable", false);
  S.validate();
  return in;
}

FrobEq parse_frob_eq(const std::string& text) {
  const Json j = parse_text(text);
  FrobEq E;
  E.q = Int(parse_long(field(j, "q", "equation"), "q"));
  E.P = parse_scalars(field(j, "P", "equation"), "P");
  E.c = parse_scalars(field(j, "c", "equation"), "c");
  for (const auto& d : field(j, "delta", "equation")) E.delta.push_back(parse_long(d, "delta"));
  E.validate();
  return E;
}

// ---- output ----

Json to_json(const Rat& r) { return r.get_str(); }

Json to_json(const Elem& x) {
  if (x.is_rational()) return x.rational().get_str();
  Json a = Json::array();
  for (const auto& c : x.coords()) a.push_back(c.get_str());
  return a;
}

Json to_json(const EndoMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const RatMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).get_str());
    out.push_back(row);
  }
  return out;
}

Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).get_str());
    out.push_back(row);
  }
  return out;
}

Json to_json(const ExpCoord& x, const CoprimeBasis& B) {
  Json out;
  Json e = Json::array();
  for (const auto& r : x.e) e.push_back(r.get_str());
  out["exponents"] = e;
  out["torsion"] = x.tors.get_str();
  try {
    out["value"] = reconstruct(x, B).str(B.K->names);
  } catch (const std::exception&) {
    // Rational exponents: a point of the divisible hull, no literal.
  }
  return out;
}

Json to_json(const ExpPoint& x, const CoprimeBasis& B) {
  Json out = Json::array();
  for (const auto& c : x) out.push_back(to_json(c, B));
  return out;
}

Json to_json(const JordanSpec& J) {
  Json blocks = Json::array();
  for (const auto& b : J.blocks) blocks.push_back({{"alpha", to_json(b.alpha)}, {"size", b.size}});
  return {{"blocks", blocks}, {"P", to_json(J.P)}, {"Pinv", to_json(J.Pinv)}};
}

Json to_json(const NormalForm& NF, const SelfMap& S) {
  Json out;
  out["nStar"] = NF.n_star;
  out["d"] = NF.d;
  Json fs = Json::array();
  for (const auto& f : NF.factors) {
    Json g;
    g["factor"] = S.factors[f.factor].label;
    Json u = Json::array();
    for (const auto& b : f.unipotent) u.push_back({{"alpha", to_json(b.alpha)}, {"size", b.size}});
    g["unipotent"] = u;
    Json fr = Json::array();
    for (std::size_t b = 0; b < f.frob.B1.size(); ++b)
      fr.push_back({{"alpha", to_json(f.frob.B1[b].alpha)}, {"size", f.frob.B1[b].size}, {"exponent", f.frob.exponents[b]}});
    g["frobenius"] = fr;
    g["nfp"] = to_json(f.frob.B2);
    g["dims"] = {{"unipotent", f.dim_u}, {"frobenius", f.dim_f}, {"nfp", f.dim_n}};
    g["D"] = to_json(f.D);
    g["H"] = to_json(f.H);
    g["l2"] = f.l2.get_str();
    g["m1"] = f.m1.get_str();
    if (f.point_level) {
      g["betaStar"] = to_json(f.beta_star, *S.basis);
      g["betaNF"] = to_json(f.beta_nf, *S.basis);
      g["w"] = to_json(f.w, *S.basis);
    }
    fs.push_back(g);
  }
  out["factors"] = fs;
  return out;
}

Json to_json(const EvidenceReport& r) {
  Json out;
  out["verdict"] = to_string(r.verdict);
  if (r.relation) {
    Json v = Json::array();
    for (const auto& x : *r.relation) v.push_back(x.get_str());
    out["relation"] = v;
  } else {
    out["relation"] = nullptr;
  }
  Json t = Json::array();
  for (const auto& x : r.trials) t.push_back({{"distinctPoints", x.distinct_points}, {"nullity", x.nullity}});
  out["trials"] = t;
  out["extensionDegree"] = r.extension_degree;
  out["monomials"] = r.monomials;
  out["pointsUsed"] = r.points_used;
  return out;
}

Json to_json(const FrobEqCount& c) {
  Json dens = Json::array();
  for (const auto& [n, v] : c.density) dens.push_back({{"N", n}, {"density", v}});
  return {{"N", c.N},
          {"count", c.count},
          {"degenerate", c.degenerate},
          {"density", dens},
          {"growthExponent", c.growth_exponent},
          {"C", c.C},
          {"boundHolds", c.bound_holds}};
}

Json to_json(const std::optional<FSetCertificate>& c) {
  if (!c) return {{"member", false}};
  Json h = Json::array();
  for (const auto& x : c->h) h.push_back(x.get_str());
  return {{"member", true}, {"n", c->n}, {"h", h}, {"complete", c->complete}};
}

Json to_json(const Verdict& V, const SelfMap& S, std::size_t orbit_sample) {
  Json out;
  out["normalForm"] = to_json(V.nf, S);
  if (V.B) {
    Json b;
    Json v = Json::array();
    if (V.B->point_level)
      for (const auto& x : V.B->v) v.push_back(x.get_str());
    else
      for (const auto& x : V.B->v_ring) v.push_back(to_json(x));
    b["vector"] = v;
    b["factor"] = S.factors[V.B->factor].label;
    b["pointLevel"] = V.B->point_level;
    b["iterate"] = V.B->n_iter;
    b["verified"] = verify_witness_B(*V.B, V.nf, S);
    out["conditionB"] = b;
  } else {
    out["conditionB"] = nullptr;
  }
  if (V.C) {
    Json c;
    if (V.C->parts.size() == 1) {
      c["T"] = to_json(V.C->parts[0].T);
    } else {
      Json T = Json::array();
      for (const auto& part : V.C->parts) T.push_back({{"factor", S.factors[part.factor].label}, {"rows", to_json(part.T)}});
      c["T"] = T;
    }
    c["n0"] = V.C->n0;
    c["r"] = V.C->r;
    c["dimZ"] = V.C->dimZ;
    c["ell0"] = V.C->ell0.get_str();
    c["verified"] = verify_witness_C(*V.C, V.nf, S);
    out["conditionC"] = c;
  } else {
    out["conditionC"] = nullptr;
  }
  if (V.plan) {
    Json a;
    const CoprimeBasis& B = *V.plan->system.basis;
    a["point"] = to_json(V.plan->alpha, B);
    a["normalFormPoint"] = to_json(V.plan->y, B);
    a["checks"] = {{"variables", V.plan->cond1}, {"independence", V.plan->cond2}, {"avoidance", V.plan->cond3}};
    a["oversized"] = V.plan->oversized;
    if (V.orbit) {
      Json o = Json::array();
      for (std::size_t k = 0; k < V.orbit->points.size() && k < orbit_sample; ++k)
        o.push_back(to_json(V.orbit->points[k], V.orbit->basis));
      a["orbitSample"] = o;
    }
    a["evidence"] = V.evidence ? to_json(*V.evidence) : Json(nullptr);
    out["conditionA"] = a;
  } else {
    out["conditionA"] = nullptr;
  }
  out["matrixLevelOnly"] = V.matrix_level_only;
  out["notes"] = V.notes;
  return out;
}

std::string orbit_csv(const Orbit& o) {
  std::ostringstream os;
  os << "step,exponents,torsion_modulus\n";
  for (std::size_t k = 0; k < o.points.size(); ++k) {
    Json pt = Json::array();
    for (const auto& c : o.points[k]) {
      Json e = Json::array();
      for (const auto& r : c.e) e.push_back(r.get_str());
      pt.push_back({{"e", e}, {"tors", c.tors.get_str()}});
    }
    os << k << ',' << csv_quote(pt.dump()) << ',' << o.moduli[k] << '\n';
  }
  return os.str();
}

}  // namespace frobdyn
