#pragma once

// JSON front end: system descriptions in, module results out.

#include <string>
#include <vector>

#include "json.hpp"

#include "frobdyn/fsets.hpp"
#include "frobdyn/trichotomy.hpp"

namespace frobdyn {

using Json = nlohmann::json;

// p, e, d, optional variable names, factors, map and start point.
struct SystemDescription {
  std::shared_ptr<const FunctionField> K;
  unsigned d = 1;
  SelfMap map;
  std::vector<RationalFunction> start;
};

// Throws DomainError (or ParseError) on malformed input.
SystemDescription parse_system(const std::string& text);
std::shared_ptr<const FunctionField> parse_field(const Json& j);
std::shared_ptr<const Algebra> parse_ring(const Json& j, const Int& q);
EndoMatrix parse_endo_matrix(const Json& j, const std::shared_ptr<const Algebra>& ring);
std::vector<RationalFunction> parse_literals(const FunctionField& K, const Json& j, const std::string& where);

// The F-set file carries its own field; the point is read over its basis.
struct FSetInput {
  std::shared_ptr<const FunctionField> K;
  FSet set;
};
FSetInput parse_fset(const std::string& text);
FrobEq parse_frob_eq(const std::string& text);

Json to_json(const Rat& r);
Json to_json(const Elem& x);
Json to_json(const EndoMatrix& m);
Json to_json(const RatMatrix& m);
Json to_json(const IntMatrix& m);
Json to_json(const ExpCoord& x, const CoprimeBasis& B);
Json to_json(const ExpPoint& x, const CoprimeBasis& B);
Json to_json(const JordanSpec& J);
Json to_json(const NormalForm& NF, const SelfMap& S);
Json to_json(const EvidenceReport& r);
Json to_json(const FrobEqCount& c);
Json to_json(const std::optional<FSetCertificate>& c);
// Witness flags are recomputed here, never copied from the verdict.
Json to_json(const Verdict& V, const SelfMap& S, std::size_t orbit_sample = 10);

// step, exponents per coordinate (JSON-encoded), torsion modulus.
std::string orbit_csv(const Orbit& o);

}  // namespace frobdyn
