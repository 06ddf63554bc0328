#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frobdyn/reduction.hpp"

namespace frobdyn {

// Invariant character. sigma lives on the block-last unipotent coordinates of
// the normal form; v = sigma^T H scaled to a primitive integer vector. Then
// x -> x^v is invariant under the n_iter-th iterate (torus factor), or the
// row v_ring is fixed by A* (other factors, matrix level only).
struct WitnessB {
  std::size_t factor = 0;
  bool point_level = false;
  std::vector<std::size_t> coords;  // normal-form coordinates carrying sigma
  std::vector<Int> sigma;           // full normal-form length
  std::vector<Int> v;               // torus: character on the original coordinates
  std::vector<Elem> v_ring;         // sigma^T H over End(C)
  long n_iter = 1;
  bool verified = false;
};

// Rows of T per factor taking part in the quotient.
struct QuotientPart {
  std::size_t factor = 0;
  std::vector<std::size_t> nf_rows;  // left-eigenvector rows of D used
  EndoMatrix T;                      // T A* = F^r T
  bool point_level = false;
  IntMatrix T_int;  // torus: integer rows of den * T
  ExpPoint shift;   // torus: tau(x) = T_int x + shift
};

struct WitnessC {
  long exponent = 0;  // Frobenius exponent class n
  std::vector<QuotientPart> parts;
  long n0 = 1, r = 1;
  unsigned dimZ = 0;
  Int ell0 = 1;
  bool verified = false;
};

// One Frobenius exponent class: blocks (factor, block index) in lex order.
struct FrobeniusClass {
  long exponent = 0;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  unsigned dim = 0;  // sum of dim C_j
};

std::vector<FrobeniusClass> frobenius_classes(const NormalForm& NF, const SelfMap& S);

std::optional<WitnessB> check_condition_B(const NormalForm& NF, const SelfMap& S);
bool verify_witness_B(const WitnessB& W, const NormalForm& NF, const SelfMap& S);
// f(Psi^{n_iter}(x)) - f(x) for the torus character; identity when invariant.
ExpCoord witness_B_defect(const WitnessB& W, const SelfMap& S, const ExpPoint& x);

std::optional<WitnessC> check_condition_C(const NormalForm& NF, const SelfMap& S, unsigned d);
bool verify_witness_C(const WitnessC& W, const NormalForm& NF, const SelfMap& S);
// tau(Psi^{n0}(x)) - F^r(tau(x)) on the torus part.
ExpPoint witness_C_defect(const WitnessC& W, const SelfMap& S, const ExpPoint& x);

struct PlannedBlock {
  std::size_t factor = 0;
  std::size_t block = 0;  // index into frob.B1
  long exponent = 0;
  std::size_t size = 0;
  unsigned S = 0;    // offset S_{l,j}
  unsigned var = 0;  // 0-based transcendence variable t_{S+1}
  std::vector<std::size_t> coords;  // normal-form coordinates (torus factor)
  std::optional<RationalFunction> value;
};

struct DensePointPlan {
  std::vector<PlannedBlock> blocks;
  std::vector<RationalFunction> y_values;  // normal-form coordinates of the torus factor
  std::vector<RationalFunction> fresh;     // distinct values that must be independent
  std::vector<RationalFunction> avoid;
  SelfMap system;  // input map over a basis covering everything below
  ExpPoint y;      // normal-form point
  ExpPoint alpha;  // original coordinates: c(alpha) = y
  bool oversized = false;
  bool cond1 = false, cond2 = false, cond3 = false;
  int retries = 0;
};

struct DensePointOptions {
  bool require_no_B = true;
  bool allow_oversized = false;  // reuse variables when a class exceeds d
  int max_retries = 32;
};

// Gamma_avoid empty means: avoid the basis elements occurring in the translation.
DensePointPlan construct_dense_point(const NormalForm& NF, const SelfMap& S, unsigned d,
                                     const std::vector<RationalFunction>& avoid,
                                     const DensePointOptions& opt = {});

enum class TorsionRule { Deterministic, Enumerate };

struct Orbit {
  std::vector<ExpPoint> points;
  std::vector<Int> moduli;  // torsion ambiguity introduced at each step
  CoprimeBasis basis;
  TorsionRule rule = TorsionRule::Deterministic;
};

Orbit simulate_orbit(const SelfMap& S, const ExpPoint& x0, long n, TorsionRule rule = TorsionRule::Deterministic);

enum class EvidenceVerdict { DenseEvidence, RelationFound };

struct SpecializationTrial {
  std::size_t distinct_points = 0;
  std::size_t nullity = 0;  // dimension of vanishing polynomials of degree <= bound
};

struct EvidenceReport {
  EvidenceVerdict verdict = EvidenceVerdict::DenseEvidence;
  std::optional<std::vector<Int>> relation;  // x^v constant along the orbit
  std::optional<ExpCoord> relation_value;    // that constant
  std::vector<SpecializationTrial> trials;
  unsigned extension_degree = 0;
  std::size_t monomials = 0;
  std::size_t points_used = 0;
};

struct EvidenceOptions {
  long index_bound = 1000;
  int spec_trials = 5;
  unsigned degree_bound = 3;
  std::uint64_t seed = 1;
  std::optional<std::vector<long>> subset;  // explicit orbit indices
};

EvidenceReport density_evidence(const Orbit& orbit, const EvidenceOptions& opt);
EvidenceReport density_evidence_serial(const Orbit& orbit, const EvidenceOptions& opt);

std::string to_string(EvidenceVerdict v);

struct AnalyzeOptions {
  long m_bound = 24;
  long steps = 60;
  EvidenceOptions evidence;
  std::vector<RationalFunction> avoid;
};

struct Verdict {
  NormalForm nf;
  std::vector<FrobeniusClass> classes;
  std::optional<WitnessB> B;
  std::optional<WitnessC> C;
  std::optional<DensePointPlan> plan;
  std::optional<Orbit> orbit;
  std::optional<EvidenceReport> evidence;
  bool matrix_level_only = false;  // no torus factor
  std::vector<std::string> notes;
};

Verdict analyze(const SelfMap& S, unsigned d, const AnalyzeOptions& opt = {});

}  // namespace frobdyn
