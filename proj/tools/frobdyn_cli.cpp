// frobdyn: analyze | simulate | reduce | jordan | fset-member | count-frobeq
//
// Exit codes: 0 success, 2 input error, 3 internal invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "frobdyn/errors.hpp"
#include "frobdyn/io.hpp"
#include "frobdyn/skew_linalg.hpp"

using namespace frobdyn;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

void emit_json(const Json& j, const std::string& path) { emit(j.dump(2) + "\n", path); }

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of self-maps on split tori over function fields"};
  app.require_subcommand(1);

  std::string file, json_out, csv_out, start, torsion_rule = "deterministic";
  std::uint64_t seed = 1;
  int d_override = 0;
  long steps = 60, m_bound = 24, N = 0;
  unsigned degree_bound = 3;
  std::string point_file, fset_file;

  auto* analyze_cmd = app.add_subcommand("analyze", "Decide and witness conditions A, B, C");
  analyze_cmd->add_option("file", file, "System description (JSON)")->required();
  analyze_cmd->add_option("--d", d_override, "Override the transcendence degree");
  analyze_cmd->add_option("--json", json_out, "Write the verdict here");
  analyze_cmd->add_option("--seed", seed, "Seed for the specialization trials")->capture_default_str();
  analyze_cmd->add_option("--steps", steps, "Orbit length for the evidence run")->capture_default_str();
  analyze_cmd->add_option("--degree-bound", degree_bound, "Degree bound of the specialization test")->capture_default_str();
  analyze_cmd->add_option("--m-bound", m_bound, "Search bound for Frobenius powers")->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "Orbit table");
  sim_cmd->add_option("file", file, "System description (JSON)")->required();
  sim_cmd->add_option("--start", start, "Comma-separated start literals (default: the file's start)");
  sim_cmd->add_option("--steps", steps, "Number of steps")->capture_default_str();
  sim_cmd->add_option("--torsion-rule", torsion_rule, "deterministic or enumerate")
      ->check(CLI::IsMember({"deterministic", "enumerate"}))
      ->capture_default_str();
  sim_cmd->add_option("--csv", csv_out, "Write the table here");

  auto* reduce_cmd = app.add_subcommand("reduce", "Normal form");
  reduce_cmd->add_option("file", file, "System description (JSON)")->required();
  reduce_cmd->add_option("--json", json_out, "Write the normal form here");
  reduce_cmd->add_option("--m-bound", m_bound, "Search bound for Frobenius powers")->capture_default_str();

  auto* jordan_cmd = app.add_subcommand("jordan", "Jordan form over a central eigenvalue");
  jordan_cmd->add_option("file", file, "{\"q\", \"ring\", \"matrix\"} (JSON)")->required();
  jordan_cmd->add_option("--json", json_out, "Write the result here");

  auto* fset_cmd = app.add_subcommand("fset-member", "F-set membership with certificate");
  fset_cmd->add_option("point", point_file, "{\"point\": [literals]} (JSON)")->required();
  fset_cmd->add_option("fset", fset_file, "F-set description (JSON)")->required();
  fset_cmd->add_option("--json", json_out, "Write the result here");

  auto* count_cmd = app.add_subcommand("count-frobeq", "Count solvable n <= N");
  count_cmd->add_option("file", file, "{\"q\", \"P\", \"c\", \"delta\"} (JSON)")->required();
  count_cmd->add_option("N", N, "Upper bound (default: the file's N)");
  count_cmd->add_option("--json", json_out, "Write the result here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) {
      auto sys = parse_system(slurp(file));
      const unsigned d = d_override > 0 ? static_cast<unsigned>(d_override) : sys.d;
      if (d_override < 0) throw DomainError("--d must be at least 1");
      AnalyzeOptions opt;
      opt.steps = steps;
      opt.m_bound = m_bound;
      opt.evidence.seed = seed;
      opt.evidence.degree_bound = degree_bound;
      const Verdict V = analyze(sys.map, d, opt);
      emit_json(to_json(V, sys.map), json_out);
    } else if (sim_cmd->parsed()) {
      auto sys = parse_system(slurp(file));
      std::vector<RationalFunction> x0 = sys.start;
      if (!start.empty()) {
        Json lits = Json::array();
        for (const auto& s : split_commas(start)) lits.push_back(s);
        x0 = parse_literals(*sys.K, lits, "--start");
        std::vector<RationalFunction> gens = x0;
        for (const auto& e : sys.map.basis->elems) gens.push_back(RationalFunction::from_poly(e));
        const CoprimeBasis B = coprime_basis(sys.K, gens);
        for (auto& c : sys.map.beta) c = rebase(c, *sys.map.basis, B);
        sys.map.basis = B;
      }
      if (x0.empty()) throw DomainError("no start point: give --start or \"start\" in the file");
      const auto rule = torsion_rule == "enumerate" ? TorsionRule::Enumerate : TorsionRule::Deterministic;
      const Orbit o = simulate_orbit(sys.map, to_point(x0, *sys.map.basis), steps, rule);
      emit(orbit_csv(o), csv_out);
    } else if (reduce_cmd->parsed()) {
      auto sys = parse_system(slurp(file));
      emit_json(to_json(build_normal_form(sys.map, sys.d, m_bound), sys.map), json_out);
    } else if (jordan_cmd->parsed()) {
      const Json j = Json::parse(slurp(file));
      const Int q = Int(j.value("q", 2L));
      auto ring = parse_ring(j.contains("ring") ? j["ring"] : Json(), q);
      emit_json(to_json(jordan_form_central(parse_endo_matrix(j.at("matrix"), ring))), json_out);
    } else if (fset_cmd->parsed()) {
      const FSetInput in = parse_fset(slurp(fset_file));
      const Json pj = Json::parse(slurp(point_file));
      const auto lits = parse_literals(*in.K, pj.at("point"), "point");
      Json out;
      try {
        out = to_json(fset_member(to_point(lits, in.set.basis), in.set));
      } catch (const NotInSpan&) {
        out = {{"member", false}, {"reason", "point outside the group generated by the basis"}};
      }
      emit_json(out, json_out);
    } else if (count_cmd->parsed()) {
      const std::string text = slurp(file);
      const FrobEq E = parse_frob_eq(text);
      long bound = N;
      if (bound <= 0) bound = Json::parse(text).value("N", 0L);
      if (bound <= 0) throw DomainError("N must be positive");
      emit_json(to_json(frob_eq_count(E, bound)), json_out);
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "error: invariant violation: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionViolated& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Unsupported& e) {
    std::cerr << "error: unsupported: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
