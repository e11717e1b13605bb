#include "sbm/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sbm/algebra.hpp"
#include "sbm/congruence.hpp"
#include "sbm/ensemble.hpp"
#include "sbm/error.hpp"
#include "sbm/hybrid.hpp"
#include "sbm/instance.hpp"
#include "sbm/oracle.hpp"
#include "sbm/propagation.hpp"
#include "sbm/sbm_structure.hpp"

namespace sbm {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::PreconditionViolated, "cannot open " + path);
  return nlohmann::json::parse(in);
}

std::map<std::string, AlgebraRef> load_extra(const std::vector<std::string>& files) {
  std::map<std::string, AlgebraRef> extra;
  for (const auto& f : files) {
    AlgebraRef alg = algebra_from_json(load_json(f));
    extra[alg->name()] = alg;
  }
  return extra;
}

Instance load_instance(const std::string& path, const std::vector<std::string>& algebra_files) {
  Instance inst = instance_from_json(load_json(path), load_extra(algebra_files));
  validate_instance(inst);
  return inst;
}

std::string blocks_text(const Congruence& c) {
  std::ostringstream out;
  for (const auto& block : c.blocks()) {
    out << '{';
    for (std::size_t i = 0; i < block.size(); ++i) out << (i ? " " : "") << block[i];
    out << '}';
  }
  return out.str();
}

std::string set_text(const std::vector<int>& xs) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i];
  out << '}';
  return out.str();
}

nlohmann::json assignment_json(const Instance& inst, const std::vector<int>& a) {
  nlohmann::json j = nlohmann::json::object();
  for (int v = 0; v < inst.num_vars(); ++v) j[inst.var_names[v]] = a[v];
  return j;
}

int run_check_algebra(const std::string& file) {
  AlgebraRef raw = algebra_from_json(load_json(file));
  try {
    AlgebraRef norm = normalize_algebra(*raw);
    const SbmCertificate& cert = certificate_for(norm);
    std::cout << "algebra: " << raw->name() << " (" << raw->size() << " elements)\n";
    std::cout << "sigma: " << blocks_text(cert.sigma) << "\n";
    std::cout << "theta: " << blocks_text(cert.theta) << "\n";
    std::cout << "max block: " << set_text(cert.max_block) << "\n";
    std::cout << "minimal element: "
              << (cert.minimal_element ? std::to_string(*cert.minimal_element) : "none") << "\n";
    std::cout << "maltsev: " << (cert.is_maltsev ? "yes" : "no") << "\n";
    std::cout << "SBM: yes\n";
    return 0;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NormalizationFailed || e.kind() == ErrorKind::NotSbm) {
      std::cout << "SBM: no (" << e.what() << ")\n";
      return 1;
    }
    throw;
  }
}

int run_solve(const std::string& file, const std::vector<std::string>& algebra_files,
              const std::string& trace_path) {
  Instance inst = load_instance(file, algebra_files);
  SolveOptions opts;
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) fail(ErrorKind::PreconditionViolated, "cannot open trace file " + trace_path);
    opts.trace = &trace;
  }
  SolveOutcome out = solve(inst, opts);
  nlohmann::json j;
  switch (out.status) {
    case SolveStatus::Sat:
      j["status"] = "SAT";
      j["assignment"] = assignment_json(inst, *out.assignment);
      std::cout << j.dump() << "\n";
      return 0;
    case SolveStatus::Unsat:
      j["status"] = "UNSAT";
      std::cout << j.dump() << "\n";
      return 1;
    case SolveStatus::Rejected:
      break;
  }
  j["status"] = "REJECTED";
  j["diagnostic"] = out.diagnostic;
  std::cout << j.dump() << "\n";
  return 2;
}

int run_oracle(const std::string& file, const std::vector<std::string>& algebra_files,
               std::size_t limit) {
  Instance inst = load_instance(file, algebra_files);
  auto solutions = brute_solve(inst, limit);
  nlohmann::json j;
  j["status"] = solutions.empty() ? "UNSAT" : "SAT";
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : solutions) arr.push_back(assignment_json(inst, s));
  j["solutions"] = arr;
  std::cout << j.dump() << "\n";
  return solutions.empty() ? 1 : 0;
}

int run_coherent(const std::string& file, const std::vector<std::string>& algebra_files) {
  Instance inst = load_instance(file, algebra_files);
  Instance norm = normalize_instance(inst);
  TightenedInstance tight = establish_k_minimality(norm, 3);
  if (tight.unsat) {
    std::cout << "UNSAT before coherence analysis\n";
    return 1;
  }
  const Instance& work = tight.instance;
  CoherentIndex index = coherent_sets(work);
  std::cout << "classes: " << index.num_classes << "\n";
  for (int c = 0; c < index.num_classes; ++c) {
    std::cout << "class " << c << " vars:";
    for (int u : index.class_vars[c]) std::cout << ' ' << work.var_names[u];
    std::cout << "\n";
    for (int t : index.class_members[c]) {
      const IntervalTriple& tr = index.triples[t];
      std::cout << "  (" << work.var_names[tr.var] << ", " << blocks_text(tr.alpha) << ", "
                << blocks_text(tr.beta) << ")\n";
    }
  }
  return 0;
}

std::vector<int> parse_orders(const std::string& csv) {
  std::vector<int> orders;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) fail(ErrorKind::PreconditionViolated, "empty group order");
    orders.push_back(std::stoi(item));
  }
  if (orders.empty()) fail(ErrorKind::PreconditionViolated, "no group orders given");
  return orders;
}

int run_gen(const std::string& chain, const std::string& vee, bool instance_mode,
            std::uint64_t seed, int vars, int constraints, int arity, double density,
            const std::string& fixtures) {
  if (!chain.empty()) {
    std::string name = "chain";
    for (int o : parse_orders(chain)) name += "_" + std::to_string(o);
    AlgebraRef alg = lookup_algebra(name);
    std::cout << algebra_to_json(*alg).dump(2) << "\n";
    return 0;
  }
  if (!vee.empty()) {
    std::vector<int> orders = parse_orders(vee);
    if (orders.size() != 3)
      fail(ErrorKind::PreconditionViolated, "a vee shape takes exactly three group orders");
    std::string name = "vee";
    for (int o : orders) name += "_" + std::to_string(o);
    AlgebraRef alg = lookup_algebra(name);
    std::cout << algebra_to_json(*alg).dump(2) << "\n";
    return 0;
  }
  if (instance_mode) {
    RandomProfile profile;
    if (!fixtures.empty()) {
      profile.fixtures.clear();
      std::stringstream ss(fixtures);
      std::string item;
      while (std::getline(ss, item, ',')) profile.fixtures.push_back(item);
    }
    profile.num_vars = vars;
    profile.num_constraints = constraints;
    profile.max_arity = arity;
    profile.density = density;
    Instance inst = random_instance(seed, profile);
    std::cout << instance_to_json(inst).dump(2) << "\n";
    return 0;
  }
  std::cerr << "gen: pass --chain, --vee, or --instance\n";
  return 2;
}

int run_minimize(const std::string& file, const std::vector<std::string>& algebra_files, int k) {
  Instance inst = load_instance(file, algebra_files);
  TightenedInstance tight = establish_k_minimality(inst, k);
  nlohmann::json j;
  j["unsat"] = tight.unsat;
  j["instance"] = instance_to_json(tight.instance);
  nlohmann::json algs = nlohmann::json::array();
  std::set<std::string> seen;
  for (const auto& dom : tight.instance.domains)
    if (seen.insert(dom->name()).second) algs.push_back(algebra_to_json(*dom));
  j["algebras"] = algs;
  std::cout << j.dump(2) << "\n";
  return tight.unsat ? 1 : 0;
}

int run_verify_ensemble(const std::string& file, const std::vector<std::string>& algebra_files,
                        const std::string& order_name) {
  Instance inst = load_instance(file, algebra_files);
  Instance norm = normalize_instance(inst);
  BlockMinimalResult bm = block_minimality(norm);
  if (bm.unsat) {
    if (bm.lossy) {
      std::cout << "REJECTED: " << bm.diagnostic << "\n";
      return 2;
    }
    std::cout << "UNSAT\n";
    return 1;
  }
  DescentOrder order = order_name == "rev" ? DescentOrder::Reverse : DescentOrder::Forward;
  std::vector<int> descended = full_descent(bm.instance, order);
  std::vector<int> assignment(descended.size());
  for (std::size_t v = 0; v < descended.size(); ++v)
    assignment[v] = bm.value_of[v][descended[v]];
  require_internal(satisfies(inst, assignment), "descent result fails the input instance");
  nlohmann::json j;
  j["status"] = "SAT";
  j["order"] = order_name;
  j["assignment"] = assignment_json(inst, assignment);
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Finite semilattice block Mal'tsev algebra toolkit and CSP solver"};
  app.require_subcommand(1);

  std::string check_file;
  CLI::App* check_cmd = app.add_subcommand("check-algebra", "Certify an algebra from JSON");
  check_cmd->add_option("file", check_file, "algebra JSON file")->required();

  std::string solve_file;
  std::string solve_trace;
  std::vector<std::string> solve_algs;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a CSP instance");
  solve_cmd->add_option("file", solve_file, "instance JSON file")->required();
  solve_cmd->add_option("--trace", solve_trace, "JSONL trace output path");
  solve_cmd->add_option("--algebras", solve_algs, "extra algebra JSON files");

  std::string oracle_file;
  std::vector<std::string> oracle_algs;
  std::size_t oracle_limit = 1;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Enumerate solutions by brute force");
  oracle_cmd->add_option("file", oracle_file, "instance JSON file")->required();
  oracle_cmd->add_option("--limit", oracle_limit, "maximum number of solutions to report");
  oracle_cmd->add_option("--algebras", oracle_algs, "extra algebra JSON files");

  std::string coherent_file;
  std::vector<std::string> coherent_algs;
  CLI::App* coherent_cmd =
      app.add_subcommand("coherent", "Print coherent sets of a tightened instance");
  coherent_cmd->add_option("file", coherent_file, "instance JSON file")->required();
  coherent_cmd->add_option("--algebras", coherent_algs, "extra algebra JSON files");

  std::string gen_chain;
  std::string gen_vee;
  bool gen_instance = false;
  std::uint64_t gen_seed = 0;
  int gen_vars = 3;
  int gen_constraints = 3;
  int gen_arity = 2;
  double gen_density = 0.5;
  std::string gen_fixtures;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate fixture algebras or instances");
  gen_cmd->add_option("--chain", gen_chain, "comma separated group orders of a chain fixture");
  gen_cmd->add_option("--vee", gen_vee, "three comma separated group orders of a vee fixture");
  gen_cmd->add_flag("--instance", gen_instance, "generate a random instance");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--vars", gen_vars, "number of variables");
  gen_cmd->add_option("--constraints", gen_constraints, "number of constraints");
  gen_cmd->add_option("--arity", gen_arity, "maximum constraint arity");
  gen_cmd->add_option("--density", gen_density, "seed tuple density");
  gen_cmd->add_option("--fixtures", gen_fixtures, "comma separated fixture names");

  std::string min_file;
  std::vector<std::string> min_algs;
  int min_k = 3;
  CLI::App* min_cmd = app.add_subcommand("minimize", "Establish k-minimality and print the result");
  min_cmd->add_option("file", min_file, "instance JSON file")->required();
  min_cmd->add_option("--k", min_k, "subset size bound")->required();
  min_cmd->add_option("--algebras", min_algs, "extra algebra JSON files");

  std::string ver_file;
  std::vector<std::string> ver_algs;
  std::string ver_order = "fwd";
  CLI::App* ver_cmd =
      app.add_subcommand("verify-ensemble", "Solve by ensemble descent and verify");
  ver_cmd->add_option("file", ver_file, "instance JSON file")->required();
  ver_cmd->add_option("--order", ver_order, "descent order")
      ->check(CLI::IsMember({"fwd", "rev"}));
  ver_cmd->add_option("--algebras", ver_algs, "extra algebra JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check_cmd->parsed()) return run_check_algebra(check_file);
    if (solve_cmd->parsed()) return run_solve(solve_file, solve_algs, solve_trace);
    if (oracle_cmd->parsed()) return run_oracle(oracle_file, oracle_algs, oracle_limit);
    if (coherent_cmd->parsed()) return run_coherent(coherent_file, coherent_algs);
    if (gen_cmd->parsed())
      return run_gen(gen_chain, gen_vee, gen_instance, gen_seed, gen_vars, gen_constraints,
                     gen_arity, gen_density, gen_fixtures);
    if (min_cmd->parsed()) return run_minimize(min_file, min_algs, min_k);
    if (ver_cmd->parsed()) return run_verify_ensemble(ver_file, ver_algs, ver_order);
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace sbm
