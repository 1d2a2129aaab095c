// satoc: synthesize, verify, and benchmark quantum SAT-oracle circuits.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 infeasible configuration (message names the minimal feasible budget).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "satoc/bench.hpp"
#include "satoc/cnf.hpp"
#include "satoc/lowering.hpp"
#include "satoc/qasm.hpp"
#include "satoc/sim.hpp"
#include "satoc/synth.hpp"

namespace {

using namespace satoc;

uint64_t default_seed() {
  if (const char* env = std::getenv("SATOC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric SATOC_SEED\n";
    }
  }
  return 1;
}

CnfFormula read_formula(const std::string& path) {
  if (path == "-") return parse_dimacs(std::cin);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_dimacs(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

struct CommonOpts {
  uint32_t ancillas = 0;
  std::string mode = "size";
  std::string lower = "exact";
  std::string variant = "default";
  bool dirty = false;
  uint64_t seed = default_seed();

  SynthMode synth_mode() const {
    return mode == "depth" ? SynthMode::Depth : SynthMode::Size;
  }
  SynthOptions synth_options() const {
    SynthOptions o;
    o.clean_ancillas = !dirty;
    o.variant = variant == "small-ancilla" ? VariantSelect::SmallAncilla
                : variant == "auto"        ? VariantSelect::Auto
                                           : VariantSelect::Default;
    return o;
  }
  LoweringConfig lowering() const {
    LoweringConfig c;
    c.toffoli_mode = lower == "approx" ? ToffoliMode::Approximate : ToffoliMode::Exact;
    return c;
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_ancillas) {
  auto* a = cmd->add_option("--ancillas", o.ancillas, "ancilla budget l");
  if (need_ancillas) a->required();
  cmd->add_option("--mode", o.mode, "size|depth")->check(CLI::IsMember({"size", "depth"}));
  cmd->add_option("--lower", o.lower, "exact|approx")->check(CLI::IsMember({"exact", "approx"}));
  cmd->add_option("--variant", o.variant, "default|small-ancilla|auto")
      ->check(CLI::IsMember({"default", "small-ancilla", "auto"}));
  cmd->add_flag("--dirty", o.dirty, "assume ancillas hold arbitrary states (disables the clean outermost merge)");
  cmd->add_option("--seed", o.seed, "PRNG seed (default from SATOC_SEED, else 1)");
}

int run_synth(const std::string& input, const CommonOpts& o, const std::string& out_path,
              const std::string& report_path, const std::string& emit_level,
              bool self_verify) {
  CnfFormula f = read_formula(input);
  Circuit mct = o.synth_mode() == SynthMode::Size
                    ? synth_size(f, o.ancillas, o.synth_options())
                    : synth_depth(f, o.ancillas, o.synth_options());

  if (self_verify) {
    VerifyOptions vo;
    vo.mode = f.num_vars <= 12 ? VerifyMode::Exhaustive : VerifyMode::Sampled;
    vo.seed = o.seed;
    VerificationReport rep = verify_oracle(mct, f, vo);
    if (!rep.passed()) {
      std::cerr << "self-verification FAILED:\n" << rep.to_json() << "\n";
      return 1;
    }
    std::cerr << "self-verification passed (" << rep.states_checked << " states)\n";
  }

  Circuit lowered = emit_level == "toffoli" ? lower_to_toffoli(mct, o.lowering())
                                            : lower_to_elementary(mct, o.lowering());
  CostReport cr = lowered.cost();
  cr.mct_calls = mct.cost().mct_calls;
  if (emit_level != "toffoli") {
    Circuit tof = lower_to_toffoli(mct, o.lowering());
    cr.toffoli_count = tof.cost().toffoli_count;
  }

  write_text(out_path, emit_qasm(lowered));
  if (!report_path.empty()) write_text(report_path, cr.to_json() + "\n");
  std::cerr << "synthesized: size=" << cr.size << " depth=" << cr.depth
            << " toffolis=" << cr.toffoli_count << "\n";
  return 0;
}

int run_verify(const std::string& input, const std::string& circuit_path,
               uint64_t seed, const std::string& report_path) {
  CnfFormula f = read_formula(input);
  std::ifstream in(circuit_path);
  if (!in) throw ParseError("cannot open '" + circuit_path + "'");
  Circuit c = parse_qasm(in);
  if (c.layout().n_inputs != f.num_vars)
    throw ConfigError("circuit has " + std::to_string(c.layout().n_inputs) +
                      " input qubits, formula has " + std::to_string(f.num_vars));
  VerifyOptions vo;
  vo.mode = f.num_vars <= 12 ? VerifyMode::Exhaustive : VerifyMode::Sampled;
  vo.seed = seed;
  VerificationReport rep = verify_oracle(c, f, vo);
  if (!report_path.empty()) write_text(report_path, rep.to_json() + "\n");
  std::cerr << (rep.passed() ? "PASS" : "FAIL") << ": " << rep.states_checked
            << " states checked, " << rep.total_failures() << " failures\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum SAT-oracle circuit synthesizer"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "DIMACS in, OpenQASM + cost report out");
  std::string synth_in{"-"}, synth_out{"-"}, synth_report, synth_level{"elementary"};
  bool synth_verify = false;
  CommonOpts synth_opts;
  synth->add_option("-i,--input", synth_in, "DIMACS file or - for stdin");
  synth->add_option("-o,--out", synth_out, "QASM output path");
  synth->add_option("--report", synth_report, "JSON cost report path");
  synth->add_option("--emit-level", synth_level, "toffoli|elementary")
      ->check(CLI::IsMember({"toffoli", "elementary"}));
  synth->add_flag("--verify", synth_verify, "simulate against the formula before writing");
  add_common(synth, synth_opts, true);

  // verify
  auto* verify = app.add_subcommand("verify", "check a QASM circuit against a formula");
  std::string verify_in, verify_circuit, verify_report;
  uint64_t verify_seed = default_seed();
  verify->add_option("-i,--input", verify_in, "DIMACS file or -")->required();
  verify->add_option("-c,--circuit", verify_circuit, "QASM file")->required();
  verify->add_option("--report", verify_report, "JSON verification report path");
  verify->add_option("--seed", verify_seed, "sampling seed");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random k-CNF in DIMACS form");
  uint32_t gen_n = 0, gen_m = 0, gen_k = 3;
  uint64_t gen_seed = default_seed();
  std::string gen_out{"-"};
  std::optional<double> gen_ratio;
  gen->add_option("-n", gen_n, "variables")->required();
  gen->add_option("-m", gen_m, "clauses (0 = phase transition for k)");
  gen->add_option("-k", gen_k, "clause width");
  gen->add_option("--ratio", gen_ratio, "clause/variable ratio when k outside {3,4}");
  gen->add_option("--seed", gen_seed, "PRNG seed");
  gen->add_option("-o,--out", gen_out, "output path");

  // bench
  auto* bench = app.add_subcommand("bench", "run a sweep spec, write CSV (+ JSON)");
  std::string bench_spec, bench_csv{"-"}, bench_json;
  uint32_t bench_threads = 0;
  bench->add_option("--spec", bench_spec, "sweep spec JSON file")->required();
  bench->add_option("-o,--out", bench_csv, "CSV output path");
  bench->add_option("--json", bench_json, "JSON mirror path");
  bench->add_option("--threads", bench_threads, "worker threads (0 = cores)");

  // estimate-grover
  auto* grover = app.add_subcommand("estimate-grover", "Grover resource estimate");
  uint32_t g_k = 3, g_n = 0, g_m = 0;
  std::string g_out{"-"}, g_formula;
  CommonOpts g_opts;
  grover->add_option("--k", g_k, "clause width")->required();
  grover->add_option("--n", g_n, "variables")->required();
  grover->add_option("--m", g_m, "clauses")->required();
  grover->add_option("-i,--input", g_formula, "use this DIMACS formula instead of a random one");
  grover->add_option("-o,--out", g_out, "JSON output path");
  add_common(grover, g_opts, true);

  try {
    app.parse(argc, argv);

    if (synth->parsed())
      return run_synth(synth_in, synth_opts, synth_out, synth_report, synth_level,
                       synth_verify);
    if (verify->parsed())
      return run_verify(verify_in, verify_circuit, verify_seed, verify_report);
    if (gen->parsed()) {
      uint32_t m = gen_m ? gen_m : phase_transition_m(gen_n, gen_k, gen_ratio);
      write_text(gen_out, emit_dimacs(random_kcnf(gen_n, m, gen_k, gen_seed)));
      return 0;
    }
    if (bench->parsed()) {
      std::ifstream in(bench_spec);
      if (!in) throw ParseError("cannot open '" + bench_spec + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      SweepSpec spec = SweepSpec::from_json(buf.str());
      if (bench_threads) spec.threads = bench_threads;
      SweepTable table = run_sweep(spec);
      std::ostringstream csv;
      table.write_csv(csv);
      write_text(bench_csv, csv.str());
      if (!bench_json.empty()) write_text(bench_json, table.to_json() + "\n");
      for (const auto& row : table.rows)
        if (!row.verified) {
          std::cerr << "row n=" << row.n << " l=" << row.l << " FAILED verification\n";
          return 1;
        }
      return 0;
    }
    if (grover->parsed()) {
      std::optional<CnfFormula> f;
      if (!g_formula.empty()) f = read_formula(g_formula);
      GroverEstimate est = estimate_grover(
          g_k, g_n, g_m, g_opts.ancillas, g_opts.synth_mode(), g_opts.synth_options(),
          g_opts.lowering(), g_opts.seed, f ? &*f : nullptr);
      write_text(g_out, est.to_json() + "\n");
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.min_feasible_ancillas)
      std::cerr << "hint: requires l >= " << e.min_feasible_ancillas << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
