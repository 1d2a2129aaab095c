#include "satoc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "satoc/sim.hpp"

namespace satoc {

namespace {

const char* mode_name(SynthMode m) { return m == SynthMode::Size ? "size" : "depth"; }

SynthMode mode_from(const std::string& s) {
  if (s == "size") return SynthMode::Size;
  if (s == "depth") return SynthMode::Depth;
  throw ParseError("unknown mode '" + s + "' (expected size|depth)");
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Counts gates of selected kinds as a pass-through stage.
class KindCounter : public GateSink {
 public:
  KindCounter(GateSink& out, GateKind a, GateKind b) : out_(out), a_(a), b_(b) {}
  void on_gate(const Gate& g) override {
    if (g.kind == a_ || g.kind == b_) ++count_;
    out_.on_gate(g);
  }
  uint64_t count() const { return count_; }

 private:
  GateSink& out_;
  GateKind a_, b_;
  uint64_t count_ = 0;
};

class NullSink : public GateSink {
 public:
  void on_gate(const Gate&) override {}
};

}  // namespace

OracleCost synthesize_and_cost(const CnfFormula& f, uint32_t l, SynthMode mode,
                               const SynthOptions& sopts, LoweringConfig lcfg,
                               bool verify, uint32_t exhaustive_max_n,
                               uint64_t samples, uint64_t verify_seed) {
  OracleCost out;
  Layout layout = oracle_layout(f, l);

  // One synthesis pass feeds both the verifier and the lowering pipeline.
  CostAccumulator elem_cost(layout, Level::ElementaryLevel);
  ToffoliLowerer tof(elem_cost, lcfg);
  KindCounter toffoli_count(tof, GateKind::Toffoli, GateKind::ApproxToffoli);
  MctLowerer mct(toffoli_count, layout, lcfg);
  KindCounter mct_count(mct, GateKind::Mct, GateKind::Mct);

  SimProgram prog(layout);
  SynthResult r{mode, false};
  if (verify) {
    TeeSink tee(prog, mct_count);
    r = synth_emit(f, l, mode, sopts, tee);
  } else {
    r = synth_emit(f, l, mode, sopts, mct_count);
  }
  out.depth_fell_back = r.depth_fell_back;

  out.cost = elem_cost.report();
  out.cost.toffoli_count = toffoli_count.count();
  out.cost.mct_calls = mct_count.count();

  if (verify) {
    VerifyOptions vo;
    vo.mode = f.num_vars <= exhaustive_max_n ? VerifyMode::Exhaustive : VerifyMode::Sampled;
    vo.sample_count = samples;
    vo.seed = verify_seed;
    VerificationReport rep = verify_oracle(prog, f, vo);
    out.verified = rep.passed();
    out.verify_failures = rep.total_failures();
  }
  return out;
}

SweepTable run_sweep(const SweepSpec& spec) {
  if (!std::is_sorted(spec.ladder.begin(), spec.ladder.end()) ||
      std::adjacent_find(spec.ladder.begin(), spec.ladder.end()) != spec.ladder.end())
    throw ConfigError("ladder must be strictly increasing");
  if (spec.ladder.empty() || spec.n_values.empty())
    throw ConfigError("sweep needs at least one n and one ancilla budget");

  SweepTable table;
  table.spec = spec;

  for (uint32_t n : spec.n_values) {
    uint32_t m = spec.m_override ? *spec.m_override
                                 : phase_transition_m(n, spec.k, spec.ratio);
    // Same formula ensemble across the whole ladder for comparability.
    std::vector<CnfFormula> ensemble;
    ensemble.reserve(spec.ensemble);
    for (uint32_t i = 0; i < spec.ensemble; ++i) {
      uint64_t fseed = fnv1a(std::to_string(spec.seed) + ":" + std::to_string(n) +
                             ":" + std::to_string(i));
      ensemble.push_back(random_kcnf(n, m, spec.k, fseed));
    }

    for (uint32_t l : spec.ladder) {
      std::vector<OracleCost> results(ensemble.size());
      std::atomic<size_t> next{0};
      uint32_t workers = spec.threads ? spec.threads
                                      : std::max(1u, std::thread::hardware_concurrency());
      workers = std::min<uint32_t>(workers, static_cast<uint32_t>(ensemble.size()));
      auto work = [&]() {
        for (size_t i = next.fetch_add(1); i < ensemble.size(); i = next.fetch_add(1)) {
          results[i] = synthesize_and_cost(
              ensemble[i], l, spec.mode, spec.synth, spec.lowering, true,
              spec.exhaustive_max_n, spec.samples,
              fnv1a("verify:" + std::to_string(spec.seed) + ":" + std::to_string(i)));
        }
      };
      if (workers <= 1) {
        work();
      } else {
        std::vector<std::thread> pool;
        for (uint32_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
      }

      SweepRow row;
      row.k = spec.k;
      row.n = n;
      row.m = m;
      row.l = l;
      row.mode = spec.mode;
      row.verified = true;
      double sum_s = 0, sum_d = 0, sum_s2 = 0, sum_d2 = 0;
      row.min_size = static_cast<double>(results[0].cost.size);
      row.max_size = row.min_size;
      for (const auto& res : results) {
        double s = static_cast<double>(res.cost.size);
        double d = static_cast<double>(res.cost.depth);
        sum_s += s;
        sum_d += d;
        sum_s2 += s * s;
        sum_d2 += d * d;
        row.min_size = std::min(row.min_size, s);
        row.max_size = std::max(row.max_size, s);
        row.verified = row.verified && res.verified;
        row.verify_failures += res.verify_failures;
        row.depth_fell_back = row.depth_fell_back || res.depth_fell_back;
      }
      double cnt = static_cast<double>(results.size());
      row.mean_size = sum_s / cnt;
      row.mean_depth = sum_d / cnt;
      row.std_size = std::sqrt(std::max(0.0, sum_s2 / cnt - row.mean_size * row.mean_size));
      row.std_depth = std::sqrt(std::max(0.0, sum_d2 / cnt - row.mean_depth * row.mean_depth));
      table.rows.push_back(row);
    }
  }
  return table;
}

void SweepTable::write_csv(std::ostream& out) const {
  std::ostringstream hash_src;
  hash_src << spec.to_json();
  out << "# seed=" << spec.seed << " config=" << std::hex << spec.config_hash()
      << std::dec << "\n";
  out << "k,n,m,l,mode,mean_size,mean_depth,std_size,std_depth,verified\n";
  for (const auto& r : rows) {
    out << r.k << "," << r.n << "," << r.m << "," << r.l << ","
        << mode_name(r.mode) << (r.depth_fell_back ? "-fallback" : "") << ","
        << std::fixed << std::setprecision(2) << r.mean_size << "," << r.mean_depth
        << "," << r.std_size << "," << r.std_depth << "," << (r.verified ? 1 : 0)
        << "\n";
  }
}

std::string SweepTable::to_json() const {
  nlohmann::json j;
  j["spec"] = nlohmann::json::parse(spec.to_json());
  j["config_hash"] = spec.config_hash();
  auto& rows_json = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"k", r.k},
                         {"n", r.n},
                         {"m", r.m},
                         {"l", r.l},
                         {"mode", mode_name(r.mode)},
                         {"depth_fell_back", r.depth_fell_back},
                         {"mean_size", r.mean_size},
                         {"mean_depth", r.mean_depth},
                         {"std_size", r.std_size},
                         {"std_depth", r.std_depth},
                         {"min_size", r.min_size},
                         {"max_size", r.max_size},
                         {"verified", r.verified},
                         {"verify_failures", r.verify_failures}});
  }
  return j.dump(2);
}

SweepSpec SweepSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sweep spec: ") + e.what());
  }
  SweepSpec s;
  s.k = j.value("k", 4u);
  for (const auto& v : j.at("n")) s.n_values.push_back(v.get<uint32_t>());
  if (j.contains("m")) s.m_override = j["m"].get<uint32_t>();
  if (j.contains("ratio")) s.ratio = j["ratio"].get<double>();
  s.ensemble = j.value("ensemble", 100u);
  for (const auto& v : j.at("ladder")) s.ladder.push_back(v.get<uint32_t>());
  s.mode = mode_from(j.value("mode", "size"));
  s.lowering.toffoli_mode = j.value("lower", std::string("exact")) == "approx"
                                ? ToffoliMode::Approximate
                                : ToffoliMode::Exact;
  s.seed = j.value("seed", 1ull);
  s.threads = j.value("threads", 0u);
  s.exhaustive_max_n = j.value("exhaustive_max_n", 12u);
  s.samples = j.value("samples", 4096ull);
  s.synth.clean_ancillas = j.value("clean_ancillas", true);
  std::string variant = j.value("variant", "default");
  s.synth.variant = variant == "small-ancilla" ? VariantSelect::SmallAncilla
                    : variant == "auto"        ? VariantSelect::Auto
                                               : VariantSelect::Default;
  return s;
}

std::string SweepSpec::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["n"] = n_values;
  if (m_override) j["m"] = *m_override;
  if (ratio) j["ratio"] = *ratio;
  j["ensemble"] = ensemble;
  j["ladder"] = ladder;
  j["mode"] = mode_name(mode);
  j["lower"] = lowering.toffoli_mode == ToffoliMode::Approximate ? "approx" : "exact";
  j["seed"] = seed;
  j["threads"] = threads;
  j["exhaustive_max_n"] = exhaustive_max_n;
  j["samples"] = samples;
  j["clean_ancillas"] = synth.clean_ancillas;
  j["variant"] = synth.variant == VariantSelect::SmallAncilla ? "small-ancilla"
                 : synth.variant == VariantSelect::Auto       ? "auto"
                                                              : "default";
  return j.dump();
}

uint64_t SweepSpec::config_hash() const { return fnv1a(to_json()); }

uint64_t grover_rounds(uint32_t n) {
  if (n == 0) throw ConfigError("Grover round count needs n >= 1");
  long double amp = std::pow(2.0L, static_cast<long double>(n) / 2.0L);
  return static_cast<uint64_t>(std::floor(0.25L * 3.14159265358979323846L * amp));
}

GroverEstimate estimate_grover(uint32_t k, uint32_t n, uint32_t m, uint32_t l,
                               SynthMode mode, const SynthOptions& sopts,
                               LoweringConfig lcfg, uint64_t seed,
                               const CnfFormula* formula) {
  if (n < 2) throw ConfigError("Grover estimation needs n >= 2");
  CnfFormula f = formula ? *formula : random_kcnf(n, m, k, seed);
  Layout layout = oracle_layout(f, l);

  CostAccumulator elem_cost(layout, Level::ElementaryLevel);
  ToffoliLowerer tof(elem_cost, lcfg);
  KindCounter toffoli_count(tof, GateKind::Toffoli, GateKind::ApproxToffoli);
  MctLowerer mct(toffoli_count, layout, lcfg);

  SimProgram prog(layout);
  TeeSink tee(prog, mct);
  synth_emit(f, l, mode, sopts, tee);

  VerifyOptions vo;
  vo.mode = n <= 12 ? VerifyMode::Exhaustive : VerifyMode::Sampled;
  vo.seed = seed;
  VerificationReport rep = verify_oracle(prog, f, vo);
  if (!rep.passed())
    throw Error("oracle verification failed during Grover estimation: " +
                std::to_string(rep.total_failures()) + " failures");

  // Diffusion: H^n X^n (n-1)-MCT X^n H^n over the input register.
  auto emit_hx = [&](GateSink& s) {
    for (uint32_t i = 0; i < n; ++i) s.on_gate(Gate::phase1q(Phase1QKind::H, QubitId::input(i)));
    for (uint32_t i = 0; i < n; ++i) s.on_gate(Gate::x(QubitId::input(i)));
  };
  auto emit_xh = [&](GateSink& s) {
    for (uint32_t i = 0; i < n; ++i) s.on_gate(Gate::x(QubitId::input(i)));
    for (uint32_t i = 0; i < n; ++i) s.on_gate(Gate::phase1q(Phase1QKind::H, QubitId::input(i)));
  };
  emit_hx(mct);
  std::vector<QubitId> controls;
  for (uint32_t i = 0; i + 1 < n; ++i) controls.push_back(QubitId::input(i));
  mct.on_gate(Gate::mct(controls, QubitId::input(n - 1)));
  emit_xh(mct);

  CostReport one = elem_cost.report();
  GroverEstimate est;
  est.k = k;
  est.n = n;
  est.m = m;
  est.l = l;
  est.mode = mode;
  est.one_round_size = one.size;
  est.one_round_depth = one.depth;
  est.rounds = grover_rounds(n);
  est.full_round_size = est.rounds * est.one_round_size;
  est.full_round_depth = est.rounds * est.one_round_depth;
  return est;
}

std::string GroverEstimate::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["n"] = n;
  j["m"] = m;
  j["l"] = l;
  j["mode"] = mode_name(mode);
  j["one_round_size"] = one_round_size;
  j["one_round_depth"] = one_round_depth;
  j["rounds"] = rounds;
  j["full_round_size"] = full_round_size;
  j["full_round_depth"] = full_round_depth;
  return j.dump(2);
}

}  // namespace satoc
