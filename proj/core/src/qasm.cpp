#include "satoc/qasm.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "satoc/lowering.hpp"

namespace satoc {

namespace {

void write_ref(std::ostream& out, const QubitId& q) {
  switch (q.reg) {
    case Register::Input: out << "in[" << q.offset << "]"; break;
    case Register::Ancilla: out << "anc[" << q.offset << "]"; break;
    case Register::Target: out << "tgt[" << q.offset << "]"; break;
  }
}

class LineWriter : public GateSink {
 public:
  explicit LineWriter(std::ostream& out) : out_(out) {}

  void on_gate(const Gate& g) override {
    switch (g.kind) {
      case GateKind::X:
        out_ << "x ";
        write_ref(out_, g.target);
        out_ << ";\n";
        break;
      case GateKind::Phase1Q:
        out_ << qasm_name(g.phase) << " ";
        write_ref(out_, g.target);
        out_ << ";\n";
        break;
      case GateKind::Cnot:
        if (g.any_negated()) {
          on_gate(Gate::cnot(g.controls[0], g.target));
          on_gate(Gate::x(g.target));
          return;
        }
        out_ << "cx ";
        write_ref(out_, g.controls[0]);
        out_ << ",";
        write_ref(out_, g.target);
        out_ << ";\n";
        break;
      case GateKind::Toffoli: {
        if (g.any_negated()) {
          for (size_t i = 0; i < 2; ++i)
            if (g.control_negated(i)) on_gate(Gate::x(g.controls[i]));
          Gate pos = Gate::toffoli(g.controls[0], g.controls[1], g.target);
          on_gate(pos);
          for (size_t i = 0; i < 2; ++i)
            if (g.control_negated(i)) on_gate(Gate::x(g.controls[i]));
          return;
        }
        out_ << "ccx ";
        write_ref(out_, g.controls[0]);
        out_ << ",";
        write_ref(out_, g.controls[1]);
        out_ << ",";
        write_ref(out_, g.target);
        out_ << ";\n";
        break;
      }
      case GateKind::ApproxToffoli:
        expand_toffoli_approx(g.controls[0], g.controls[1], g.target, *this);
        break;
      case GateKind::Mct:
        throw ValidationError("cannot emit QASM for an MCT-level circuit; lower it first");
    }
  }

 private:
  std::ostream& out_;
};

}  // namespace

QasmWriter::QasmWriter(std::ostream& out, const Layout& layout, Level level)
    : out_(out), layout_(layout) {
  if (level == Level::MctLevel)
    throw ValidationError("cannot emit QASM for an MCT-level circuit; lower it first");
  out_ << "OPENQASM 2.0;\n";
  out_ << "include \"qelib1.inc\";\n";
  if (layout.n_inputs) out_ << "qreg in[" << layout.n_inputs << "];\n";
  if (layout.n_ancillas) out_ << "qreg anc[" << layout.n_ancillas << "];\n";
  out_ << "qreg tgt[" << layout.n_targets << "];\n";
}

void QasmWriter::on_gate(const Gate& g) {
  LineWriter w(out_);
  w.on_gate(g);
}

void emit_qasm(const Circuit& c, std::ostream& out) {
  QasmWriter w(out, c.layout(), c.level());
  for (const auto& g : c.gates()) w.on_gate(g);
}

std::string emit_qasm(const Circuit& c) {
  std::ostringstream out;
  emit_qasm(c, out);
  return out.str();
}

namespace {

struct RawGate {
  enum Kind { X, Cx, Ccx, H, T, Tdg, RyP, RyM } kind;
  QubitId q0, q1, q2;  // controls then target
};

QubitId parse_ref(const std::string& tok, const Layout& layout, size_t line_no) {
  auto open = tok.find('[');
  auto close = tok.find(']');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw ParseError("bad qubit reference '" + tok + "' at line " + std::to_string(line_no));
  std::string reg = tok.substr(0, open);
  uint32_t off = 0;
  try {
    off = static_cast<uint32_t>(std::stoul(tok.substr(open + 1, close - open - 1)));
  } catch (const std::exception&) {
    throw ParseError("bad qubit index in '" + tok + "' at line " + std::to_string(line_no));
  }
  QubitId q;
  if (reg == "in") q = QubitId::input(off);
  else if (reg == "anc") q = QubitId::ancilla(off);
  else if (reg == "tgt") q = QubitId::target(off);
  else throw ParseError("unknown register '" + reg + "' at line " + std::to_string(line_no));
  if (!layout.contains(q))
    throw ParseError("qubit reference out of range at line " + std::to_string(line_no));
  return q;
}

// Folds the emitter's contiguous Margolus (7 gates) and exact-Toffoli
// (15 gates) templates back into atomic gates so the circuit is simulable.
bool match_margolus(const std::vector<RawGate>& raw, size_t i, Gate& out) {
  if (i + 7 > raw.size()) return false;
  const RawGate* g = &raw[i];
  using K = RawGate::Kind;
  K seq[7] = {K::RyP, K::Cx, K::RyP, K::Cx, K::RyM, K::Cx, K::RyM};
  for (int j = 0; j < 7; ++j)
    if (g[j].kind != seq[j]) return false;
  QubitId t = g[0].q0;
  for (int j : {2, 4, 6})
    if (g[j].q0 != t) return false;
  for (int j : {1, 3, 5})
    if (g[j].q1 != t) return false;
  if (g[1].q0 != g[5].q0) return false;
  out = Gate::approx_toffoli(g[3].q0, g[1].q0, t);
  return true;
}

bool match_exact_toffoli(const std::vector<RawGate>& raw, size_t i, Gate& out) {
  if (i + 15 > raw.size()) return false;
  const RawGate* g = &raw[i];
  using K = RawGate::Kind;
  K seq[15] = {K::H,  K::Cx, K::Tdg, K::Cx, K::T,  K::Cx, K::Tdg, K::Cx,
               K::T,  K::T,  K::H,   K::Cx, K::T,  K::Tdg, K::Cx};
  for (int j = 0; j < 15; ++j)
    if (g[j].kind != seq[j]) return false;
  QubitId t = g[0].q0;
  QubitId c1 = g[1].q0;
  QubitId c0 = g[3].q0;
  if (g[2].q0 != t || g[4].q0 != t || g[6].q0 != t || g[9].q0 != t || g[10].q0 != t)
    return false;
  if (g[1].q1 != t || g[3].q1 != t || g[5].q1 != t || g[7].q1 != t) return false;
  if (g[5].q0 != c1 || g[7].q0 != c0) return false;
  if (g[8].q0 != c1 || g[12].q0 != c0 || g[13].q0 != c1) return false;
  if (g[11].q0 != c0 || g[11].q1 != c1 || g[14].q0 != c0 || g[14].q1 != c1) return false;
  out = Gate::toffoli(c0, c1, t);
  return true;
}

}  // namespace

Circuit parse_qasm(std::istream& in) {
  Layout layout{0, 0, 0};
  std::vector<RawGate> raw;
  std::string line;
  size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    // strip comments and the trailing semicolon
    if (auto c = line.find("//"); c != std::string::npos) line.resize(c);
    std::string stripped;
    for (char ch : line)
      if (ch != ';' && ch != ',') stripped += ch;
      else stripped += ' ';
    std::istringstream ls(stripped);
    std::string op;
    if (!(ls >> op)) continue;
    if (op == "OPENQASM" || op == "include" || op == "creg" || op == "barrier") continue;
    if (op == "qreg") {
      std::string decl;
      ls >> decl;
      auto open = decl.find('['), close = decl.find(']');
      if (open == std::string::npos || close == std::string::npos)
        throw ParseError("bad qreg at line " + std::to_string(line_no));
      uint32_t size = static_cast<uint32_t>(std::stoul(decl.substr(open + 1, close - open - 1)));
      std::string name = decl.substr(0, open);
      if (name == "in") layout.n_inputs = size;
      else if (name == "anc") layout.n_ancillas = size;
      else if (name == "tgt") layout.n_targets = size;
      else throw ParseError("unknown register '" + name + "' at line " + std::to_string(line_no));
      continue;
    }

    RawGate g{};
    std::string a, b, c;
    if (op == "x" || op == "h" || op == "t" || op == "tdg" || op == "ry(pi/4)" ||
        op == "ry(-pi/4)") {
      if (!(ls >> a)) throw ParseError("missing operand at line " + std::to_string(line_no));
      g.kind = op == "x"   ? RawGate::X
               : op == "h" ? RawGate::H
               : op == "t" ? RawGate::T
               : op == "tdg" ? RawGate::Tdg
               : op == "ry(pi/4)" ? RawGate::RyP
                                  : RawGate::RyM;
      g.q0 = parse_ref(a, layout, line_no);
    } else if (op == "cx") {
      if (!(ls >> a >> b)) throw ParseError("missing operand at line " + std::to_string(line_no));
      g.kind = RawGate::Cx;
      g.q0 = parse_ref(a, layout, line_no);
      g.q1 = parse_ref(b, layout, line_no);
    } else if (op == "ccx") {
      if (!(ls >> a >> b >> c)) throw ParseError("missing operand at line " + std::to_string(line_no));
      g.kind = RawGate::Ccx;
      g.q0 = parse_ref(a, layout, line_no);
      g.q1 = parse_ref(b, layout, line_no);
      g.q2 = parse_ref(c, layout, line_no);
    } else {
      throw ParseError("unsupported QASM statement '" + op + "' at line " +
                       std::to_string(line_no));
    }
    raw.push_back(g);
  }
  if (layout.n_targets == 0)
    throw ParseError("missing tgt register declaration");

  std::vector<Gate> folded;
  bool leftover_phase = false;
  for (size_t i = 0; i < raw.size();) {
    Gate g;
    if (match_margolus(raw, i, g)) {
      folded.push_back(g);
      i += 7;
      continue;
    }
    if (match_exact_toffoli(raw, i, g)) {
      folded.push_back(g);
      i += 15;
      continue;
    }
    const RawGate& r = raw[i];
    switch (r.kind) {
      case RawGate::X: folded.push_back(Gate::x(r.q0)); break;
      case RawGate::Cx: folded.push_back(Gate::cnot(r.q0, r.q1)); break;
      case RawGate::Ccx: folded.push_back(Gate::toffoli(r.q0, r.q1, r.q2)); break;
      case RawGate::H: folded.push_back(Gate::phase1q(Phase1QKind::H, r.q0)); leftover_phase = true; break;
      case RawGate::T: folded.push_back(Gate::phase1q(Phase1QKind::T, r.q0)); leftover_phase = true; break;
      case RawGate::Tdg: folded.push_back(Gate::phase1q(Phase1QKind::Tdg, r.q0)); leftover_phase = true; break;
      case RawGate::RyP: folded.push_back(Gate::phase1q(Phase1QKind::RyQuarter, r.q0)); leftover_phase = true; break;
      case RawGate::RyM: folded.push_back(Gate::phase1q(Phase1QKind::RyQuarterNeg, r.q0)); leftover_phase = true; break;
    }
    ++i;
  }

  if (leftover_phase) {
    for (const auto& g : folded)
      if (g.kind == GateKind::Toffoli || g.kind == GateKind::ApproxToffoli)
        throw ParseError(
            "unfolded single-qubit gates mixed with Toffolis: not a circuit this "
            "reader's templates can reconstruct");
  }
  Circuit circuit(layout, leftover_phase ? Level::ElementaryLevel : Level::ToffoliLevel);
  for (auto& g : folded) circuit.append(std::move(g));
  return circuit;
}

Circuit parse_qasm(const std::string& text) {
  std::istringstream in(text);
  return parse_qasm(in);
}

}  // namespace satoc
