#pragma once

#include <iosfwd>
#include <string>

#include "satoc/circuit.hpp"

namespace satoc {

/// OpenQASM 2.0 writer. Registers are named in[n], anc[l], tgt[1]. Negative
/// controls are expanded into X conjugation; approximate Toffolis are written
/// as their 7-gate Margolus block. MCT-level circuits must be lowered first.
void emit_qasm(const Circuit& c, std::ostream& out);
std::string emit_qasm(const Circuit& c);

/// Streaming writer for circuits too large to materialize.
class QasmWriter : public GateSink {
 public:
  QasmWriter(std::ostream& out, const Layout& layout, Level level);
  void on_gate(const Gate& g) override;

 private:
  std::ostream& out_;
  Layout layout_;
};

/// Minimal reader for the emitter's own dialect. Recognizes x/cx/ccx/h/t/
/// tdg/ry(+-pi/4) over the in/anc/tgt registers and re-folds the emitter's
/// contiguous 15-gate exact-Toffoli and 7-gate Margolus templates back into
/// atomic gates so the result is simulable.
Circuit parse_qasm(std::istream& in);
Circuit parse_qasm(const std::string& text);

}  // namespace satoc
